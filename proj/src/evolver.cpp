#include "css/evolver.hpp"

#include <cmath>

namespace css {

namespace {

// Cell geometry for the flux-form Laplacian; cell widths coincide with the
// trapezoid weights in the interior.
struct CellGeom {
    std::vector<double> h;        // cell widths
    std::vector<double> rface;    // faces r_{j+1/2}, size n-1
    std::vector<double> d;        // node gaps r_{j+1}-r_j, size n-1
};

CellGeom make_cells(const RadialGrid& g) {
    const auto& r = g.r;
    const std::size_t n = r.size();
    CellGeom c;
    c.h.resize(n);
    c.rface.resize(n - 1);
    c.d.resize(n - 1);
    for (std::size_t j = 0; j + 1 < n; ++j) {
        c.d[j] = r[j + 1] - r[j];
        c.rface[j] = 0.5 * (r[j] + r[j + 1]);
    }
    for (std::size_t j = 0; j < n; ++j) {
        const double lo = (j == 0) ? std::max(0.0, r[0] - 0.5 * c.d[0]) : c.rface[j - 1];
        const double hi = (j + 1 == n) ? r[n - 1] + 0.5 * c.d[n - 2] : c.rface[j];
        c.h[j] = hi - lo;
    }
    return c;
}

std::vector<double> potential(const ComplexField& u, int m, AtVariant variant) {
    std::vector<double> at = a_theta(u);
    std::vector<double> atime = a_t(u, m, variant);
    const auto& r = u.grid->r;
    std::vector<double> V(u.n());
    for (std::size_t j = 0; j < u.n(); ++j) {
        const double rr = r[j];
        V[j] = -std::norm(u.v[j]) + (2.0 * m * at[j] + at[j] * at[j]) / (rr * rr) + atime[j];
    }
    return V;
}

} // namespace

ComplexField evolver_step(const ComplexField& u, double dt, int m, AtVariant variant,
                          bool nonlinear, bool* breakdown) {
    const RadialGrid& g = *u.grid;
    const std::size_t n = u.n();
    static thread_local const RadialGrid* cached_grid = nullptr;
    static thread_local CellGeom cells;
    if (cached_grid != &g) {
        cells = make_cells(g);
        cached_grid = &g;
    }

    ComplexField w = u;
    if (nonlinear) {
        std::vector<double> V = potential(w, m, variant);
        for (std::size_t j = 0; j < n; ++j)
            w.v[j] *= std::polar(1.0, -0.5 * dt * V[j]);
    }

    // Crank-Nicolson for u_t = i Delta^{(m)} u:
    //   (M + i theta K) u+ = (M - i theta K) u, theta = dt/2,
    // with M = diag(r_j h_j) and K the symmetric flux stiffness.
    const double theta = 0.5 * dt;
    const auto& r = g.r;
    std::vector<Cplx> a(n), b(n), c(n), rhs(n);
    const double m2 = double(m) * double(m);
    for (std::size_t j = 0; j < n; ++j) {
        const double Mj = r[j] * cells.h[j];
        double kdiag = m2 / (r[j] * r[j]) * Mj;
        double klo = 0.0, khi = 0.0;
        if (j > 0) {
            klo = -cells.rface[j - 1] / cells.d[j - 1];
            kdiag += cells.rface[j - 1] / cells.d[j - 1];
        }
        if (j + 1 < n) {
            khi = -cells.rface[j] / cells.d[j];
            kdiag += cells.rface[j] / cells.d[j];
        } else {
            // Dirichlet ghost beyond r_max
            kdiag += (r[n - 1] + 0.5 * cells.d[n - 2]) / cells.d[n - 2];
        }
        const Cplx it(0.0, theta);
        a[j] = (j > 0) ? it * klo : Cplx(0.0);
        c[j] = (j + 1 < n) ? it * khi : Cplx(0.0);
        b[j] = Cplx(Mj, 0.0) + it * kdiag;
        Cplx acc = Cplx(Mj, 0.0) * w.v[j] - it * kdiag * w.v[j];
        if (j > 0) acc -= it * klo * w.v[j - 1];
        if (j + 1 < n) acc -= it * khi * w.v[j + 1];
        rhs[j] = acc;
    }
    // Thomas solve
    bool broke = false;
    std::vector<Cplx> cp(n), dp(n);
    {
        Cplx beta = b[0];
        if (std::abs(beta) < 1e-300) broke = true;
        cp[0] = c[0] / beta;
        dp[0] = rhs[0] / beta;
        for (std::size_t j = 1; j < n; ++j) {
            beta = b[j] - a[j] * cp[j - 1];
            if (std::abs(beta) < 1e-300) { broke = true; break; }
            cp[j] = c[j] / beta;
            dp[j] = (rhs[j] - a[j] * dp[j - 1]) / beta;
        }
    }
    if (breakdown) *breakdown = broke;
    if (broke) return w;
    w.v[n - 1] = dp[n - 1];
    for (std::size_t j = n - 1; j-- > 0;) w.v[j] = dp[j] - cp[j] * w.v[j + 1];

    if (nonlinear) {
        std::vector<double> V = potential(w, m, variant);
        for (std::size_t j = 0; j < n; ++j)
            w.v[j] *= std::polar(1.0, -0.5 * dt * V[j]);
    }
    return w;
}

SimulationState make_state(ComplexField u0, double t0, int m, AtVariant variant) {
    SimulationState s;
    s.t = t0;
    s.u = std::move(u0);
    s.mass0 = mass(s.u);
    s.energy0 = energy(s.u, m, EnergyForm::Coulomb);
    (void)variant;
    return s;
}

static DiagnosticsRow diag_row(const SimulationState& s, int m) {
    DiagnosticsRow row;
    row.t = s.t;
    row.mass = mass(s.u);
    row.energy = energy(s.u, m, EnergyForm::Coulomb);
    ComplexField f(s.u.grid, 2 * std::abs(s.u.m));
    const auto& r = s.u.grid->r;
    for (std::size_t j = 0; j < s.u.n(); ++j)
        f.v[j] = r[j] * r[j] * std::norm(s.u.v[j]);
    row.moment_r2 = integrate_real(f);
    row.virial_rate1 = virial_rates(s.u, m).first;
    return row;
}

SimulationState evolve(SimulationState state, double t_end, const EvolverConfig& cfg,
                       const std::function<double(const SimulationState&)>& lambda_est,
                       const std::function<bool(SimulationState&)>& monitor) {
    const double dir = (t_end > state.t) ? 1.0 : -1.0;
    const RadialGrid& g = *state.u.grid;
    double h_uniform2 = 0.0;
    if (g.kind == GridKind::Uniform) {
        const double h = g.r[1] - g.r[0];
        h_uniform2 = h * h;
    }
    std::vector<double> sponge;
    if (cfg.sponge_strength > 0.0) {
        sponge.resize(g.n());
        const double edge = 0.9 * g.r_max;
        for (std::size_t j = 0; j < g.n(); ++j) {
            const double x = (g.r[j] - edge) / (0.1 * g.r_max);
            const double s = (x <= 0.0) ? 0.0 : (x >= 1.0 ? 1.0 : x * x * (3.0 - 2.0 * x));
            sponge[j] = cfg.sponge_strength * s * s;
        }
    }

    state.rows.push_back(diag_row(state, cfg.m));
    int since_monitor = 0;
    while ((t_end - state.t) * dir > 1e-15) {
        double dt = cfg.dt_max;
        if (lambda_est) {
            const double le = lambda_est(state);
            if (le > 0.0 && std::isfinite(le)) dt = std::min(dt, cfg.c_cfl * le * le);
        }
        if (h_uniform2 > 0.0) dt = std::min(dt, cfg.c_cfl * h_uniform2);
        dt = std::min(dt, std::abs(t_end - state.t));
        bool broke = false;
        state.u = evolver_step(state.u, dir * dt, cfg.m, cfg.variant, cfg.nonlinear, &broke);
        if (broke) {
            state.solver_breakdown = true;
            break;
        }
        if (!sponge.empty()) {
            const double before = mass(state.u);
            for (std::size_t j = 0; j < g.n(); ++j)
                state.u.v[j] *= std::exp(-sponge[j] * dt);
            state.absorbed_mass += before - mass(state.u);
        }
        state.t += dir * dt;
        ++state.steps;
        if (++since_monitor >= cfg.monitor_stride || (t_end - state.t) * dir <= 1e-15) {
            since_monitor = 0;
            state.rows.push_back(diag_row(state, cfg.m));
            const DiagnosticsRow& row = state.rows.back();
            const double mdrift = std::abs(row.mass - state.mass0) / std::max(state.mass0, 1e-300);
            const double edrift = std::abs(row.energy - state.energy0) /
                                  std::max(std::abs(state.energy0), 1.0);
            if (mdrift > cfg.mass_drift_budget + state.absorbed_mass / std::max(state.mass0, 1e-300) ||
                edrift > cfg.energy_drift_budget) {
                state.budget_violation = true;
                break;
            }
            if (monitor && !monitor(state)) break;
        }
    }
    return state;
}

ConservationReport conservation_report(const SimulationState& state) {
    ConservationReport rep;
    const auto& rows = state.rows;
    if (rows.size() < 3) return rep;
    const double T = std::abs(rows.back().t - rows.front().t);
    rep.mass_drift_per_time =
        std::abs(rows.back().mass - rows.front().mass) / std::max(rows.front().mass, 1e-300) / T;
    rep.energy_drift_per_time = std::abs(rows.back().energy - rows.front().energy) /
                                std::max(std::abs(rows.front().energy), 1.0) / T;
    double num = 0.0, den = 0.0;
    for (std::size_t k = 1; k + 1 < rows.size(); ++k) {
        const double dt2 = rows[k + 1].t - rows[k - 1].t;
        if (dt2 == 0.0) continue;
        const double fd = (rows[k + 1].moment_r2 - rows[k - 1].moment_r2) / dt2;
        num += (fd - rows[k].virial_rate1) * (fd - rows[k].virial_rate1);
        den += rows[k].virial_rate1 * rows[k].virial_rate1;
    }
    rep.virial_mismatch_rel = (den > 0.0) ? std::sqrt(num / den) : 0.0;
    return rep;
}

BlowupResult blowup_experiment(Cplx q, Cplx nu, double tau, double window,
                               const GridPtr& grid, EvolverConfig cfg, int n_monitor) {
    BlowupResult out;
    SolitonProfile Q = vortex(0, grid);
    NullModeRho rho = solve_rho(0, grid);
    OrthoProfiles ortho = build_ortho_profiles(grid, Q, rho);
    RadiationWorkspace ws(RadiationSpec::make(q, nu), grid);
    const Cplx p = 0.5 * gamma_complex(nu / 2.0 + 2.0);
    (void)p;

    InitialData id = initial_data(q, nu, tau, grid, Q, rho, ws);
    SimulationState st = make_state(id.u, tau, cfg.m, cfg.variant);

    const double t_end = tau + window;
    double gamma_z = id.gamma_z;
    double theta_prev = ws.theta_at(std::abs(tau));
    double t_prev = tau;
    ModState track = id.state;

    auto record = [&](SimulationState& s) -> bool {
        // advance gamma_z incrementally: gamma_z(t) = gamma_z(t0) - int theta dt'
        const double th = ws.theta_at(std::abs(s.t));
        gamma_z += -0.5 * (theta_prev + th) * (s.t - t_prev);
        theta_prev = th;
        t_prev = s.t;

        RadiationField zf = ws.build(s.t, false);
        zf.gamma_z = gamma_z;
        ModState guess = track;
        guess.t = s.t;
        DecompositionResult dec = decompose(s.u, zf.z, gamma_z, Q, ortho, guess);
        if (!dec.converged || !dec.tube_ok) {
            out.completed = false;
            out.failure = dec.tube_ok ? "decomposition did not converge"
                                      : "solution left the decomposition tube";
            return false;
        }
        track.lambda = dec.lambda;
        track.gamma = dec.gamma;
        track.t = s.t;
        RefinedParams rp = refined_params(dec, s.t, Q, rho);
        track.b = rp.b;
        track.eta = rp.eta;

        const ModState cf = closed_form_state(q, nu, s.t);
        BlowupRow row;
        row.t = s.t;
        row.lambda = dec.lambda;
        row.gamma = dec.gamma;
        row.b = rp.b;
        row.eta = rp.eta;
        row.B0 = rp.B0;
        row.zeta_re = rp.zeta.real();
        row.zeta_im = rp.zeta.imag();
        row.E_cal = energy_functional(s.u, track, zf, Q);
        row.P = rp.P_surrogate;
        row.mass = mass(s.u);
        row.energy = energy(s.u, 0, EnergyForm::Coulomb);
        row.eps_l2 = dec.eps_l2;
        row.eps_h1 = dec.eps_h1;
        row.lambda_ratio = dec.lambda / cf.lambda;
        row.b_ratio = rp.b / cf.b;
        row.eps_band = dec.eps_l2 /
                       (std::sqrt(cf.b) * std::abs(std::log(cf.b)));
        out.rows.push_back(row);
        return true;
    };

    // choose the step stride so n_monitor rows appear across the window
    long est_steps = 0;
    {
        double t = tau;
        while (t < t_end && est_steps < 100000000L) {
            const ModState cf = closed_form_state(q, nu, t);
            double dt = std::min(cfg.dt_max, cfg.c_cfl * cf.lambda * cf.lambda);
            t += dt;
            ++est_steps;
        }
    }
    cfg.monitor_stride = std::max(1L, est_steps / std::max(1, n_monitor));

    auto lambda_cb = [&](const SimulationState&) { return track.lambda; };
    SimulationState fin = evolve(std::move(st), t_end, cfg, lambda_cb, record);
    if (fin.budget_violation) {
        out.completed = false;
        out.failure = "conservation budget violated";
    }
    if (fin.solver_breakdown) {
        out.completed = false;
        out.failure = "tridiagonal solver breakdown";
    }
    return out;
}

} // namespace css
