#include "css/modulation.hpp"

#include <cmath>

namespace css {

ModState ModState::from(double t, Cplx lam, Cplx bb) {
    ModState s;
    s.t = t;
    s.lambda = std::abs(lam);
    s.gamma = std::atan2(lam.imag(), lam.real());
    s.b = bb.real();
    s.eta = bb.imag();
    return s;
}

Cplx closed_form_lambda(Cplx q, Cplx nu, double t) {
    if (!(t < 0.0)) throw std::invalid_argument("closed form defined for t < 0");
    const double L = std::abs(std::log(std::abs(t)));
    const Cplx g = gamma_complex(nu / 2.0);
    const Cplx pw = cpow_principal(Cplx(0.0, 4.0 * t), nu / 2.0 + 1.0);
    return -std::sqrt(2.0) / 4.0 * g / (nu.real() + 1.0) * q * pw / L;
}

Cplx closed_form_b(Cplx q, Cplx nu, double t) {
    if (!(t < 0.0)) throw std::invalid_argument("closed form defined for t < 0");
    const double L = std::abs(std::log(std::abs(t)));
    const Cplx g = gamma_complex(nu / 2.0);
    const double gr = std::abs(g / (nu.real() + 1.0));
    const double amp = std::pow(4.0 * std::abs(t), nu.real() + 1.0);
    return 0.5 * (nu / 2.0 + 1.0) * gr * gr * std::norm(q) * amp / (L * L);
}

ModState closed_form_state(Cplx q, Cplx nu, double t) {
    return ModState::from(t, closed_form_lambda(q, nu, t), closed_form_b(q, nu, t));
}

Cplx closed_form_dlambda_dt(Cplx q, Cplx nu, double t, bool freeze_log) {
    const Cplx lam = closed_form_lambda(q, nu, t);
    // d/dt log lam = (nu/2+1)/t  [+ 1/(t L) from the log factor]
    Cplx dlog = (nu / 2.0 + 1.0) / t;
    if (!freeze_log) {
        const double L = std::abs(std::log(std::abs(t)));
        dlog += 1.0 / (t * L);
    }
    return lam * dlog;
}

// --------------------------------------------------------------- mod ODE

namespace {

struct ModVec {
    Cplx lam, bb;
};

ModVec operator+(ModVec a, ModVec b) { return {a.lam + b.lam, a.bb + b.bb}; }
ModVec operator*(double s, ModVec a) { return {s * a.lam, s * a.bb}; }

} // namespace

ModOdeResult mod_ode_integrate(Cplx q, Cplx nu, double t_from, const ModState& state_from,
                               double t_to, int n_samples) {
    ModOdeResult out;
    const Cplx p = 0.5 * gamma_complex(nu / 2.0 + 2.0);
    const double pref = 8.0 * std::sqrt(8.0) * M_PI;

    auto rhs = [&](double t, const ModVec& s, ModVec* d) -> bool {
        const double lambda = std::abs(s.lam);
        if (!(lambda > 0.0)) return false;
        const double B0 = std::sqrt(std::abs(t)) / lambda;
        const double logB0 = std::log(B0);
        if (!(logB0 > 1.0)) return false;
        const Cplx it4 = cpow_principal(Cplx(0.0, 4.0 * t), (nu - 2.0) / 2.0);
        const Cplx lam_c = lambda * lambda * std::conj(s.lam) * pref * p * q * it4 /
                           (4.0 * M_PI * logB0);
        const double il2 = 1.0 / (lambda * lambda);
        d->lam = -s.lam * s.bb * il2;
        d->bb = -(std::norm(s.bb) + lam_c) * il2;
        return true;
    };

    ModVec y{state_from.lam(), state_from.bb()};
    double t = t_from;
    out.trajectory.push_back(state_from);

    std::vector<double> samples(n_samples);
    for (int i = 0; i < n_samples; ++i) {
        // geometric ladder in |t| between t_from and t_to
        const double a = std::log(std::abs(t_from)), b = std::log(std::abs(t_to));
        samples[i] = -std::exp(a + (b - a) * double(i + 1) / double(n_samples));
    }

    const double dir = (t_to > t_from) ? 1.0 : -1.0;
    double h = dir * std::abs(t_from - t_to) / 1024.0;
    const double rtol = 1e-10, atol = 1e-16;
    std::size_t isample = 0;
    int guard = 0;
    while (isample < samples.size() && ++guard < 5000000) {
        double target = samples[isample];
        if ((t + h - target) * dir > 0.0) h = target - t;
        ModVec k[7], tmp;
        bool ok = rhs(t, y, &k[0]);
        auto stage = [&](double c, std::initializer_list<double> as) {
            tmp = y;
            int i = 0;
            for (double a : as) { tmp = tmp + (h * a) * k[i]; ++i; }
            return rhs(t + c * h, tmp, &k[i]);
        };
        ok = ok && stage(1.0 / 5, {1.0 / 5});
        ok = ok && stage(3.0 / 10, {3.0 / 40, 9.0 / 40});
        ok = ok && stage(4.0 / 5, {44.0 / 45, -56.0 / 15, 32.0 / 9});
        ok = ok && stage(8.0 / 9, {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729});
        ok = ok && stage(1.0, {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656});
        ok = ok && stage(1.0, {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84});
        if (!ok) {
            out.ok = false;
            out.failure = "modulation ODE left the admissible region (lambda <= 0 or log B0 <= 1)";
            return out;
        }
        static const double b5[7] = {35.0 / 384, 0, 500.0 / 1113, 125.0 / 192,
                                     -2187.0 / 6784, 11.0 / 84, 0};
        static const double b4[7] = {5179.0 / 57600, 0, 7571.0 / 16695, 393.0 / 640,
                                     -92097.0 / 339200, 187.0 / 2100, 1.0 / 40};
        ModVec y5 = y, y4 = y;
        for (int i = 0; i < 7; ++i) {
            y5 = y5 + (h * b5[i]) * k[i];
            y4 = y4 + (h * b4[i]) * k[i];
        }
        const double sc = atol + rtol * (std::abs(y5.lam) + std::abs(y5.bb));
        const double err = (std::abs(y5.lam - y4.lam) + std::abs(y5.bb - y4.bb)) / sc;
        if (err <= 1.0) {
            t += h;
            y = y5;
            if (std::abs(t - samples[isample]) < 1e-14 * std::abs(t)) {
                out.trajectory.push_back(ModState::from(t, y.lam, y.bb));
                ++isample;
            }
        }
        h *= std::clamp(0.9 * std::pow(std::max(err, 1e-16), -0.2), 0.2, 5.0);
    }
    if (isample < samples.size()) {
        out.ok = false;
        out.failure = "modulation ODE step-count guard tripped";
    }
    return out;
}

// ------------------------------------------------------------ decompose

DecompositionResult decompose(const ComplexField& u, const ComplexField& z, double gamma_z,
                              const SolitonProfile& Q, const OrthoProfiles& ortho,
                              const ModState& guess, int max_iter) {
    const GridPtr grid = u.grid;
    const auto& y = grid->r;
    const Cplx e_mgz = std::polar(1.0, -gamma_z);
    ComplexField w(grid, 0);
    for (std::size_t j = 0; j < u.n(); ++j) w.v[j] = e_mgz * u.v[j] - z.v[j];

    DecompositionResult out;
    out.eps = ComplexField(grid, 0);

    // tube precondition against the guess
    {
        ComplexField diff(grid, 0);
        const Cplx ph = std::polar(1.0 / guess.lambda, guess.gamma);
        for (std::size_t j = 0; j < u.n(); ++j)
            diff.v[j] = w.v[j] - ph * vortex_value(Q.m, y[j] / guess.lambda);
        const double qn = norm_l2(Q.field);
        out.tube_ok = norm_l2(diff) < 0.3 * qn;
    }

    double lambda = guess.lambda, gamma = guess.gamma;
    const double tol = 1e-10 * real_inner(Q.field, Q.field);

    auto assemble_eps = [&](double lam, double gam, ComplexField* eps,
                            ComplexField* lam_dir) {
        const Cplx ph = std::polar(lam, -gam);
        for (std::size_t j = 0; j < u.n(); ++j) {
            const double x = lam * y[j];
            InterpPair ip = interp_field_with_deriv(w, x);
            eps->v[j] = ph * ip.value - Q.field.v[j];
            if (lam_dir) {
                // d/d lambda [lam e^{-i gam} w(lam y)] = (1/lam)[Lambda w]^flat
                lam_dir->v[j] = ph * (ip.value + x * ip.deriv) / lam;
            }
        }
    };

    ComplexField eps(grid, 0), lam_dir(grid, 0);
    for (int it = 0; it < max_iter; ++it) {
        assemble_eps(lambda, gamma, &eps, &lam_dir);
        const double f1 = real_inner(eps, ortho.z1);
        const double f2 = real_inner(eps, ortho.z2);
        out.iterations = it;
        if (std::abs(f1) <= tol && std::abs(f2) <= tol) {
            out.converged = true;
            break;
        }
        // d eps/d gamma = -i (eps + Q)
        ComplexField gam_dir(grid, 0);
        for (std::size_t j = 0; j < u.n(); ++j)
            gam_dir.v[j] = Cplx(0.0, -1.0) * (eps.v[j] + Q.field.v[j]);
        const double j11 = real_inner(lam_dir, ortho.z1), j12 = real_inner(gam_dir, ortho.z1);
        const double j21 = real_inner(lam_dir, ortho.z2), j22 = real_inner(gam_dir, ortho.z2);
        const double det = j11 * j22 - j12 * j21;
        if (det == 0.0) break;
        const double dl = (-f1 * j22 + f2 * j12) / det;
        const double dg = (-j11 * f2 + j21 * f1) / det;
        double step = 1.0;
        if (lambda + dl <= 0.0) step = 0.5 * lambda / std::abs(dl);
        lambda += step * dl;
        gamma += step * dg;
    }
    assemble_eps(lambda, gamma, &eps, nullptr);
    out.lambda = lambda;
    out.gamma = std::remainder(gamma, 2.0 * M_PI);
    out.eps = eps;
    out.ortho_resid1 = real_inner(eps, ortho.z1);
    out.ortho_resid2 = real_inner(eps, ortho.z2);
    // diagnostics restricted to y <= r_max/lambda, where w-samples exist
    ComplexField eps_win = eps;
    if (lambda > 1.0) {
        const double ycut = grid->r_max / lambda;
        for (std::size_t j = 0; j < eps_win.n(); ++j)
            if (y[j] > ycut) eps_win.v[j] = 0.0;
    }
    NormRecord nr = norms(eps_win);
    out.eps_l2 = nr.l2;
    out.eps_h1 = nr.h1dot;
    return out;
}

// -------------------------------------------------------- refined params

RefinedParams refined_params(const DecompositionResult& dec, double t,
                             const SolitonProfile& Q, const NullModeRho& rho,
                             double s_lo, double s_hi) {
    if (!(s_hi < s_lo && s_lo < 0.25 && s_hi > 0.0))
        throw std::invalid_argument("averaging exponents must satisfy 0 < s_hi < s_lo < 1/4");
    const GridPtr grid = dec.eps.grid;
    const auto& y = grid->r;
    RefinedParams out;
    const double lambda = dec.lambda;
    out.B0 = std::sqrt(std::abs(t)) / lambda;
    out.log_B0 = std::log(out.B0);
    const double Lt = std::abs(std::log(std::abs(t)));
    out.B_lo = out.B0 / std::pow(Lt, s_lo);
    out.B_hi = out.B0 / std::pow(Lt, s_hi);

    const ComplexField& eps = dec.eps;
    ComplexField d_eps = d_r(eps);
    ComplexField lam_eps = scaling_gen(eps);

    auto lambda_B_of = [&](const ComplexField& f, const ComplexField& df, double B) {
        Cutoff c{B};
        ComplexField outf(grid, f.m);
        for (std::size_t j = 0; j < grid->n(); ++j) {
            const double chi = c.chi(y[j]), dchi = c.dchi(y[j]);
            outf.v[j] = chi * (y[j] * df.v[j] + f.v[j]) + 0.5 * y[j] * dchi * f.v[j];
        }
        return outf;
    };

    ComplexField dQ = d_r(Q.field);

    const int K = 16;
    double b_acc = 0.0, eta_acc = 0.0, P_acc = 0.0;
    ComplexField LQeps = l_u(Q.field, eps, Q.m);
    for (int k = 0; k < K; ++k) {
        const double logB = std::log(out.B_lo) +
                            (std::log(out.B_hi) - std::log(out.B_lo)) * (k + 0.5) / K;
        const double B = std::exp(logB);
        Cutoff c{B};
        // b-piece: (eps, i Lambda_B Q)_r + 1/2 (eps, i Lambda_B eps)_r
        ComplexField lamBQ = lambda_B_of(Q.field, dQ, B);
        ComplexField lamBe = lambda_B_of(eps, d_eps, B);
        double br = real_inner(eps, Cplx(0.0, 1.0) * lamBQ) +
                    0.5 * real_inner(eps, Cplx(0.0, 1.0) * lamBe);
        // eta-piece: (eps, chi_B Q)_r + 1/2 (eps, chi_B eps)_r
        ComplexField chiQ(grid, Q.m), chie(grid, eps.m);
        for (std::size_t j = 0; j < grid->n(); ++j) {
            const double chi = c.chi(y[j]);
            chiQ.v[j] = chi * Q.field.v[j];
            chie.v[j] = chi * eps.v[j];
        }
        double er = real_inner(eps, chiQ) + 0.5 * real_inner(eps, chie);
        b_acc += br;
        eta_acc += er;

        // P-piece: remove the chi_{B/2} (y/2) Q and chi_{B/2} i (y/2) Q components
        Cutoff ch{B / 2.0};
        ComplexField e1(grid, Q.m);
        for (std::size_t j = 0; j < grid->n(); ++j)
            e1.v[j] = ch.chi(y[j]) * 0.5 * y[j] * Q.field.v[j];
        const double nrm2 = real_inner(e1, e1);
        const double c1 = real_inner(LQeps, e1) / nrm2;
        const double c2 = real_inner(LQeps, Cplx(0.0, 1.0) * e1) / nrm2;
        ComplexField perp(grid, 0);
        for (std::size_t j = 0; j < grid->n(); ++j)
            perp.v[j] = LQeps.v[j] - (c1 + Cplx(0.0, 1.0) * c2) * e1.v[j];
        ComplexField integ(grid, 0);
        for (std::size_t j = 0; j < grid->n(); ++j)
            integ.v[j] = c.chi(y[j]) * std::norm(perp.v[j]);
        P_acc += integrate_real(integ);
    }
    const double denom = 4.0 * M_PI * out.log_B0;
    out.b = b_acc / K / denom;
    out.eta = eta_acc / K / denom;
    out.P_surrogate = P_acc / K / denom;

    // zeta = lam {1 + [(eps, y^2 Q chi_B0 / 4)_r + i (eps, i rho chi_B0)_r] / (4 pi log B0)}
    Cutoff c0{out.B0};
    ComplexField y2Qc(grid, Q.m), irhoc(grid, Q.m);
    for (std::size_t j = 0; j < grid->n(); ++j) {
        const double chi = c0.chi(y[j]);
        y2Qc.v[j] = 0.25 * y[j] * y[j] * Q.field.v[j] * chi;
        irhoc.v[j] = Cplx(0.0, 1.0) * rho.field.v[j] * chi;
    }
    const Cplx corr(real_inner(eps, y2Qc) / denom, real_inner(eps, irhoc) / denom);
    out.zeta = std::polar(lambda, dec.gamma) * (1.0 + corr);
    return out;
}

// ------------------------------------------------------------ interaction

InteractionResult interaction_RQz(const RadiationField& zf, const ModState& state,
                                  const SolitonProfile& Q, Cplx p, Cplx q, Cplx nu) {
    const GridPtr grid = Q.field.grid;
    const auto& y = grid->r;
    const double lambda = state.lambda;
    const Cplx emg = std::polar(1.0, -state.gamma);

    // z^flat(y) = lambda e^{-i gamma} z(lambda y); z1^{flat_{-1}} = lambda^2 e^{-i gamma} z1(lambda y)
    ComplexField zb(grid, zf.z.m), z1b(grid, zf.z1.m);
    for (std::size_t j = 0; j < grid->n(); ++j) {
        zb.v[j] = lambda * emg * interp_field(zf.z, lambda * y[j]);
        z1b.v[j] = lambda * lambda * emg * interp_field(zf.z1, lambda * y[j]);
    }

    std::vector<double> aQ = a_theta(Q.field);
    std::vector<double> aQz = a_theta_bilinear(Q.field, zb);

    // tail/prefix line integrals
    ComplexField gQz1(grid, 0);
    for (std::size_t j = 0; j < grid->n(); ++j) {
        const Cplx pr = Q.field.v[j] * z1b.v[j];  // Q real
        gQz1.v[j] = pr.real();
    }
    gQz1.m = std::abs(Q.m) + 1;
    ComplexField tailQz1 = tail_line(gQz1);
    ComplexField gzz1(grid, 0);
    for (std::size_t j = 0; j < grid->n(); ++j) {
        const Cplx pr = std::conj(zb.v[j]) * z1b.v[j];
        gzz1.v[j] = pr.real();
    }
    gzz1.m = 3;
    ComplexField prezz1 = cumulative_line(gzz1);

    // last group: L*_{Q+z^flat}(D_{Q+z^flat}(Q+z^flat) - z1^flat)
    ComplexField Qpz(grid, 0);
    for (std::size_t j = 0; j < grid->n(); ++j) Qpz.v[j] = Q.field.v[j] + zb.v[j];
    ComplexField DQpz = bogomolnyi(Qpz, Q.m);
    ComplexField inner(grid, DQpz.m);
    for (std::size_t j = 0; j < grid->n(); ++j) inner.v[j] = DQpz.v[j] - z1b.v[j];
    ComplexField last = l_u_star(Qpz, inner, Q.m);

    InteractionResult out;
    out.field = ComplexField(grid, 0);
    for (std::size_t j = 0; j < grid->n(); ++j) {
        const double yy = y[j];
        Cplx val = -(2.0 + aQ[j]) / yy * z1b.v[j];                 // T1
        val += tailQz1.v[j].real() * Q.field.v[j];                  // T2
        val += -(2.0 * aQz[j]) / yy * z1b.v[j];                     // T3
        val += tailQz1.v[j].real() * zb.v[j];                       // T4
        val += -prezz1.v[j].real() * Q.field.v[j];                  // T5
        val += last.v[j];                                           // T6
        out.field.v[j] = val;
    }

    ComplexField lamQ = scaling_gen(Q.field);
    ComplexField iQ = Cplx(0.0, 1.0) * Q.field;
    out.ip_lambda_q = real_inner(out.field, lamQ);
    out.ip_iq = real_inner(out.field, iQ);
    out.l2 = norm_l2(out.field);

    const Cplx it4 = cpow_principal(Cplx(0.0, 4.0 * state.t), (nu - 2.0) / 2.0);
    const Cplx core = emg * p * q * it4;
    const double pref = 8.0 * std::sqrt(8.0) * M_PI * lambda * lambda * lambda;
    out.pred_lambda_q = pref * core.real();
    out.pred_iq = -pref * core.imag();
    return out;
}

// ------------------------------------------------------------- energy

double energy_functional(const ComplexField& u, const ModState& state,
                         const RadiationField& zf, const SolitonProfile& Q) {
    const GridPtr grid = u.grid;
    const auto& r = grid->r;
    const Cplx ph = std::polar(1.0 / state.lambda, state.gamma);

    ComplexField Qs(grid, 0);
    for (std::size_t j = 0; j < grid->n(); ++j)
        Qs.v[j] = ph * vortex_value(Q.m, r[j] / state.lambda);
    ComplexField Qs_plus_z = Qs + zf.z;

    const double Eu = energy(u, Q.m, EnergyForm::Coulomb);
    const double Eqz = energy(Qs_plus_z, Q.m, EnergyForm::Coulomb);

    // eps^sharp = e^{-i gamma_z} u - z - Q^sharp
    const Cplx e_mgz = std::polar(1.0, -zf.gamma_z);
    ComplexField eps_s(grid, 0);
    for (std::size_t j = 0; j < grid->n(); ++j)
        eps_s.v[j] = e_mgz * u.v[j] - zf.z.v[j] - Qs.v[j];

    // (grad tE[z], eps^sharp)_r with grad tE[z] = -Delta^{(m)} z + N^{(m)}(z),
    // the Laplacian pairing via (d_-^{(m)} z, d_-^{(m)} eps)_r.
    const int fm = zf.z.m;
    ComplexField dmz = d_pm(zf.z, fm, -1);     // d_r + m/r maps m -> m-1
    ComplexField dme = d_pm(eps_s, fm, -1);
    double pairing = real_inner(dmz, dme);
    NonlinearityBreakdown nb = nonlinearity(zf.z, fm, AtVariant::Standard);
    pairing += real_inner(nb.total, eps_s);

    return Eu - Eqz - pairing;
}

// ---------------------------------------------------------- initial data

InitialData initial_data(Cplx q, Cplx nu, double tau, const GridPtr& grid,
                         const SolitonProfile& Q, const NullModeRho& rho,
                         const RadiationWorkspace& ws) {
    InitialData out;
    out.state = closed_form_state(q, nu, tau);
    const double B0 = out.state.B0();
    if (!(B0 > 10.0)) throw std::invalid_argument("initial data needs B0 > 10");

    const auto& y = grid->r;
    Cutoff c{B0};
    out.eps = ComplexField(grid, 0);
    for (std::size_t j = 0; j < grid->n(); ++j) {
        const double chi = c.chi(y[j]);
        const Cplx qv = Q.field.v[j];
        out.eps.v[j] = out.state.b * Cplx(0.0, -0.25) * y[j] * y[j] * qv * chi +
                       out.state.eta * rho.field.v[j] * chi - (1.0 - chi) * qv;
    }

    RadiationField zf = ws.build(tau);
    out.gamma_z = zf.gamma_z;

    ComplexField QpE = Q.field + out.eps;
    const Cplx ph = std::polar(1.0 / out.state.lambda, out.state.gamma);
    const Cplx egz = std::polar(1.0, out.gamma_z);
    out.u = ComplexField(grid, 0);
    for (std::size_t j = 0; j < grid->n(); ++j) {
        const Cplx core = ph * interp_field(QpE, y[j] / out.state.lambda);
        out.u.v[j] = egz * (core + zf.z.v[j]);
    }
    return out;
}

} // namespace css
