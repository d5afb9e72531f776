#include "css/summaries.hpp"

#include <cmath>

#include "css/evolver.hpp"
#include "css/io.hpp"

namespace css {

static GridPtr grid_from_cfg(const RunConfig& cfg) {
    if (cfg.grid_kind == "uniform") return make_uniform_grid(cfg.grid_n, cfg.grid_r_max);
    return make_log_grid(cfg.grid_n, cfg.grid_r_max);
}

static double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

// simple least-squares slope of y against x
static double fit_slope(const std::vector<double>& x, const std::vector<double>& y,
                        double* max_dev = nullptr) {
    const std::size_t n = x.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    if (max_dev) {
        const double icpt = (sy - slope * sx) / n;
        double md = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            md = std::max(md, std::abs(y[i] - slope * x[i] - icpt));
        *max_dev = md;
    }
    return slope;
}

Json run_soliton_check(const RunConfig& cfg, const std::string& out_dir) {
    GridPtr grid = grid_from_cfg(cfg);
    Json out;
    out["schema"] = 1;
    out["subcommand"] = "soliton-check";
    bool pass = true;

    SolitonProfile Q = vortex(0, grid);
    const double EQ = energy(Q.field, 0, EnergyForm::Coulomb);
    const double EQ_sd = energy(Q.field, 0, EnergyForm::SelfDual);
    out["E_Q"] = EQ_sd;  // Bogomol'nyi form; the Coulomb form carries the
                         // O(r_max^-4) domain-truncation defect
    out["E_Q_coulomb"] = EQ;

    // the r^-2 tail of Q costs 1e-4 of charge at r_max = 100; the charge
    // checks run on a wider domain
    GridPtr grid_wide = make_log_grid(cfg.grid_n, 2e4);
    out["charge_grid_r_max"] = 2e4;
    const double MQ = mass(vortex(0, grid_wide).field);
    out["M_Q_over_8pi"] = MQ / (8.0 * M_PI);
    pass = pass && std::abs(EQ_sd) <= 1e-8 * MQ;
    pass = pass && rel(MQ, 8.0 * M_PI) <= 1e-6;

    ComplexField dqq = bogomolnyi(Q.field, 0);
    double dqq_max = 0.0, q_max = 0.0;
    for (std::size_t j = 0; j < grid->n(); ++j) {
        dqq_max = std::max(dqq_max, std::abs(dqq.v[j]));
        q_max = std::max(q_max, std::abs(Q.field.v[j]));
    }
    out["DQQ_max_over_Qmax"] = dqq_max / q_max;
    pass = pass && dqq_max <= 1e-8 * q_max;

    Json charges = Json::array();
    for (int m : {0, 1, 2}) {
        SolitonProfile Qm = vortex(m, grid_wide);
        const double c = mass(Qm.field) / (2.0 * M_PI);  // int Q^2 r dr
        charges.push_back({{"m", m}, {"charge", c}, {"expected", 4.0 * (m + 1)}});
        pass = pass && rel(c, 4.0 * (m + 1)) <= 1e-6;
    }
    out["charges"] = charges;

    // generalized kernel relations; identities with int_r^inf tails need the
    // wider domain as well (the truncated tail enters as 2/r_max^2)
    GridPtr kgrid = make_log_grid(cfg.grid_n, 2000.0);
    out["kernel_grid_r_max"] = 2000.0;
    SolitonProfile Qk = vortex(0, kgrid);
    NullModeRho rho = solve_rho(0, kgrid);
    LinOps L = lin_ops(Qk);
    const auto& y = kgrid->r;
    const double qn = norm_l2(Qk.field);

    ComplexField lamQ = scaling_gen(Qk.field);
    ComplexField iQ = Cplx(0.0, 1.0) * Qk.field;
    ComplexField iy2Q4(kgrid, 0), iyQ2(kgrid, 0), yQc(kgrid, 0);
    for (std::size_t j = 0; j < kgrid->n(); ++j) {
        iy2Q4.v[j] = Cplx(0.0, 0.25) * y[j] * y[j] * Qk.field.v[j];
        iyQ2.v[j] = Cplx(0.0, 0.5) * y[j] * Qk.field.v[j];
        yQc.v[j] = 0.5 * y[j] * Qk.field.v[j];
    }
    // residuals are measured on the bulk r <= r_max/4 to keep the truncated
    // tail of the slowly decaying profiles out of the contract
    auto bulk_l2 = [&](const ComplexField& f) {
        ComplexField g(kgrid, 0);
        for (std::size_t j = 0; j < kgrid->n(); ++j)
            g.v[j] = (y[j] <= 0.25 * kgrid->r_max) ? std::norm(f.v[j]) : 0.0;
        return std::sqrt(std::max(0.0, integrate_real(g)));
    };
    const double r_LlamQ = bulk_l2(L.apply_L(lamQ)) / qn;
    const double r_LiQ = bulk_l2(L.apply_L(iQ)) / qn;
    ComplexField res1 = L.apply_L(iy2Q4) - iyQ2;
    const double r_iy2 = bulk_l2(res1) / bulk_l2(iyQ2);
    ComplexField res2 = L.apply_Lstar(iyQ2) + Cplx(0.0, 1.0) * lamQ;
    const double r_lstar1 = bulk_l2(res2) / bulk_l2(lamQ);
    ComplexField res3 = L.apply_Lstar(yQc) - Qk.field;
    const double r_lstar2 = bulk_l2(res3) / qn;
    ComplexField res4 = L.apply_L(rho.field) - yQc;
    const double r_lrho = bulk_l2(res4) / bulk_l2(yQc);
    ComplexField res5 = L.apply_LL(rho.field) - Qk.field;
    const double r_llrho = bulk_l2(res5) / qn;
    out["kernel_residuals"] = {
        {"L_lamQ", r_LlamQ},       {"L_iQ", r_LiQ},     {"L_iy2Q4_minus_iyQ2", r_iy2},
        {"Lstar_iyQ2_plus_ilamQ", r_lstar1}, {"Lstar_yQ2_minus_Q", r_lstar2},
        {"L_rho_minus_yQ2", r_lrho}, {"LL_rho_minus_Q", r_llrho}};
    out["LQ_rho_resid"] = r_lrho;
    out["LL_rho_resid"] = r_llrho;
    pass = pass && r_LlamQ <= 1e-6 && r_LiQ <= 1e-6 && r_iy2 <= 1e-5 && r_lstar1 <= 1e-5 &&
           r_lstar2 <= 1e-5 && r_lrho <= 1e-6 && r_llrho <= 1e-5;

    // rho envelope |rho - r^2 Q/(4(m+1))| <= C Q (log r)^2 for r >= 2
    double cfit = 0.0;
    for (std::size_t j = 0; j < kgrid->n(); ++j) {
        if (y[j] < 2.0 || y[j] > 0.25 * kgrid->r_max) continue;
        const double Qv = vortex_value(0, y[j]);
        const double dev = std::abs(rho.field.v[j].real() - 0.25 * y[j] * y[j] * Qv);
        const double env = Qv * std::log(y[j]) * std::log(y[j]);
        cfit = std::max(cfit, dev / env);
    }
    out["rho_envelope_constant"] = cfit;
    pass = pass && cfit <= 10.0;

    // ortho profiles on the reference grid
    NullModeRho rho_ref = solve_rho(0, grid);
    OrthoProfiles ortho = build_ortho_profiles(grid, Q, rho_ref);
    ComplexField miy2Q4(grid, 0);
    for (std::size_t j = 0; j < grid->n(); ++j)
        miy2Q4.v[j] = Cplx(0.0, -0.25) * grid->r[j] * grid->r[j] * Q.field.v[j];
    out["ortho"] = {
        {"det", ortho.transversality_det},
        {"gauge_z1_rho", real_inner(rho_ref.field, ortho.z1)},
        {"gauge_z2_rho", real_inner(rho_ref.field, ortho.z2)},
        {"gauge_z1_y2Q", real_inner(miy2Q4, ortho.z1)},
        {"gauge_z2_y2Q", real_inner(miy2Q4, ortho.z2)}};
    pass = pass && std::abs(ortho.transversality_det) >= 1.0 - 1e-9;
    pass = pass && std::abs(real_inner(rho_ref.field, ortho.z1)) <= 1e-10 &&
           std::abs(real_inner(rho_ref.field, ortho.z2)) <= 1e-10 &&
           std::abs(real_inner(miy2Q4, ortho.z1)) <= 1e-10 &&
           std::abs(real_inner(miy2Q4, ortho.z2)) <= 1e-10;

    // truncated relations sweep; the R = 1e4 cutoff needs r_max >= 2R
    GridPtr tgrid = make_log_grid(cfg.grid_n, 4e4);
    out["truncation_grid_r_max"] = 4e4;
    SolitonProfile Qt = vortex(0, tgrid);
    NullModeRho rho_t = solve_rho(0, tgrid);
    Json sweep = Json::array();
    for (const auto& row : truncated_relations_report(Qt, rho_t, {10.0, 100.0, 1000.0, 10000.0})) {
        sweep.push_back({{"R", row.R},
                         {"logdiv_minus_4pilogR", row.log_div_minus_4pilogR},
                         {"diag1_over_4pilogR", row.diag1_over_4pilogR},
                         {"diag2_over_4pilogR", row.diag2_over_4pilogR},
                         {"offdiag1", row.offdiag1},
                         {"offdiag2", row.offdiag2}});
        pass = pass && std::abs(row.log_div_minus_4pilogR) <= 20.0;
        if (row.R == 10.0) {
            pass = pass && std::abs(row.diag1_over_4pilogR - 1.0) <= 0.35 &&
                   std::abs(row.diag2_over_4pilogR + 1.0) <= 0.35;
        }
    }
    out["truncated_relations"] = sweep;

    out["pass"] = pass;
    if (!out_dir.empty()) {
        write_field_csv(out_dir + "/Q.csv", Q.field);
        write_field_csv(out_dir + "/rho.csv", rho_ref.field);
    }
    return out;
}

Json run_specfun_check(const RunConfig& cfg, const std::string& out_dir) {
    (void)cfg;
    Json out;
    out["schema"] = 1;
    out["subcommand"] = "specfun-check";
    bool pass = true;

    out["gamma"] = {
        {"gamma_1", std::abs(gamma_complex(Cplx(1.0)) - 1.0)},
        {"gamma_half_minus_sqrtpi", std::abs(gamma_complex(Cplx(0.5)) - std::sqrt(M_PI))},
        {"gamma_3_minus_2", std::abs(gamma_complex(Cplx(3.0)) - 2.0)}};
    pass = pass && std::abs(gamma_complex(Cplx(1.0)) - 1.0) < 1e-13 &&
           std::abs(gamma_complex(Cplx(0.5)) - std::sqrt(M_PI)) < 1e-13 &&
           std::abs(gamma_complex(Cplx(3.0)) - 2.0) < 1e-12;

    const std::vector<Cplx> nus = {Cplx(1.0), Cplx(2.0), Cplx(3.0), Cplx(1.0, 0.5),
                                   Cplx(2.0, -1.0)};
    Json rows = Json::array();
    for (Cplx nu : nus) {
        ConnectionResult cr = connection(nu, -2);
        const Cplx p_closed = 0.5 * gamma_complex(nu / 2.0 + 2.0);
        const Cplx target = cpow_principal(Cplx(0.0, 4.0), (nu - 2.0) / 2.0) * p_closed;
        const double p_rel = std::abs(cr.p - p_closed) / std::abs(p_closed);
        const double scale_rel = std::abs(cr.fitted_scale - target) / std::abs(target);
        rows.push_back({{"nu_re", nu.real()},
                        {"nu_im", nu.imag()},
                        {"p_re", cr.p.real()},
                        {"p_im", cr.p.imag()},
                        {"alpha_re", cr.alpha.real()},
                        {"alpha_im", cr.alpha.imag()},
                        {"window_residual", cr.window_residual},
                        {"p_two_routes_rel", p_rel},
                        {"fitted_scale_rel", scale_rel}});
        pass = pass && cr.window_residual <= 1e-6 && p_rel <= 1e-12 && scale_rel <= 1e-6;
    }
    out["connection"] = rows;

    // branch product consistency
    {
        double worst = 0.0;
        for (double t : {-0.5, -0.01, 0.01, 0.5}) {
            const Cplx z(0.0, 4.0 * t);
            const Cplx w1(0.7, 0.3), w2(-0.2, 1.1);
            const Cplx lhs = cpow_principal(z, w1) * cpow_principal(z, w2);
            const Cplx rhs = cpow_principal(z, w1 + w2);
            worst = std::max(worst, std::abs(lhs - rhs) / std::abs(rhs));
        }
        out["branch_product_rel"] = worst;
        pass = pass && worst <= 1e-12;
    }

    // Gamma recurrence over the test box
    {
        double worst = 0.0;
        for (double re = -19.5; re <= 19.5; re += 2.5)
            for (double im = -19.5; im <= 19.5; im += 2.5) {
                const Cplx z(re, im);
                if (std::abs(im) < 1e-9 && re <= 0.5) continue;
                const Cplx lhs = gamma_complex(z + 1.0);
                const Cplx rhs = z * gamma_complex(z);
                worst = std::max(worst, std::abs(lhs - rhs) / std::abs(rhs));
            }
        out["gamma_recurrence_rel"] = worst;
        pass = pass && worst <= 1e-11;
    }

    out["pass"] = pass;
    if (!out_dir.empty()) write_text_atomic(out_dir + "/specfun_check.done", "ok\n");
    return out;
}

Json run_radiation_build(const RunConfig& cfg, const std::string& out_dir,
                         const std::vector<double>& t_ladder) {
    GridPtr grid = grid_from_cfg(cfg);
    Json out;
    out["schema"] = 1;
    out["subcommand"] = "radiation-build";
    bool pass = true;

    RadiationSpec spec = RadiationSpec::make(cfg.q(), cfg.nu());
    RadiationWorkspace ws(spec, grid);
    ComplexField zs = asymptotic_profile(spec, grid);
    const double zs_h11 = norms(zs).h11;

    Json rows = Json::array();
    std::vector<double> lx, ly;
    double prev_h11 = 1e300;
    bool h11_decreasing = true;
    for (double t : t_ladder) {
        RadiationField zf = ws.build(t);
        ResidualReport rep = ws.residual(t);
        const double dlim = norms(zf.z - zs).h11;
        rows.push_back({{"t", t},
                        {"psi_l2", rep.psi_l2},
                        {"psi_weighted_s0", rep.psi_weighted_s0},
                        {"psi_weighted_sdz", rep.psi_weighted_sdz},
                        {"dt_crosscheck_rel", rep.dt_crosscheck_rel},
                        {"gamma_z", zf.gamma_z},
                        {"data_limit_h11", dlim},
                        {"data_limit_h11_rel", dlim / zs_h11}});
        if (dlim > prev_h11) h11_decreasing = false;
        prev_h11 = dlim;
        lx.push_back(std::log(std::abs(t)));
        ly.push_back(std::log(rep.psi_l2));
        pass = pass && rep.crosscheck_ok;
        if (!out_dir.empty()) {
            char name[64];
            std::snprintf(name, sizeof(name), "/z_t%.6e.csv", t);
            write_field_csv(out_dir + name, zf.z);
            std::snprintf(name, sizeof(name), "/z1_t%.6e.csv", t);
            write_field_csv(out_dir + name, zf.z1);
        }
    }
    out["ladder"] = rows;
    double maxdev = 0.0;
    const double slope = fit_slope(lx, ly, &maxdev);
    out["psi_slope"] = slope;
    out["psi_slope_max_dev"] = maxdev;
    const double target = 0.5 * (cfg.nu_re - 1.0);
    out["psi_slope_target"] = target;
    out["delta_z_measured"] = slope - target;
    out["data_limit_decreasing"] = h11_decreasing;
    pass = pass && slope >= target + 0.01 && h11_decreasing;
    out["pass"] = pass;
    return out;
}

Json run_mod_ode(const RunConfig& cfg, const std::string& out_dir) {
    Json out;
    out["schema"] = 1;
    out["subcommand"] = "mod-ode";
    bool pass = true;

    const Cplx q = cfg.q(), nu = cfg.nu();
    const double t0 = cfg.tau;
    const double t1 = cfg.tau + cfg.window;
    ModState s0 = closed_form_state(q, nu, t0);
    ModOdeResult res = mod_ode_integrate(q, nu, t0, s0, t1, 48);
    out["ode_ok"] = res.ok;
    pass = pass && res.ok;

    std::string csv = "t,lambda,gamma,b,eta,B0,lambda_ratio,arg_dev\n";
    double worst_ratio = 0.0, worst_arg = 0.0;
    for (const ModState& s : res.trajectory) {
        const Cplx cl = closed_form_lambda(q, nu, s.t);
        const double ratio = std::abs(s.lam() / cl);
        const double argd = std::abs(std::arg(s.lam() / cl));
        worst_ratio = std::max(worst_ratio, std::abs(ratio - 1.0));
        worst_arg = std::max(worst_arg, argd);
        csv += fmt_g17(s.t) + "," + fmt_g17(s.lambda) + "," + fmt_g17(s.gamma) + "," +
               fmt_g17(s.b) + "," + fmt_g17(s.eta) + "," + fmt_g17(s.B0()) + "," +
               fmt_g17(ratio) + "," + fmt_g17(argd) + "\n";
    }
    out["lambda_ratio_max_dev"] = worst_ratio;
    out["arg_max_dev"] = worst_arg;
    pass = pass && worst_ratio <= 0.05 && worst_arg <= 0.05;

    // diagnostic: the same system anchored at the small-time end and
    // integrated backward (the stable direction used by the construction)
    {
        ModState s1 = closed_form_state(q, nu, t1);
        ModOdeResult back = mod_ode_integrate(q, nu, t1, s1, t0, 48);
        double wr = 0.0, wa = 0.0;
        for (const ModState& s : back.trajectory) {
            const Cplx cl = closed_form_lambda(q, nu, s.t);
            wr = std::max(wr, std::abs(std::abs(s.lam() / cl) - 1.0));
            wa = std::max(wa, std::abs(std::arg(s.lam() / cl)));
        }
        out["backward_anchor"] = {{"ok", back.ok},
                                  {"lambda_ratio_max_dev", wr},
                                  {"arg_max_dev", wa}};
    }

    // closed-form self-consistency bb ~ -conj(lam) d_t lam
    Json cons = Json::array();
    for (double t : {-0.01, -1e-3}) {
        const Cplx lam = closed_form_lambda(q, nu, t);
        const Cplx bb = closed_form_b(q, nu, t);
        const Cplx d_frozen = closed_form_dlambda_dt(q, nu, t, true);
        const Cplx d_full = closed_form_dlambda_dt(q, nu, t, false);
        const double rat_frozen = std::abs(bb + std::conj(lam) * d_frozen) / std::abs(bb);
        const double rat_full = std::abs(bb + std::conj(lam) * d_full) / std::abs(bb);
        cons.push_back({{"t", t},
                        {"ratio_frozen_log", rat_frozen},
                        {"ratio_full_derivative", rat_full}});
        pass = pass && rat_frozen <= (t == -0.01 ? 0.05 : 0.02);
    }
    out["rate_consistency"] = cons;

    if (!out_dir.empty()) write_text_atomic(out_dir + "/mod_ode_trajectory.csv", csv);
    out["pass"] = pass;
    return out;
}

Json run_decompose(const RunConfig& cfg, const std::string& out_dir) {
    GridPtr grid = grid_from_cfg(cfg);
    Json out;
    out["schema"] = 1;
    out["subcommand"] = "decompose";
    bool pass = true;

    SolitonProfile Q = vortex(0, grid);
    NullModeRho rho = solve_rho(0, grid);
    OrthoProfiles ortho = build_ortho_profiles(grid, Q, rho);
    RadiationSpec spec = RadiationSpec::make(cfg.q(), cfg.nu());
    RadiationWorkspace ws(spec, grid);
    RadiationField zf = ws.build(cfg.tau);

    Json rows = Json::array();
    for (double lam0 : {0.5, 2.0}) {
        for (double gam0 : {0.0, 1.3}) {
            ComplexField u(grid, 0);
            const Cplx ph = std::polar(1.0 / lam0, gam0);
            const Cplx egz = std::polar(1.0, zf.gamma_z);
            for (std::size_t j = 0; j < grid->n(); ++j)
                u.v[j] = egz * (ph * vortex_value(0, grid->r[j] / lam0) + zf.z.v[j]);
            ModState guess;
            guess.t = cfg.tau;
            guess.lambda = lam0 * 1.07;
            guess.gamma = gam0 + 0.05;
            DecompositionResult dec = decompose(u, zf.z, zf.gamma_z, Q, ortho, guess);
            const double lam_err = rel(dec.lambda, lam0);
            const double gam_err = std::abs(std::remainder(dec.gamma - gam0, 2.0 * M_PI));
            rows.push_back({{"lambda0", lam0},
                            {"gamma0", gam0},
                            {"lambda_err", lam_err},
                            {"gamma_err", gam_err},
                            {"eps_l2", dec.eps_l2},
                            {"iterations", dec.iterations},
                            {"converged", dec.converged}});
            pass = pass && dec.converged && lam_err <= 1e-8 && gam_err <= 1e-8 &&
                   dec.eps_l2 <= 1e-6 * norm_l2(Q.field);
        }
    }
    out["exact_recovery"] = rows;
    out["pass"] = pass;
    if (!out_dir.empty()) write_text_atomic(out_dir + "/decompose.done", "ok\n");
    return out;
}

Json run_evolve(const RunConfig& cfg, const std::string& out_dir) {
    GridPtr grid = grid_from_cfg(cfg);
    Json out;
    out["schema"] = 1;
    out["subcommand"] = "evolve";
    bool pass = true;

    // generic run: modest smooth data evolved one unit of time at dt_max
    ComplexField u0 = sample_field(grid, 0, [](double r) {
        return Cplx(0.8 * std::exp(-r * r), 0.0);
    });
    EvolverConfig ecfg;
    ecfg.dt_max = cfg.dt_max;
    ecfg.c_cfl = cfg.c_cfl;
    ecfg.monitor_stride = 50;
    SimulationState st = make_state(u0, 0.0, 0, AtVariant::Standard);
    st = evolve(std::move(st), 1.0, ecfg);
    ConservationReport rep = conservation_report(st);
    out["steps"] = st.steps;
    out["mass_drift_per_time"] = rep.mass_drift_per_time;
    out["energy_drift_per_time"] = rep.energy_drift_per_time;
    out["virial_mismatch_rel"] = rep.virial_mismatch_rel;
    out["budget_violation"] = st.budget_violation;
    pass = pass && !st.budget_violation && rep.mass_drift_per_time <= 1e-8 &&
           rep.energy_drift_per_time <= 1e-6 && rep.virial_mismatch_rel <= 5e-3;

    if (!out_dir.empty()) {
        std::string csv = "t,mass,energy,moment_r2,virial_rate1\n";
        for (const auto& row : st.rows)
            csv += fmt_g17(row.t) + "," + fmt_g17(row.mass) + "," + fmt_g17(row.energy) + "," +
                   fmt_g17(row.moment_r2) + "," + fmt_g17(row.virial_rate1) + "\n";
        write_text_atomic(out_dir + "/evolve_trajectory.csv", csv);
        Json manifest = {{"schema", 1},
                         {"grid_n", cfg.grid_n},
                         {"grid_r_max", cfg.grid_r_max},
                         {"grid_kind", cfg.grid_kind},
                         {"dt_max", ecfg.dt_max},
                         {"c_cfl", ecfg.c_cfl},
                         {"sponge_strength", ecfg.sponge_strength},
                         {"mass_budget", ecfg.mass_drift_budget},
                         {"energy_budget", ecfg.energy_drift_budget}};
        write_text_atomic(out_dir + "/run_manifest.json", manifest.dump(2) + "\n");
    }
    out["pass"] = pass;
    return out;
}

Json run_blowup_verify(const RunConfig& cfg, const std::string& out_dir, int n_monitor) {
    GridPtr grid = grid_from_cfg(cfg);
    Json out;
    out["schema"] = 1;
    out["subcommand"] = "blowup-verify";

    EvolverConfig ecfg;
    ecfg.dt_max = cfg.dt_max;
    ecfg.c_cfl = cfg.c_cfl;
    BlowupResult res = blowup_experiment(cfg.q(), cfg.nu(), cfg.tau, cfg.window, grid, ecfg,
                                         n_monitor);
    out["completed"] = res.completed;
    if (!res.failure.empty()) out["failure"] = res.failure;

    double worst_ratio_lo = 1e300, worst_ratio_hi = 0.0, worst_band = 0.0;
    std::string csv =
        "t,lambda,gamma,b,eta,B0,zeta_re,zeta_im,E_cal,P,mass,energy,eps_l2,eps_h1\n";
    for (const auto& row : res.rows) {
        worst_ratio_lo = std::min(worst_ratio_lo, row.lambda_ratio);
        worst_ratio_hi = std::max(worst_ratio_hi, row.lambda_ratio);
        worst_band = std::max(worst_band, row.eps_band);
        csv += fmt_g17(row.t) + "," + fmt_g17(row.lambda) + "," + fmt_g17(row.gamma) + "," +
               fmt_g17(row.b) + "," + fmt_g17(row.eta) + "," + fmt_g17(row.B0) + "," +
               fmt_g17(row.zeta_re) + "," + fmt_g17(row.zeta_im) + "," + fmt_g17(row.E_cal) +
               "," + fmt_g17(row.P) + "," + fmt_g17(row.mass) + "," + fmt_g17(row.energy) +
               "," + fmt_g17(row.eps_l2) + "," + fmt_g17(row.eps_h1) + "\n";
    }
    out["rows"] = res.rows.size();
    out["lambda_ratio_min"] = worst_ratio_lo;
    out["lambda_ratio_max"] = worst_ratio_hi;
    out["eps_band_max"] = worst_band;
    const bool pass = res.completed && worst_ratio_lo >= 0.5 && worst_ratio_hi <= 1.5 &&
                      worst_band <= 1.0;
    out["pass"] = pass;
    if (!out_dir.empty()) write_text_atomic(out_dir + "/blowup_trajectory.csv", csv);
    return out;
}

Json run_transform(const RunConfig& cfg, const std::string& out_dir) {
    GridPtr grid = grid_from_cfg(cfg);
    Json out;
    out["schema"] = 1;
    out["subcommand"] = "transform";
    bool pass = true;

    RadiationSpec spec = RadiationSpec::make(cfg.q(), cfg.nu());
    ComplexField zs = asymptotic_profile(spec, grid);
    // The return transform integrates an O(1)-frequency oscillation in rho,
    // so u* lives on a uniform auxiliary grid wide enough for the tail.
    GridPtr mid = make_uniform_grid(16384, 200.0);
    out["hankel_mid_grid"] = {{"n", 16384}, {"r_max", 200.0}, {"kind", "uniform"}};
    ComplexField us = u_star(spec, mid);
    ComplexField twice(grid, zs.m);
    for (std::size_t i = 0; i < grid->n(); ++i) {
        if (grid->r[i] > 4.0) continue;  // z* supported in [0, 2]
        Cplx acc(0.0);
        for (std::size_t j = 0; j < mid->n(); ++j)
            acc += mid->w[j] * bessel_j2(0.5 * grid->r[i] * mid->r[j]) * us.v[j] * mid->r[j];
        twice.v[i] = Cplx(0.0, -0.5) * acc;
    }
    ComplexField diff(grid, zs.m);
    for (std::size_t j = 0; j < grid->n(); ++j) diff.v[j] = twice.v[j] + zs.v[j];
    const double invol = norm_l2(diff) / norm_l2(zs);
    out["hankel_involution_rel"] = invol;
    pass = pass && invol <= 1e-4;

    // u* decay: |u*(rho)| rho^{3/2} bounded on [10, 100]
    double decay = 0.0;
    for (std::size_t j = 0; j < mid->n(); ++j) {
        const double r = mid->r[j];
        if (r < 10.0 || r > 100.0) continue;
        decay = std::max(decay, std::abs(us.v[j]) * std::pow(r, 1.5));
    }
    out["u_star_decay_bound"] = decay;

    // pseudoconformal: mass isometry and |C Q|(t=-1) = Q
    SolitonProfile Q = vortex(0, grid);
    auto [cq, tp] = pseudoconformal(Q.field, -1.0);
    out["pseudoconformal_tprime"] = tp;
    const double miso = rel(mass(cq), mass(Q.field));
    out["pseudoconformal_mass_rel"] = miso;
    pass = pass && miso <= 1e-6;
    double mod_dev = 0.0;
    for (std::size_t j = 0; j < grid->n(); ++j) {
        const double r = grid->r[j];
        if (r > 0.25 * grid->r_max) continue;
        mod_dev = std::max(mod_dev, std::abs(std::abs(cq.v[j]) - vortex_value(0, r)));
    }
    out["pseudoconformal_modulus_dev"] = mod_dev;
    pass = pass && mod_dev <= 1e-6 * vortex_value(0, 0.0);

    out["pass"] = pass;
    if (!out_dir.empty()) {
        write_field_csv(out_dir + "/u_star.csv", us);
        write_field_csv(out_dir + "/pseudoconformal_Q.csv", cq);
    }
    return out;
}

} // namespace css
