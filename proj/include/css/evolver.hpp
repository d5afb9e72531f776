#pragma once

#include <functional>

#include "css/modulation.hpp"

namespace css {

struct EvolverConfig {
    double dt_max = 1e-4;
    double c_cfl = 0.1;
    int m = 0;
    AtVariant variant = AtVariant::Standard;
    bool nonlinear = true;
    double sponge_strength = 0.0;   // 0 disables the absorbing layer
    int monitor_stride = 100;
    double mass_drift_budget = 1e-4;    // fraction of M0 per run, abort threshold
    double energy_drift_budget = 1e-2;  // fraction of max(|E0|,1) per run
};

struct DiagnosticsRow {
    double t = 0.0;
    double mass = 0.0;
    double energy = 0.0;
    double moment_r2 = 0.0;     // int r^2 |u|^2
    double virial_rate1 = 0.0;  // 4 int Im(bar u r d_r u)
};

struct SimulationState {
    double t = 0.0;
    ComplexField u;
    double mass0 = 0.0, energy0 = 0.0;
    double absorbed_mass = 0.0;
    long steps = 0;
    bool budget_violation = false;
    bool solver_breakdown = false;
    std::vector<DiagnosticsRow> rows;
};

// One Strang step: half phase rotation with the frozen potential, full
// Crank-Nicolson linear step, half phase rotation with the re-evaluated
// potential. The CN stencil is the self-adjoint flux form on the cell
// structure matching the trapezoid weights, so the discrete L^2 norm is
// preserved exactly up to the direct-solver roundoff.
ComplexField evolver_step(const ComplexField& u, double dt, int m, AtVariant variant,
                          bool nonlinear = true, bool* breakdown = nullptr);

SimulationState make_state(ComplexField u0, double t0, int m, AtVariant variant);

// March to t_end; dt = min(dt_max, c_cfl * lambda_est^2) with lambda_est
// supplied by the callback (uniform grids also bound dt by c_cfl h^2).
// monitor(state) is invoked every monitor_stride steps and at the end;
// returning false aborts the run.
SimulationState evolve(SimulationState state, double t_end, const EvolverConfig& cfg,
                       const std::function<double(const SimulationState&)>& lambda_est = {},
                       const std::function<bool(SimulationState&)>& monitor = {});

struct ConservationReport {
    double mass_drift_per_time = 0.0;
    double energy_drift_per_time = 0.0;
    double virial_mismatch_rel = 0.0;  // FD d/dt moment vs 4 Im(bar u r d_r u)
};
ConservationReport conservation_report(const SimulationState& state);

struct BlowupRow {
    double t;
    double lambda, gamma, b, eta, B0;
    double zeta_re, zeta_im;
    double E_cal, P;
    double mass, energy;
    double eps_l2, eps_h1;
    double lambda_ratio, b_ratio, eps_band;
};

struct BlowupResult {
    std::vector<BlowupRow> rows;
    bool completed = true;
    std::string failure;
};

// Prescribed-data run on [tau, tau+window]: decompose at monitor times and
// track the bootstrap bands against the closed-form rates.
BlowupResult blowup_experiment(Cplx q, Cplx nu, double tau, double window,
                               const GridPtr& grid, EvolverConfig cfg,
                               int n_monitor = 64);

} // namespace css
