#pragma once

#include "css/radiation.hpp"
#include "css/soliton.hpp"

namespace css {

struct ModState {
    double t = 0.0;
    double lambda = 1.0;
    double gamma = 0.0;
    double b = 0.0;
    double eta = 0.0;

    Cplx lam() const { return std::polar(lambda, gamma); }
    Cplx bb() const { return Cplx(b, eta); }
    double B0() const { return std::sqrt(std::abs(t)) / lambda; }

    static ModState from(double t, Cplx lam, Cplx bb);
};

// Closed-form leading-order parameters:
//   lam_{q,nu}(t) = -(sqrt2/4) Gamma(nu/2)/(Re nu + 1) q (4it)^{nu/2+1} / |log|t||
//   bb_{q,nu}(t)  = (1/2)(nu/2+1) |Gamma(nu/2)/(Re nu+1)|^2 |q|^2 |4it|^{Re nu+1} / |log|t||^2
Cplx closed_form_lambda(Cplx q, Cplx nu, double t);
Cplx closed_form_b(Cplx q, Cplx nu, double t);
ModState closed_form_state(Cplx q, Cplx nu, double t);

// d/dt of the closed-form lam: full derivative, and the adiabatic version
// with the slowly varying |log|t|| factor frozen.
Cplx closed_form_dlambda_dt(Cplx q, Cplx nu, double t, bool freeze_log);

// Formal modulation system (s-parametrized, integrated in t):
//   d lam/ds = -lam bb,   d bb/ds = -|bb|^2 - Lam_c,
//   Lam_c = lam^2 conj(lam)... = lambda^2 conj(lam) 8 sqrt8 pi p q (4it)^{(nu-2)/2} / (4 pi log B0).
struct ModOdeResult {
    std::vector<ModState> trajectory;
    bool ok = true;
    std::string failure;
};
ModOdeResult mod_ode_integrate(Cplx q, Cplx nu, double t_from, const ModState& state_from,
                               double t_to, int n_samples = 33);

struct DecompositionResult {
    double lambda = 1.0;
    double gamma = 0.0;
    ComplexField eps;   // renormalized remainder on the y-grid
    double ortho_resid1 = 0.0, ortho_resid2 = 0.0;
    double eps_l2 = 0.0, eps_h1 = 0.0;
    int iterations = 0;
    bool converged = false;
    bool tube_ok = true;
};

// Newton solve of ((eps, Z1)_r, (eps, Z2)_r) = 0 over (lambda, gamma) for
// w = e^{-i gamma_z} u - z, with eps = w^flat - Q.
DecompositionResult decompose(const ComplexField& u, const ComplexField& z, double gamma_z,
                              const SolitonProfile& Q, const OrthoProfiles& ortho,
                              const ModState& guess, int max_iter = 50);

struct RefinedParams {
    double b = 0.0, eta = 0.0;
    Cplx zeta;
    double B0 = 0.0;
    double B_lo = 0.0, B_hi = 0.0;   // averaging range [B_{-s_lo}, B_{-s_hi}]
    double P_surrogate = 0.0;
    double log_B0 = 0.0;
};

// Exponents (1/5, 1/10) are configurable within (0, 1/4).
RefinedParams refined_params(const DecompositionResult& dec, double t,
                             const SolitonProfile& Q, const NullModeRho& rho,
                             double s_lo = 0.2, double s_hi = 0.1);

struct InteractionResult {
    ComplexField field;      // R_{Q, z^flat} on the y-grid
    double ip_lambda_q = 0.0, ip_iq = 0.0;
    double pred_lambda_q = 0.0, pred_iq = 0.0;
    double l2 = 0.0;
};

InteractionResult interaction_RQz(const RadiationField& zf, const ModState& state,
                                  const SolitonProfile& Q, Cplx p, Cplx q, Cplx nu);

// Nonlinear energy functional  calE = E[u] - E[Q^sharp + z] - (grad tE[z], eps^sharp)_r,
// with the Laplacian pairing routed through d_-^{(m)} integration by parts.
double energy_functional(const ComplexField& u, const ModState& state,
                         const RadiationField& zf, const SolitonProfile& Q);

struct InitialData {
    ComplexField u;        // physical-space field, m = 0
    ComplexField eps;      // renormalized eps_{q,nu} on the y-grid
    ModState state;
    double gamma_z = 0.0;
};

// Prescribed data u^{(tau)}(tau) = e^{i gamma_z}[(Q + eps_{q,nu})_{lam,gam} + z].
InitialData initial_data(Cplx q, Cplx nu, double tau, const GridPtr& grid,
                         const SolitonProfile& Q, const NullModeRho& rho,
                         const RadiationWorkspace& ws);

} // namespace css
