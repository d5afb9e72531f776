#pragma once

#include "css/gauge.hpp"

namespace css {

// Jackiw-Pi vortex Q(r) = sqrt(8)(m+1) r^m / (1 + r^{2m+2}).
double vortex_value(int m, double r);

struct SolitonProfile {
    int m = 0;
    double lambda = 1.0;
    double gamma = 0.0;
    ComplexField field;
};

SolitonProfile vortex(int m, const GridPtr& grid);
SolitonProfile rescale(const SolitonProfile& p, double lambda, double gamma);

// f_{lambda,gamma}(r) = e^{i gamma}/lambda f(r/lambda), general field version
// (4-point interpolation off the source samples).
ComplexField modulate(const ComplexField& f, double lambda, double gamma);

struct NullModeRho {
    ComplexField field;        // rho (real-valued samples)
    ComplexField rho_tilde;    // rho / Q
    int m = 0;
    bool diverged = false;
};

// Outward implicit-trapezoid march of the Volterra equation
//   d_r rho~ + (1/r) int_0^r Q^2 rho~ r' dr' = r / (2(m+1)),  rho = Q rho~.
NullModeRho solve_rho(int m, const GridPtr& grid);

struct LinOps {
    ComplexField Q;
    int m = 0;
    ComplexField apply_L(const ComplexField& f) const;        // L_Q f
    ComplexField apply_Lstar(const ComplexField& f) const;    // L_Q^* f
    ComplexField apply_LL(const ComplexField& f) const;       // L_Q^* L_Q f
};
LinOps lin_ops(const SolitonProfile& p);

struct OrthoProfiles {
    ComplexField z1;  // real-valued
    ComplexField z2;  // purely imaginary
    double transversality_det = 0.0;
    double ip_lambda_q_z1 = 0.0;
    double ip_iq_z2 = 0.0;
};

// Two fixed C^2 bumps supported in [1/2, 4], Gram-Schmidt against the gauge
// directions { -i y^2 Q / 4, rho }, then normalized so the transversality
// matrix is the identity. Throws if the pre-normalization determinant is
// below 1e-3.
OrthoProfiles build_ortho_profiles(const GridPtr& grid, const SolitonProfile& p,
                                   const NullModeRho& rho);

struct TruncatedRelationsRow {
    double R;
    double log_div_minus_4pilogR;   // (yQ/2, chi_R yQ/2)_r - 4 pi log R
    double diag1_over_4pilogR;      // (LambdaQ, -y^2 Q chi_R / 4)_r / (4 pi log R)
    double diag2_over_4pilogR;      // (iQ, -i rho chi_R)_r / (4 pi log R)
    double offdiag1;                // (iQ, -y^2 Q chi_R/4)_r
    double offdiag2;                // (LambdaQ, -i rho chi_R)_r
};
std::vector<TruncatedRelationsRow> truncated_relations_report(
    const SolitonProfile& p, const NullModeRho& rho, const std::vector<double>& Rs);

// ||L_Q eps||_{L2} / ||eps||_{Hcal10} after removing the (LambdaQ, iQ)
// components needed to meet the Z-orthogonality. Returns -1 for eps = 0.
double coercivity_ratio(const ComplexField& eps, const SolitonProfile& p,
                        const OrthoProfiles& ortho);

} // namespace css
