#pragma once

#include "css/cutoff.hpp"
#include "css/field.hpp"

namespace css {

// Planar integral: 2*pi * int f r dr over the truncated domain, with the
// small-r segment [0, r_0] closed under the regular-branch rule
// f ~ f(r_0) (r/r_0)^{|m|}.
Cplx integrate(const ComplexField& f);
double integrate_real(const ComplexField& f);

// Same integral through the endpoint-corrected prefix accumulation
// (O(h^4) on smoothly varying grids); used where acceptance tolerances are
// tighter than the plain trapezoid contract.
Cplx integrate_smooth(const ComplexField& f);
double integrate_smooth_real(const ComplexField& f);

// Prefix integral r -> int_0^r f(r') r' dr' (same origin rule).
ComplexField cumulative_primitive(const ComplexField& f);

// Suffix integral with logarithmic weight r -> int_r^{r_max} f(r') dr'/r'.
// Sets *boundary_flag when |f(r_max)| r_max exceeds tol (non-negligible
// truncated tail).
ComplexField tail_logweight(const ComplexField& f, bool* boundary_flag = nullptr,
                            double tol = 1e-8);

// Plain line integrals (no r weight): int_0^r f dr' and int_r^{r_max} f dr'.
ComplexField cumulative_line(const ComplexField& f);
ComplexField tail_line(const ComplexField& f);

// Finite-difference derivatives (3-point stencils, one-sided at the ends).
ComplexField d_r(const ComplexField& f);
ComplexField d_r2(const ComplexField& f);
ComplexField d_pm(const ComplexField& f, int m, int sign);  // d_r -/+ m/r (sign=+1 -> -m/r)
ComplexField laplacian_m(const ComplexField& f, int m);
ComplexField scaling_gen(const ComplexField& f);                        // Lambda = r d_r + 1
ComplexField scaling_gen_trunc(const ComplexField& f, double A);        // Lambda_A

struct NormRecord {
    double l2 = 0;        // ||f||_{L^2}
    double h1dot = 0;     // (int |f'|^2 + m^2 |f|^2/r^2)^{1/2}
    double h1 = 0;        // (l2^2 + h1dot^2)^{1/2}
    double h11 = 0;       // h1 + ||r f||_{L^2}
    double hcal10 = 0;    // ||d_r f|| + ||<log_- r>^{-1} r^{-1} f||
    double r_weighted = 0; // ||r f||
    double inv_r = 0;      // ||f / r||
};
NormRecord norms(const ComplexField& f);

double real_inner(const ComplexField& f, const ComplexField& g);
double norm_l2(const ComplexField& f);

// |f|_{-1} = max(|d_r f|, |f|/r), pointwise samples.
std::vector<double> abs_minus1(const ComplexField& f);

} // namespace css
