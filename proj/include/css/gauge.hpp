#pragma once

#include "css/radial_ops.hpp"

namespace css {

enum class AtVariant { Standard, PhaseRotated };

// A_theta[u1,u2](r) = -1/2 int_0^r Re(conj(u1) u2) r' dr'  (polarized form).
std::vector<double> a_theta_bilinear(const ComplexField& u1, const ComplexField& u2);
std::vector<double> a_theta(const ComplexField& u);

// Standard: A_t[u](r) = -int_r^inf (m + A_theta[u]) |u|^2 dr'/r'.
// PhaseRotated: +int_0^r of the same integrand (used by the m=-2 radiation
// equation). The two differ by the constant theta_u.
std::vector<double> a_t(const ComplexField& u, int m, AtVariant variant,
                        bool* boundary_flag = nullptr);

struct NonlinearityBreakdown {
    ComplexField n30, n31, n32, n51, n52, total;
};

// Full nonlinearity N(u) = V_u u with the decomposition
// N = N30 + m (N31 + N32) + N51 + N52.
NonlinearityBreakdown nonlinearity(const ComplexField& u, int m,
                                   AtVariant variant = AtVariant::Standard);

// Multilinear pieces with ordered arguments (not symmetrized).
ComplexField n30_multi(const ComplexField& u1, const ComplexField& u2, const ComplexField& u3);
ComplexField n31_multi(const ComplexField& u1, const ComplexField& u2, const ComplexField& u3);
ComplexField n32_multi(const ComplexField& u1, const ComplexField& u2, const ComplexField& u3,
                       AtVariant variant);
ComplexField n51_multi(const ComplexField& u1, const ComplexField& u2, const ComplexField& u3,
                       const ComplexField& u4, const ComplexField& u5);
ComplexField n52_multi(const ComplexField& u1, const ComplexField& u2, const ComplexField& u3,
                       const ComplexField& u4, const ComplexField& u5, AtVariant variant);

// Cubic/quintic sums with equivariance index m (phase-rotated variant is
// what the radiation recursion needs).
ComplexField n3_multi(const ComplexField& u1, const ComplexField& u2, const ComplexField& u3,
                      int m, AtVariant variant);
ComplexField n5_multi(const ComplexField& u1, const ComplexField& u2, const ComplexField& u3,
                      const ComplexField& u4, const ComplexField& u5, int m, AtVariant variant);

// Multilinear energy forms.
double m40_form(const ComplexField& u1, const ComplexField& u2, const ComplexField& u3,
                const ComplexField& u4);
double m41_form(const ComplexField& u1, const ComplexField& u2, const ComplexField& u3,
                const ComplexField& u4);
double m6_form(const ComplexField& u1, const ComplexField& u2, const ComplexField& u3,
               const ComplexField& u4, const ComplexField& u5, const ComplexField& u6);

enum class EnergyForm { Coulomb, SelfDual };
double energy(const ComplexField& u, int m, EnergyForm form = EnergyForm::Coulomb);
double mass(const ComplexField& u);

// Bogomol'nyi operator D_u u = d_r u - (m + A_theta[u]) u / r and the
// covariant derivative D_u w around a background u.
ComplexField bogomolnyi(const ComplexField& u, int m);
ComplexField covariant_d(const ComplexField& u, const ComplexField& w, int m);

// Linearized Bogomol'nyi operator and its adjoint:
//   L_u w  = D_u w + u B_u w,        B_u w = (1/r) int_0^r Re(conj(u) w) r' dr'
//   L_u^* v = -d_r v - (1 + m + A_theta[u]) v / r + u int_r^inf Re(conj(u) v) dr'
ComplexField l_u(const ComplexField& u, const ComplexField& w, int m);
ComplexField l_u_star(const ComplexField& u, const ComplexField& v, int m);

// grad E[u] = -Delta^{(m)} u + N(u); dual route L_u^* D_u u.
ComplexField grad_energy(const ComplexField& u, int m);
ComplexField grad_energy_selfdual(const ComplexField& u, int m);

// (d/dt int r^2|u|^2, d/dt int Im(bar u r d_r u)) = (4 int Im(bar u r d_r u), 4 E[u]).
std::pair<double, double> virial_rates(const ComplexField& u, int m);

// theta_z = -int_0^inf (m + A_theta[z]) |z|^2 dr/r (z carries its own m).
double theta_z(const ComplexField& z);

} // namespace css
