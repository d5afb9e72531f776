#include "css/gauge.hpp"

#include <cmath>

namespace css {

static ComplexField re_product(const ComplexField& a, const ComplexField& b) {
    // Re(conj(a) b) as a real-valued field; vanishing order |a.m| + |b.m|.
    ComplexField out(a.grid, std::abs(a.m) + std::abs(b.m));
    for (std::size_t j = 0; j < a.n(); ++j)
        out.v[j] = a.v[j].real() * b.v[j].real() + a.v[j].imag() * b.v[j].imag();
    return out;
}


// int_0^r g dr'/r' with the regular-branch origin rule (g ~ c r^p, p >= 1).
static std::vector<double> prefix_logweight_real(const ComplexField& g, int p) {
    const auto& r = g.grid->r;
    ComplexField h(g.grid, std::max(0, p - 1));
    for (std::size_t j = 0; j < g.n(); ++j) h.v[j] = g.v[j].real() / r[j];
    ComplexField pre = cumulative_line(h);
    std::vector<double> out(g.n());
    for (std::size_t j = 0; j < g.n(); ++j) out[j] = pre.v[j].real();
    return out;
}

std::vector<double> a_theta_bilinear(const ComplexField& u1, const ComplexField& u2) {
    ComplexField p = re_product(u1, u2);
    ComplexField prim = cumulative_primitive(p);
    std::vector<double> out(u1.n());
    for (std::size_t j = 0; j < u1.n(); ++j) out[j] = -0.5 * prim.v[j].real();
    return out;
}

std::vector<double> a_theta(const ComplexField& u) { return a_theta_bilinear(u, u); }

std::vector<double> a_t(const ComplexField& u, int m, AtVariant variant, bool* boundary_flag) {
    std::vector<double> at = a_theta(u);
    ComplexField integrand(u.grid, 2 * std::abs(u.m) + std::max(0, -2 * m));
    // (m + A_theta)|u|^2 / r' integrand handled by tail/prefix helpers below;
    // store (m + A_theta)|u|^2 and divide by r inside the integral operators.
    for (std::size_t j = 0; j < u.n(); ++j)
        integrand.v[j] = (double(m) + at[j]) * std::norm(u.v[j]);
    std::vector<double> out(u.n());
    if (variant == AtVariant::Standard) {
        ComplexField tail = tail_logweight(integrand, boundary_flag);
        for (std::size_t j = 0; j < u.n(); ++j) out[j] = -tail.v[j].real();
    } else {
        // prefix with 1/r weight; near the origin the integrand behaves
        // like c r^{2|m_u|} (u ~ r^{|m_u|}).
        out = prefix_logweight_real(integrand, std::max(1, 2 * std::abs(u.m)));
        if (boundary_flag) *boundary_flag = false;
    }
    return out;
}

// ----------------------------------------------------------- multilinears

ComplexField n30_multi(const ComplexField& u1, const ComplexField& u2, const ComplexField& u3) {
    ComplexField p = re_product(u1, u2);
    ComplexField out(u3.grid, u3.m);
    for (std::size_t j = 0; j < u3.n(); ++j) out.v[j] = -p.v[j].real() * u3.v[j];
    return out;
}

ComplexField n31_multi(const ComplexField& u1, const ComplexField& u2, const ComplexField& u3) {
    std::vector<double> at = a_theta_bilinear(u1, u2);
    const auto& r = u3.grid->r;
    ComplexField out(u3.grid, u3.m);
    for (std::size_t j = 0; j < u3.n(); ++j)
        out.v[j] = 2.0 / (r[j] * r[j]) * at[j] * u3.v[j];
    return out;
}

static std::vector<double> v22(const ComplexField& u1, const ComplexField& u2, AtVariant variant) {
    ComplexField p = re_product(u1, u2);
    std::vector<double> out(u1.n());
    if (variant == AtVariant::Standard) {
        ComplexField tail = tail_logweight(p);
        for (std::size_t j = 0; j < u1.n(); ++j) out[j] = -tail.v[j].real();
    } else {
        out = prefix_logweight_real(p, std::max(1, p.m));
    }
    return out;
}

ComplexField n32_multi(const ComplexField& u1, const ComplexField& u2, const ComplexField& u3,
                       AtVariant variant) {
    std::vector<double> pot = v22(u1, u2, variant);
    ComplexField out(u3.grid, u3.m);
    for (std::size_t j = 0; j < u3.n(); ++j) out.v[j] = pot[j] * u3.v[j];
    return out;
}

ComplexField n51_multi(const ComplexField& u1, const ComplexField& u2, const ComplexField& u3,
                       const ComplexField& u4, const ComplexField& u5) {
    std::vector<double> a12 = a_theta_bilinear(u1, u2);
    std::vector<double> a34 = a_theta_bilinear(u3, u4);
    const auto& r = u5.grid->r;
    ComplexField out(u5.grid, u5.m);
    for (std::size_t j = 0; j < u5.n(); ++j)
        out.v[j] = a12[j] * a34[j] / (r[j] * r[j]) * u5.v[j];
    return out;
}

static std::vector<double> v42(const ComplexField& u1, const ComplexField& u2,
                               const ComplexField& u3, const ComplexField& u4,
                               AtVariant variant) {
    std::vector<double> a12 = a_theta_bilinear(u1, u2);
    ComplexField p = re_product(u3, u4);
    ComplexField g(p.grid, p.m);  // A_theta[u1,u2] Re(conj(u3) u4), vanishes like r^{m_p + 2}
    for (std::size_t j = 0; j < p.n(); ++j) g.v[j] = a12[j] * p.v[j].real();
    g.m = p.m + 2;
    std::vector<double> out(p.n());
    if (variant == AtVariant::Standard) {
        ComplexField tail = tail_logweight(g);
        for (std::size_t j = 0; j < p.n(); ++j) out[j] = -tail.v[j].real();
    } else {
        out = prefix_logweight_real(g, std::max(1, g.m));
    }
    return out;
}

ComplexField n52_multi(const ComplexField& u1, const ComplexField& u2, const ComplexField& u3,
                       const ComplexField& u4, const ComplexField& u5, AtVariant variant) {
    std::vector<double> pot = v42(u1, u2, u3, u4, variant);
    ComplexField out(u5.grid, u5.m);
    for (std::size_t j = 0; j < u5.n(); ++j) out.v[j] = pot[j] * u5.v[j];
    return out;
}

ComplexField n3_multi(const ComplexField& u1, const ComplexField& u2, const ComplexField& u3,
                      int m, AtVariant variant) {
    ComplexField out = n30_multi(u1, u2, u3);
    if (m != 0) {
        ComplexField a = n31_multi(u1, u2, u3);
        ComplexField b = n32_multi(u1, u2, u3, variant);
        for (std::size_t j = 0; j < out.n(); ++j)
            out.v[j] += double(m) * (a.v[j] + b.v[j]);
    }
    return out;
}

ComplexField n5_multi(const ComplexField& u1, const ComplexField& u2, const ComplexField& u3,
                      const ComplexField& u4, const ComplexField& u5, int m, AtVariant variant) {
    (void)m;
    ComplexField out = n51_multi(u1, u2, u3, u4, u5);
    ComplexField b = n52_multi(u1, u2, u3, u4, u5, variant);
    for (std::size_t j = 0; j < out.n(); ++j) out.v[j] += b.v[j];
    return out;
}

NonlinearityBreakdown nonlinearity(const ComplexField& u, int m, AtVariant variant) {
    NonlinearityBreakdown out{
        n30_multi(u, u, u),
        n31_multi(u, u, u),
        n32_multi(u, u, u, variant),
        n51_multi(u, u, u, u, u),
        n52_multi(u, u, u, u, u, variant),
        ComplexField(u.grid, u.m)};
    for (std::size_t j = 0; j < u.n(); ++j)
        out.total.v[j] = out.n30.v[j] + double(m) * (out.n31.v[j] + out.n32.v[j]) +
                         out.n51.v[j] + out.n52.v[j];
    return out;
}

double m40_form(const ComplexField& u1, const ComplexField& u2, const ComplexField& u3,
                const ComplexField& u4) {
    ComplexField p12 = re_product(u1, u2);
    ComplexField p34 = re_product(u3, u4);
    ComplexField f(u1.grid, p12.m + p34.m);
    for (std::size_t j = 0; j < u1.n(); ++j)
        f.v[j] = -0.25 * p12.v[j].real() * p34.v[j].real();
    return integrate_smooth_real(f);
}

double m41_form(const ComplexField& u1, const ComplexField& u2, const ComplexField& u3,
                const ComplexField& u4) {
    std::vector<double> a12 = a_theta_bilinear(u1, u2);
    ComplexField p34 = re_product(u3, u4);
    const auto& r = u1.grid->r;
    ComplexField f(u1.grid, p34.m);
    for (std::size_t j = 0; j < u1.n(); ++j)
        f.v[j] = a12[j] * p34.v[j].real() / (r[j] * r[j]);
    f.m = p34.m;  // A_theta ~ r^{..+2} cancels 1/r^2
    return integrate_smooth_real(f);
}

double m6_form(const ComplexField& u1, const ComplexField& u2, const ComplexField& u3,
               const ComplexField& u4, const ComplexField& u5, const ComplexField& u6) {
    std::vector<double> a12 = a_theta_bilinear(u1, u2);
    std::vector<double> a34 = a_theta_bilinear(u3, u4);
    ComplexField p56 = re_product(u5, u6);
    const auto& r = u1.grid->r;
    ComplexField f(u1.grid, p56.m + 2);
    for (std::size_t j = 0; j < u1.n(); ++j)
        f.v[j] = 0.5 * a12[j] * a34[j] * p56.v[j].real() / (r[j] * r[j]);
    return integrate_smooth_real(f);
}

// ---------------------------------------------------------------- energies

ComplexField covariant_d(const ComplexField& u, const ComplexField& w, int m) {
    std::vector<double> at = a_theta(u);
    ComplexField dw = d_r(w);
    const auto& r = w.grid->r;
    ComplexField out(w.grid, w.m + 1);
    for (std::size_t j = 0; j < w.n(); ++j)
        out.v[j] = dw.v[j] - (double(m) + at[j]) / r[j] * w.v[j];
    return out;
}

ComplexField bogomolnyi(const ComplexField& u, int m) { return covariant_d(u, u, m); }

double energy(const ComplexField& u, int m, EnergyForm form) {
    if (form == EnergyForm::SelfDual) {
        ComplexField d = bogomolnyi(u, m);
        ComplexField f(u.grid, 2 * std::abs(d.m));
        for (std::size_t j = 0; j < u.n(); ++j) f.v[j] = 0.5 * std::norm(d.v[j]);
        return integrate_smooth_real(f);
    }
    std::vector<double> at = a_theta(u);
    ComplexField du = d_r(u);
    const auto& r = u.grid->r;
    ComplexField f(u.grid, 0);
    for (std::size_t j = 0; j < u.n(); ++j) {
        const double a2 = std::norm(u.v[j]);
        const double cov = (double(m) + at[j]) / r[j];
        f.v[j] = 0.5 * std::norm(du.v[j]) + 0.5 * cov * cov * a2 - 0.25 * a2 * a2;
    }
    f.m = (m == 0) ? 0 : 2 * std::abs(m) - 2;
    return integrate_smooth_real(f);
}

double mass(const ComplexField& u) {
    ComplexField f(u.grid, 2 * std::abs(u.m));
    for (std::size_t j = 0; j < u.n(); ++j) f.v[j] = std::norm(u.v[j]);
    return integrate_smooth_real(f);
}

ComplexField l_u(const ComplexField& u, const ComplexField& w, int m) {
    ComplexField out = covariant_d(u, w, m);
    ComplexField p = re_product(u, w);
    ComplexField prim = cumulative_primitive(p);
    const auto& r = w.grid->r;
    for (std::size_t j = 0; j < w.n(); ++j)
        out.v[j] += u.v[j] / r[j] * prim.v[j].real();
    return out;
}

ComplexField l_u_star(const ComplexField& u, const ComplexField& v, int m) {
    std::vector<double> at = a_theta(u);
    ComplexField dv = d_r(v);
    const auto& r = v.grid->r;
    // tail integral int_r^inf Re(conj(u) v) dr' (no 1/r weight)
    ComplexField g(u.grid, std::abs(u.m) + std::abs(v.m));
    for (std::size_t j = 0; j < u.n(); ++j) {
        const Cplx p = std::conj(u.v[j]) * v.v[j];
        g.v[j] = p.real();
    }
    ComplexField tail = tail_line(g);
    ComplexField out(v.grid, v.m - 1);
    for (std::size_t j = 0; j < v.n(); ++j) {
        out.v[j] = -dv.v[j] - (1.0 + double(m) + at[j]) / r[j] * v.v[j] +
                   u.v[j] * tail.v[j].real();
    }
    return out;
}

ComplexField grad_energy(const ComplexField& u, int m) {
    ComplexField lap = laplacian_m(u, m);
    NonlinearityBreakdown nb = nonlinearity(u, m, AtVariant::Standard);
    ComplexField out(u.grid, u.m);
    for (std::size_t j = 0; j < u.n(); ++j) out.v[j] = -lap.v[j] + nb.total.v[j];
    return out;
}

ComplexField grad_energy_selfdual(const ComplexField& u, int m) {
    return l_u_star(u, bogomolnyi(u, m), m);
}

std::pair<double, double> virial_rates(const ComplexField& u, int m) {
    ComplexField du = d_r(u);
    const auto& r = u.grid->r;
    ComplexField f(u.grid, 2 * std::abs(u.m));
    for (std::size_t j = 0; j < u.n(); ++j) {
        const Cplx p = std::conj(u.v[j]) * du.v[j];
        f.v[j] = p.imag() * r[j];
    }
    return {4.0 * integrate_smooth_real(f), 4.0 * energy(u, m, EnergyForm::Coulomb)};
}

double theta_z(const ComplexField& z) {
    std::vector<double> at = a_theta(z);
    const int m = z.m;
    ComplexField g(z.grid, std::max(1, 2 * std::abs(z.m)));
    for (std::size_t j = 0; j < z.n(); ++j)
        g.v[j] = (double(m) + at[j]) * std::norm(z.v[j]);
    // -int_0^inf g dr/r via the prefix rule evaluated at r_max
    std::vector<double> pre = prefix_logweight_real(g, std::max(1, 2 * std::abs(z.m)));
    return -pre.back();
}

} // namespace css
