#include "css/soliton.hpp"

#include <cmath>

namespace css {

double vortex_value(int m, double r) {
    const double rm = (m == 0) ? 1.0 : std::pow(r, m);
    return std::sqrt(8.0) * double(m + 1) * rm / (1.0 + std::pow(r, 2 * m + 2));
}

SolitonProfile vortex(int m, const GridPtr& grid) {
    SolitonProfile p;
    p.m = m;
    p.field = sample_field(grid, m, [m](double r) { return Cplx(vortex_value(m, r), 0.0); });
    return p;
}

SolitonProfile rescale(const SolitonProfile& p, double lambda, double gamma) {
    SolitonProfile out;
    out.m = p.m;
    out.lambda = p.lambda * lambda;
    out.gamma = std::fmod(p.gamma + gamma, 2.0 * M_PI);
    const Cplx phase = std::polar(1.0 / out.lambda, out.gamma);
    out.field = sample_field(p.field.grid, p.m, [&](double r) {
        return phase * vortex_value(p.m, r / out.lambda);
    });
    return out;
}

ComplexField modulate(const ComplexField& f, double lambda, double gamma) {
    const Cplx phase = std::polar(1.0 / lambda, gamma);
    ComplexField out(f.grid, f.m);
    for (std::size_t j = 0; j < f.n(); ++j)
        out.v[j] = phase * interp_field(f, f.grid->r[j] / lambda);
    return out;
}

NullModeRho solve_rho(int m, const GridPtr& grid) {
    const auto& r = grid->r;
    const std::size_t n = grid->n();
    NullModeRho out;
    out.m = m;
    out.rho_tilde = ComplexField(grid, 2);
    out.field = ComplexField(grid, m);
    const double c = 1.0 / (2.0 * double(m + 1));

    std::vector<double> q2(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double Q = vortex_value(m, r[j]);
        q2[j] = Q * Q;
    }
    // near the origin rho~ = r^2 / (4(m+1)) + O(r^4)
    double rt = r[0] * r[0] * c / 2.0;
    double M = q2[0] * rt * r[0] * r[0] / 4.0;  // int_0^{r0} Q^2 rho~ r dr, rho~ ~ r^2
    out.rho_tilde.v[0] = rt;
    for (std::size_t j = 1; j < n; ++j) {
        const double h = r[j] - r[j - 1];
        const double gj = c * r[j - 1] - M / r[j - 1];
        // implicit trapezoid, memory integral carried as a running sum
        const double denom = 1.0 + 0.25 * h * h * q2[j];
        double rt_next = (rt + 0.5 * h * (gj + c * r[j] -
                          (M + 0.5 * h * q2[j - 1] * r[j - 1] * rt) / r[j])) / denom;
        M += 0.5 * h * (q2[j - 1] * r[j - 1] * rt + q2[j] * r[j] * rt_next);
        rt = rt_next;
        out.rho_tilde.v[j] = rt;
        if (std::abs(rt) > 10.0 * r[j] * r[j]) out.diverged = true;
    }
    for (std::size_t j = 0; j < n; ++j)
        out.field.v[j] = out.rho_tilde.v[j] * vortex_value(m, r[j]);
    return out;
}

ComplexField LinOps::apply_L(const ComplexField& f) const { return l_u(Q, f, m); }
ComplexField LinOps::apply_Lstar(const ComplexField& f) const { return l_u_star(Q, f, m); }
ComplexField LinOps::apply_LL(const ComplexField& f) const {
    return l_u_star(Q, l_u(Q, f, m), m);
}

LinOps lin_ops(const SolitonProfile& p) { return LinOps{p.field, p.m}; }

// C^2 bump on [0,1], vanishing to third order at both ends.
static double bump01(double x) {
    if (x <= 0.0 || x >= 1.0) return 0.0;
    const double t = x * (1.0 - x);
    return t * t * t * 64.0;
}

OrthoProfiles build_ortho_profiles(const GridPtr& grid, const SolitonProfile& p,
                                   const NullModeRho& rho) {
    const double lo = 0.5, hi = 4.0;
    auto phi_a = sample_field(grid, p.m, [&](double r) {
        return Cplx(bump01((r - lo) / (hi - lo)), 0.0);
    });
    auto phi_b = sample_field(grid, p.m, [&](double r) {
        const double x = (r - lo) / (hi - lo);
        return Cplx(bump01(x) * (x - 0.35), 0.0);
    });

    // gauge direction profiles
    const auto& rr = grid->r;
    ComplexField y2Q4(grid, p.m);
    for (std::size_t j = 0; j < grid->n(); ++j)
        y2Q4.v[j] = 0.25 * rr[j] * rr[j] * p.field.v[j];

    // Z1 real: only (rho, Z1)_r = 0 is non-automatic.
    const double ra = real_inner(rho.field, phi_a);
    const double rb = real_inner(rho.field, phi_b);
    ComplexField z1 = phi_a - (ra / rb) * phi_b;

    // Z2 = i W with (y^2 Q/4, W)_r = 0 enforced.
    const double qa = real_inner(y2Q4, phi_a);
    const double qb = real_inner(y2Q4, phi_b);
    ComplexField w = phi_a - (qa / qb) * phi_b;
    ComplexField z2 = Cplx(0.0, 1.0) * w;

    ComplexField lamQ = scaling_gen(p.field);
    ComplexField iQ = Cplx(0.0, 1.0) * p.field;
    const double t11 = real_inner(lamQ, z1);
    const double t22 = real_inner(iQ, z2);
    const double t12 = real_inner(iQ, z1);
    const double t21 = real_inner(lamQ, z2);
    const double det = t11 * t22 - t12 * t21;
    if (std::abs(det) < 1e-3)
        throw std::runtime_error("ortho profiles: transversality determinant too small");

    OrthoProfiles out;
    out.z1 = (1.0 / t11) * z1;
    out.z2 = (1.0 / t22) * z2;
    out.ip_lambda_q_z1 = real_inner(lamQ, out.z1);
    out.ip_iq_z2 = real_inner(iQ, out.z2);
    out.transversality_det = out.ip_lambda_q_z1 * out.ip_iq_z2 -
                             real_inner(iQ, out.z1) * real_inner(lamQ, out.z2);
    return out;
}

std::vector<TruncatedRelationsRow> truncated_relations_report(
    const SolitonProfile& p, const NullModeRho& rho, const std::vector<double>& Rs) {
    const GridPtr grid = p.field.grid;
    const auto& r = grid->r;
    ComplexField lamQ = scaling_gen(p.field);
    ComplexField iQ = Cplx(0.0, 1.0) * p.field;
    ComplexField yQ2(grid, p.m);
    for (std::size_t j = 0; j < grid->n(); ++j) yQ2.v[j] = 0.5 * r[j] * p.field.v[j];

    std::vector<TruncatedRelationsRow> rows;
    for (double R : Rs) {
        Cutoff c{R};
        ComplexField chi_yQ2(grid, p.m), m_y2Q4chi(grid, p.m), m_irhochi(grid, p.m);
        for (std::size_t j = 0; j < grid->n(); ++j) {
            const double chi = c.chi(r[j]);
            chi_yQ2.v[j] = chi * yQ2.v[j];
            m_y2Q4chi.v[j] = -0.25 * r[j] * r[j] * p.field.v[j] * chi;
            m_irhochi.v[j] = -Cplx(0.0, 1.0) * rho.field.v[j] * chi;
        }
        TruncatedRelationsRow row;
        row.R = R;
        const double logdiv = real_inner(yQ2, chi_yQ2);
        row.log_div_minus_4pilogR = logdiv - 4.0 * M_PI * std::log(R);
        row.diag1_over_4pilogR = real_inner(lamQ, m_y2Q4chi) / (4.0 * M_PI * std::log(R));
        row.diag2_over_4pilogR = real_inner(iQ, m_irhochi) / (4.0 * M_PI * std::log(R));
        row.offdiag1 = real_inner(iQ, m_y2Q4chi);
        row.offdiag2 = real_inner(lamQ, m_irhochi);
        rows.push_back(row);
    }
    return rows;
}

double coercivity_ratio(const ComplexField& eps, const SolitonProfile& p,
                        const OrthoProfiles& ortho) {
    if (norm_l2(eps) == 0.0) return -1.0;
    ComplexField lamQ = scaling_gen(p.field);
    ComplexField iQ = Cplx(0.0, 1.0) * p.field;
    // solve for (a, b): (eps - a LamQ - b iQ, Z_k)_r = 0
    const double m11 = real_inner(lamQ, ortho.z1), m12 = real_inner(iQ, ortho.z1);
    const double m21 = real_inner(lamQ, ortho.z2), m22 = real_inner(iQ, ortho.z2);
    const double f1 = real_inner(eps, ortho.z1), f2 = real_inner(eps, ortho.z2);
    const double det = m11 * m22 - m12 * m21;
    const double a = (f1 * m22 - f2 * m12) / det;
    const double b = (m11 * f2 - m21 * f1) / det;
    ComplexField proj(eps.grid, eps.m);
    for (std::size_t j = 0; j < eps.n(); ++j)
        proj.v[j] = eps.v[j] - a * lamQ.v[j] - b * iQ.v[j];
    const double num = norm_l2(l_u(p.field, proj, p.m));
    const double den = norms(proj).hcal10;
    if (den == 0.0) return -1.0;
    return num / den;
}

} // namespace css
