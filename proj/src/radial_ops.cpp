#include "css/radial_ops.hpp"

#include <algorithm>
#include <cmath>

namespace css {

// ---------------------------------------------------------------- field ops

static void check_same_grid(const ComplexField& a, const ComplexField& b) {
    if (a.grid.get() != b.grid.get() || a.n() != b.n())
        throw std::invalid_argument("fields on different grids");
}

ComplexField operator+(const ComplexField& a, const ComplexField& b) {
    check_same_grid(a, b);
    ComplexField out(a.grid, a.m);
    for (std::size_t j = 0; j < a.n(); ++j) out.v[j] = a.v[j] + b.v[j];
    return out;
}

ComplexField operator-(const ComplexField& a, const ComplexField& b) {
    check_same_grid(a, b);
    ComplexField out(a.grid, a.m);
    for (std::size_t j = 0; j < a.n(); ++j) out.v[j] = a.v[j] - b.v[j];
    return out;
}

ComplexField operator*(Cplx s, const ComplexField& a) {
    ComplexField out(a.grid, a.m);
    for (std::size_t j = 0; j < a.n(); ++j) out.v[j] = s * a.v[j];
    return out;
}

ComplexField conj(const ComplexField& a) {
    ComplexField out(a.grid, -a.m);
    for (std::size_t j = 0; j < a.n(); ++j) out.v[j] = std::conj(a.v[j]);
    return out;
}

ComplexField multiply(const ComplexField& a, const ComplexField& b) {
    check_same_grid(a, b);
    ComplexField out(a.grid, a.m + b.m);
    for (std::size_t j = 0; j < a.n(); ++j) out.v[j] = a.v[j] * b.v[j];
    return out;
}

ComplexField multiply_real(const std::vector<double>& s, const ComplexField& a) {
    if (s.size() != a.n()) throw std::invalid_argument("scale size mismatch");
    ComplexField out(a.grid, a.m);
    for (std::size_t j = 0; j < a.n(); ++j) out.v[j] = s[j] * a.v[j];
    return out;
}

Cplx interp_field(const ComplexField& f, double x) {
    return interp_field_with_deriv(f, x).value;
}

InterpPair interp_field_with_deriv(const ComplexField& f, double x) {
    const auto& r = f.grid->r;
    const std::size_t n = f.n();
    if (x > f.grid->r_max) return {Cplx(0.0), Cplx(0.0)};
    if (x <= r.front()) {
        // regular branch c r^{|m|}
        const int p = std::abs(f.m);
        const double ratio = x / r.front();
        const double s = (p == 0) ? 1.0 : std::pow(ratio, p);
        Cplx val = f.v.front() * s;
        Cplx der = (p == 0) ? Cplx(0.0) : f.v.front() * (double(p) / r.front()) * std::pow(ratio, p - 1);
        return {val, der};
    }
    std::size_t j = bracket_index(*f.grid, x);
    // center a 4-point stencil at [j-1, j, j+1, j+2]
    std::size_t i0 = (j == 0) ? 0 : j - 1;
    if (i0 + 3 > n - 1) i0 = n - 4;
    double xs[4];
    Cplx ys[4];
    for (int k = 0; k < 4; ++k) { xs[k] = r[i0 + k]; ys[k] = f.v[i0 + k]; }
    Cplx val(0.0), der(0.0);
    for (int k = 0; k < 4; ++k) {
        double lk = 1.0, dk = 0.0;
        for (int l = 0; l < 4; ++l) {
            if (l == k) continue;
            lk *= (x - xs[l]) / (xs[k] - xs[l]);
        }
        // derivative of the Lagrange basis
        for (int a = 0; a < 4; ++a) {
            if (a == k) continue;
            double prod = 1.0;
            for (int l = 0; l < 4; ++l) {
                if (l == k || l == a) continue;
                prod *= (x - xs[l]) / (xs[k] - xs[l]);
            }
            dk += prod / (xs[k] - xs[a]);
        }
        val += ys[k] * lk;
        der += ys[k] * dk;
    }
    return {val, der};
}

// ------------------------------------------------------------- quadrature

static double origin_segment_real(const ComplexField& f) {
    // int_0^{r_0} Re f * r dr with f ~ f_0 (r/r_0)^{|m|}
    const double r0 = f.grid->r.front();
    const int p = std::abs(f.m);
    return f.v.front().real() * r0 * r0 / double(p + 2);
}

Cplx integrate(const ComplexField& f) {
    const auto& r = f.grid->r;
    const auto& w = f.grid->w;
    Cplx acc(0.0);
    for (std::size_t j = 0; j < f.n(); ++j) acc += w[j] * f.v[j] * r[j];
    const double r0 = r.front();
    const int p = std::abs(f.m);
    acc += f.v.front() * (r0 * r0 / double(p + 2));
    return 2.0 * M_PI * acc;
}

double integrate_real(const ComplexField& f) { return integrate(f).real(); }

Cplx integrate_smooth(const ComplexField& f) {
    return 2.0 * M_PI * cumulative_primitive(f).v.back();
}

double integrate_smooth_real(const ComplexField& f) { return integrate_smooth(f).real(); }

// Endpoint-corrected trapezoid on one interval: int_{x0}^{x1} g is
// (h/2)(g0+g1) - (h^2/12)(g1' - g0'), exact for cubics. Slopes come from
// local 3-point stencils, so each prefix/suffix sum is O(h^4) accurate on
// smoothly varying grids while remaining a plain accumulation.
static std::vector<Cplx> stencil_slopes(const std::vector<double>& x,
                                        const std::vector<Cplx>& g) {
    const std::size_t n = x.size();
    std::vector<Cplx> d(n);
    for (std::size_t j = 0; j < n; ++j) {
        std::size_t i = (j == 0) ? 1 : (j == n - 1 ? n - 2 : j);
        const double hm = x[i] - x[i - 1], hp = x[i + 1] - x[i];
        const double xx = x[j];
        const double dm = (2.0 * xx - x[i] - x[i + 1]) / (hm * (hm + hp));
        const double d0 = (2.0 * xx - x[i - 1] - x[i + 1]) / (-hm * hp);
        const double dp = (2.0 * xx - x[i - 1] - x[i]) / (hp * (hm + hp));
        d[j] = g[i - 1] * dm + g[i] * d0 + g[i + 1] * dp;
    }
    return d;
}

static std::vector<Cplx> prefix_corrected(const std::vector<double>& x,
                                          const std::vector<Cplx>& g, Cplx seg0) {
    std::vector<Cplx> d = stencil_slopes(x, g);
    std::vector<Cplx> out(x.size());
    Cplx acc = seg0;
    out[0] = acc;
    for (std::size_t j = 1; j < x.size(); ++j) {
        const double h = x[j] - x[j - 1];
        acc += 0.5 * h * (g[j - 1] + g[j]) - h * h / 12.0 * (d[j] - d[j - 1]);
        out[j] = acc;
    }
    return out;
}

ComplexField cumulative_primitive(const ComplexField& f) {
    const auto& r = f.grid->r;
    const double r0 = r.front();
    const int p = std::abs(f.m);
    std::vector<Cplx> g(f.n());
    for (std::size_t j = 0; j < f.n(); ++j) g[j] = f.v[j] * r[j];
    ComplexField out(f.grid, 0);
    out.v = prefix_corrected(r, g, f.v.front() * (r0 * r0 / double(p + 2)));
    return out;
}

ComplexField cumulative_line(const ComplexField& f) {
    const auto& r = f.grid->r;
    const int p = std::abs(f.m);
    ComplexField out(f.grid, 0);
    out.v = prefix_corrected(r, f.v, f.v.front() * (r.front() / double(p + 1)));
    return out;
}

static ComplexField suffix_from_prefix(const ComplexField& prefix) {
    ComplexField out(prefix.grid, 0);
    const Cplx total = prefix.v.back();
    for (std::size_t j = 0; j < prefix.n(); ++j) out.v[j] = total - prefix.v[j];
    return out;
}

ComplexField tail_logweight(const ComplexField& f, bool* boundary_flag, double tol) {
    const auto& r = f.grid->r;
    if (boundary_flag)
        *boundary_flag = std::abs(f.v.back()) * r.back() > tol;
    std::vector<Cplx> g(f.n());
    for (std::size_t j = 0; j < f.n(); ++j) g[j] = f.v[j] / r[j];
    ComplexField pre(f.grid, 0);
    pre.v = prefix_corrected(r, g, Cplx(0.0));
    return suffix_from_prefix(pre);
}

ComplexField tail_line(const ComplexField& f) {
    ComplexField pre(f.grid, 0);
    pre.v = prefix_corrected(f.grid->r, f.v, Cplx(0.0));
    return suffix_from_prefix(pre);
}

// ------------------------------------------------------------ derivatives

// Derivative weights from the Lagrange polynomial through `np` nodes,
// evaluated at x. Fornberg-style direct computation for small stencils.
static void lagrange_deriv_weights(const double* xs, int np, double x, int order,
                                   double* wts) {
    for (int k = 0; k < np; ++k) {
        if (order == 1) {
            double acc = 0.0;
            for (int a = 0; a < np; ++a) {
                if (a == k) continue;
                double prod = 1.0;
                for (int l = 0; l < np; ++l) {
                    if (l == k || l == a) continue;
                    prod *= (x - xs[l]) / (xs[k] - xs[l]);
                }
                acc += prod / (xs[k] - xs[a]);
            }
            wts[k] = acc;
        } else {
            double acc = 0.0;
            for (int a = 0; a < np; ++a) {
                if (a == k) continue;
                for (int b = 0; b < np; ++b) {
                    if (b == k || b == a) continue;
                    double prod = 1.0;
                    for (int l = 0; l < np; ++l) {
                        if (l == k || l == a || l == b) continue;
                        prod *= (x - xs[l]) / (xs[k] - xs[l]);
                    }
                    acc += prod / ((xs[k] - xs[a]) * (xs[k] - xs[b]));
                }
            }
            wts[k] = acc;
        }
    }
}

// 5-point stencils (shifted near the boundaries). The extra two points over
// the minimal 3-point stencil are needed to keep the linearization residuals
// below the acceptance tolerances at the reference resolution.
static ComplexField apply_stencil_deriv(const ComplexField& f, int order) {
    const auto& r = f.grid->r;
    const std::size_t n = f.n();
    ComplexField out(f.grid, f.m);
    if (n < 5) throw std::invalid_argument("grid too small for derivative stencils");
    double wts[5];
    for (std::size_t j = 0; j < n; ++j) {
        std::size_t i0 = (j < 2) ? 0 : (j > n - 3 ? n - 5 : j - 2);
        lagrange_deriv_weights(&r[i0], 5, r[j], order, wts);
        Cplx acc(0.0);
        for (int k = 0; k < 5; ++k) acc += wts[k] * f.v[i0 + k];
        out.v[j] = acc;
    }
    return out;
}

ComplexField d_r(const ComplexField& f) { return apply_stencil_deriv(f, 1); }

ComplexField d_r2(const ComplexField& f) { return apply_stencil_deriv(f, 2); }

ComplexField d_pm(const ComplexField& f, int m, int sign) {
    ComplexField out = d_r(f);
    const auto& r = f.grid->r;
    for (std::size_t j = 0; j < f.n(); ++j)
        out.v[j] -= double(sign) * double(m) / r[j] * f.v[j];
    out.m = f.m + sign;
    return out;
}

ComplexField laplacian_m(const ComplexField& f, int m) {
    const auto& r = f.grid->r;
    ComplexField d1 = d_r(f), d2 = d_r2(f);
    ComplexField out(f.grid, f.m);
    for (std::size_t j = 0; j < f.n(); ++j)
        out.v[j] = d2.v[j] + d1.v[j] / r[j] - double(m) * double(m) / (r[j] * r[j]) * f.v[j];
    return out;
}

ComplexField scaling_gen(const ComplexField& f) {
    ComplexField d1 = d_r(f);
    const auto& r = f.grid->r;
    ComplexField out(f.grid, f.m);
    for (std::size_t j = 0; j < f.n(); ++j) out.v[j] = r[j] * d1.v[j] + f.v[j];
    return out;
}

ComplexField scaling_gen_trunc(const ComplexField& f, double A) {
    Cutoff c{A};
    ComplexField d1 = d_r(f);
    const auto& r = f.grid->r;
    ComplexField out(f.grid, f.m);
    for (std::size_t j = 0; j < f.n(); ++j) {
        const double chi = c.chi(r[j]), dchi = c.dchi(r[j]);
        out.v[j] = chi * (r[j] * d1.v[j] + f.v[j]) + 0.5 * r[j] * dchi * f.v[j];
    }
    return out;
}

// ------------------------------------------------------------------ norms

double real_inner(const ComplexField& f, const ComplexField& g) {
    check_same_grid(f, g);
    const auto& r = f.grid->r;
    const auto& w = f.grid->w;
    double acc = 0.0;
    for (std::size_t j = 0; j < f.n(); ++j)
        acc += w[j] * (f.v[j].real() * g.v[j].real() + f.v[j].imag() * g.v[j].imag()) * r[j];
    const double r0 = r.front();
    const int p = std::abs(f.m) + std::abs(g.m);
    acc += (f.v.front().real() * g.v.front().real() + f.v.front().imag() * g.v.front().imag()) *
           r0 * r0 / double(p + 2);
    return 2.0 * M_PI * acc;
}

double norm_l2(const ComplexField& f) { return std::sqrt(std::max(0.0, real_inner(f, f))); }

std::vector<double> abs_minus1(const ComplexField& f) {
    ComplexField d1 = d_r(f);
    const auto& r = f.grid->r;
    std::vector<double> out(f.n());
    for (std::size_t j = 0; j < f.n(); ++j)
        out[j] = std::max(std::abs(d1.v[j]), std::abs(f.v[j]) / r[j]);
    return out;
}

NormRecord norms(const ComplexField& f) {
    const auto& r = f.grid->r;
    const auto& w = f.grid->w;
    ComplexField d1 = d_r(f);
    double l2 = 0, h1 = 0, rw = 0, ir = 0, hc_d = 0, hc_w = 0;
    for (std::size_t j = 0; j < f.n(); ++j) {
        const double a2 = std::norm(f.v[j]);
        const double d2 = std::norm(d1.v[j]);
        const double rj = r[j], wj = w[j] * rj;
        l2 += wj * a2;
        h1 += wj * (d2 + double(f.m) * double(f.m) * a2 / (rj * rj));
        rw += wj * rj * rj * a2;
        ir += wj * a2 / (rj * rj);
        hc_d += wj * d2;
        const double logm = std::max(-std::log(rj), 0.0);
        const double wgt = 1.0 / (1.0 + logm * logm);  // <log_- r>^{-2}
        hc_w += wj * wgt * a2 / (rj * rj);
    }
    const double two_pi = 2.0 * M_PI;
    NormRecord out;
    out.l2 = std::sqrt(two_pi * l2);
    out.h1dot = std::sqrt(two_pi * h1);
    out.h1 = std::hypot(out.l2, out.h1dot);
    out.r_weighted = std::sqrt(two_pi * rw);
    out.inv_r = std::sqrt(two_pi * ir);
    out.hcal10 = std::sqrt(two_pi * hc_d) + std::sqrt(two_pi * hc_w);
    out.h11 = out.h1 + out.r_weighted;
    return out;
}

} // namespace css
