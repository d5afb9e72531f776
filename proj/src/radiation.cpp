#include "css/radiation.hpp"

#include <cmath>

namespace css {

RadiationSpec RadiationSpec::make(Cplx q, Cplx nu) {
    if (!(nu.real() > 0.0)) throw std::invalid_argument("radiation requires Re nu > 0");
    if (q == Cplx(0.0)) throw std::invalid_argument("radiation requires q != 0");
    RadiationSpec s;
    s.q = q;
    s.nu = nu;
    s.frak_m = -2;
    s.N = int(std::floor((nu.real() + 1.0) / 2.0));
    s.cutoff = Cutoff{1.0};
    return s;
}

ComplexField asymptotic_profile(const RadiationSpec& spec, const GridPtr& grid) {
    ComplexField out(grid, spec.frak_m);
    for (std::size_t j = 0; j < grid->n(); ++j) {
        const double r = grid->r[j];
        const double chi = spec.cutoff.chi(r);
        out.v[j] = (chi == 0.0) ? Cplx(0.0)
                                : spec.q * cpow_principal(Cplx(r, 0.0), spec.nu) * chi;
    }
    return out;
}

// ----------------------------------------------------------- workspace

RadiationWorkspace::RadiationWorkspace(RadiationSpec spec, GridPtr grid)
    : spec_(spec), grid_(std::move(grid)) {
    pos_ = make_machinery(spec_.q, spec_.nu);
    neg_ = make_machinery(std::conj(spec_.q), std::conj(spec_.nu));
}

RadiationWorkspace::Machinery RadiationWorkspace::make_machinery(Cplx q, Cplx nu) const {
    Machinery M;
    M.q = q;
    M.nu = nu;
    M.reg = make_regular_solution(nu, spec_.frak_m);

    const auto& r = grid_->r;
    const int fm = spec_.frak_m;
    const Cutoff& cut = spec_.cutoff;
    const int N = spec_.N;

    // P_lin,n(r) = q c_{f1,2n} [Delta^{(m)}, chi] r^{nu - 2n}
    auto commutator_profile = [&](Cplx coeff, Cplx expo) {
        ComplexField out(grid_, fm);
        for (std::size_t j = 0; j < grid_->n(); ++j) {
            const double rr = r[j];
            const double c1 = cut.dchi(rr), c2 = cut.d2chi(rr);
            if (c1 == 0.0 && c2 == 0.0) { out.v[j] = 0.0; continue; }
            const Cplx f = cpow_principal(Cplx(rr, 0.0), expo);
            const Cplx fp = expo * f / rr;
            out.v[j] = coeff * (c2 * f + c1 * (2.0 * fp + f / rr));
        }
        return out;
    };

    M.prof.g.clear();
    M.prof.h.clear();
    M.prof.plin.clear();
    M.prof.g.push_back(ComplexField(grid_, fm));  // g_0 = 0
    auto h_of = [&](int n, const ComplexField& gn) {
        const Cplx coeff = q * M.reg.f1.coeffs[n];
        ComplexField out(grid_, fm);
        for (std::size_t j = 0; j < grid_->n(); ++j) {
            const double rr = r[j];
            const double chi = cut.chi(rr);
            Cplx val = gn.v[j];
            if (chi != 0.0)
                val += coeff * cpow_principal(Cplx(rr, 0.0), nu - 2.0 * double(n)) * chi;
            out.v[j] = val;
        }
        return out;
    };
    M.prof.h.push_back(h_of(0, M.prof.g[0]));
    M.prof.plin.push_back(commutator_profile(q * M.reg.f1.coeffs[0], nu));

    // compositions of n into k ordered nonnegative parts
    auto for_compositions = [&](int n, int k, auto&& fn) {
        std::vector<int> parts(k, 0);
        auto rec = [&](auto&& self, int idx, int rem) -> void {
            if (idx == k - 1) {
                parts[idx] = rem;
                fn(parts);
                return;
            }
            for (int v = 0; v <= rem; ++v) {
                parts[idx] = v;
                self(self, idx + 1, rem - v);
            }
        };
        rec(rec, 0, n);
    };

    for (int n = 0; n < N; ++n) {
        ComplexField source = M.prof.plin[n];
        ComplexField lap_gn = laplacian_m(M.prof.g[n], fm);
        for (std::size_t j = 0; j < grid_->n(); ++j) source.v[j] += lap_gn.v[j];
        ComplexField nl(grid_, fm);
        for_compositions(n, 3, [&](const std::vector<int>& c) {
            ComplexField t = n3_multi(M.prof.h[c[0]], M.prof.h[c[1]], M.prof.h[c[2]], fm,
                                      AtVariant::PhaseRotated);
            for (std::size_t j = 0; j < grid_->n(); ++j) nl.v[j] += t.v[j];
        });
        for_compositions(n, 5, [&](const std::vector<int>& c) {
            ComplexField t = n5_multi(M.prof.h[c[0]], M.prof.h[c[1]], M.prof.h[c[2]],
                                      M.prof.h[c[3]], M.prof.h[c[4]], fm,
                                      AtVariant::PhaseRotated);
            for (std::size_t j = 0; j < grid_->n(); ++j) nl.v[j] += t.v[j];
        });
        ComplexField gnext(grid_, fm);
        const Cplx pref = Cplx(0.0, 1.0) / double(n + 1);
        for (std::size_t j = 0; j < grid_->n(); ++j)
            gnext.v[j] = pref * (source.v[j] - nl.v[j]);
        M.prof.g.push_back(gnext);
        if (int(M.prof.plin.size()) <= n + 1 && n + 1 < int(M.reg.f1.coeffs.size()))
            M.prof.plin.push_back(commutator_profile(q * M.reg.f1.coeffs[n + 1],
                                                     nu - 2.0 * double(n + 1)));
        M.prof.h.push_back(h_of(n + 1, M.prof.g[n + 1]));
    }

    M.lap_g.clear();
    M.dg.clear();
    for (int n = 0; n <= N; ++n) {
        M.lap_g.push_back(laplacian_m(M.prof.g[n], fm));
        M.dg.push_back(d_r(M.prof.g[n]));
    }
    return M;
}

// Build at positive time t: z, d_r z, d_t z, and the exact linear error
// (i d_t + Delta) z_lin_hat = q t^{nu/2} [Delta, chi] W(Y).
RadiationWorkspace::RawBuild RadiationWorkspace::raw_build(const Machinery& M, double t) const {
    const auto& r = grid_->r;
    const int fm = spec_.frak_m;
    const Cutoff& cut = spec_.cutoff;
    const int N = spec_.N;
    const double st = std::sqrt(t);

    RawBuild out{ComplexField(grid_, fm), ComplexField(grid_, fm), ComplexField(grid_, fm),
                 ComplexField(grid_, fm)};
    const Cplx tpow = cpow_principal(Cplx(t, 0.0), M.nu / 2.0);

    std::vector<double> tn(N + 1);
    tn[0] = 1.0;
    for (int n = 1; n <= N; ++n) tn[n] = tn[n - 1] * t;

    for (std::size_t j = 0; j < grid_->n(); ++j) {
        const double rr = r[j];
        const double chi = cut.chi(rr);
        Cplx z(0.0), dz(0.0), dtz(0.0), lin(0.0);
        if (chi != 0.0 || cut.dchi(rr) != 0.0) {
            const double Y = rr / st;
            Cplx W, dW;
            M.reg.eval(Y, &W, &dW);
            const Cplx base = M.q * tpow;
            z = base * W * chi;
            dz = base * (dW / st * chi + W * cut.dchi(rr));
            dtz = base / t * ((M.nu / 2.0) * W - (Y / 2.0) * dW) * chi;
            lin = base * (cut.d2chi(rr) * W + cut.dchi(rr) * (2.0 * dW / st + W / rr));
        }
        if (N > 0) {
            const double Y = rr / st;
            const double mask = 1.0 - Cutoff::base(Y);
            const double dmask = -Cutoff::dbase(Y) / st;
            const double dtmask = Cutoff::dbase(Y) * Y / (2.0 * t);
            if (mask != 0.0 || dmask != 0.0) {
                Cplx sum(0.0), dsum(0.0), tsum(0.0);
                for (int n = 1; n <= N; ++n) {
                    sum += tn[n] * M.prof.g[n].v[j];
                    dsum += tn[n] * M.dg[n].v[j];
                    tsum += double(n) * tn[n - 1] * M.prof.g[n].v[j];
                }
                z += mask * sum;
                dz += dmask * sum + mask * dsum;
                dtz += mask * tsum + dtmask * sum;
            }
        }
        out.z.v[j] = z;
        out.dz_r.v[j] = dz;
        out.dt_z.v[j] = dtz;
        out.lin_err.v[j] = lin;
    }
    return out;
}

double RadiationWorkspace::theta_at(double t_abs) const {
    RawBuild rb = raw_build(neg_, t_abs);  // |z| is the same for either machinery
    return theta_z(rb.z);
}

double RadiationWorkspace::gamma_z_at(double t) const {
    // gamma_z(t) = -int_0^t theta_z dt'; geometric ladder from |t| down.
    const double ta = std::abs(t);
    if (ta == 0.0) return 0.0;
    const int K = 25;
    const double smin = ta * 1e-4;
    const double rho = std::pow(smin / ta, 1.0 / double(K - 1));
    double acc = 0.0;
    double s_prev = ta, th_prev = theta_at(ta);
    for (int k = 1; k < K; ++k) {
        const double s = ta * std::pow(rho, k);
        const double th = theta_at(s);
        acc += 0.5 * (th_prev + th) * (s_prev - s);
        s_prev = s;
        th_prev = th;
    }
    acc += th_prev * s_prev;  // close [0, smin] with the limiting value
    return (t > 0) ? -acc : acc;
}

ComplexField RadiationWorkspace::z_lin_hat(double t) const {
    if (t == 0.0) throw std::invalid_argument("z_lin_hat requires t != 0");
    const Machinery& M = (t > 0) ? pos_ : neg_;
    const double ta = std::abs(t);
    const auto& r = grid_->r;
    const Cplx tpow = cpow_principal(Cplx(ta, 0.0), M.nu / 2.0);
    ComplexField out(grid_, spec_.frak_m);
    const double st = std::sqrt(ta);
    for (std::size_t j = 0; j < grid_->n(); ++j) {
        const double chi = spec_.cutoff.chi(r[j]);
        if (chi == 0.0) continue;
        Cplx W;
        M.reg.eval(r[j] / st, &W, nullptr);
        out.v[j] = M.q * tpow * W * chi;
    }
    if (t < 0)
        for (auto& v : out.v) v = std::conj(v);
    return out;
}

RadiationField RadiationWorkspace::build(double t, bool with_gamma_z) const {
    if (t == 0.0) throw std::invalid_argument("radiation build requires t != 0");
    const Machinery& M = (t > 0) ? pos_ : neg_;
    RawBuild rb = raw_build(M, std::abs(t));
    RadiationField out;
    out.t = t;
    out.z = rb.z;
    // z1 = d_r z - (m + A_theta[z]) z / r
    std::vector<double> at = a_theta(rb.z);
    out.z1 = ComplexField(grid_, spec_.frak_m + 1);
    const auto& r = grid_->r;
    for (std::size_t j = 0; j < grid_->n(); ++j)
        out.z1.v[j] = rb.dz_r.v[j] -
                      (double(spec_.frak_m) + at[j]) / r[j] * rb.z.v[j];
    if (t < 0) {
        for (auto& v : out.z.v) v = std::conj(v);
        for (auto& v : out.z1.v) v = std::conj(v);
    }
    out.gamma_z = with_gamma_z ? gamma_z_at(t) : 0.0;
    return out;
}

ResidualReport RadiationWorkspace::residual(double t, double delta_z) const {
    const Machinery& M = (t > 0) ? pos_ : neg_;
    const double ta = std::abs(t);
    RawBuild rb = raw_build(M, ta);

    // Psi = (i d_t + Delta) z - N(z) with the z_lin part exact and the
    // mask * sum t^n g_n part assembled from stored FD Laplacians.
    const auto& r = grid_->r;
    const int fm = spec_.frak_m;
    const int N = spec_.N;
    const double st = std::sqrt(ta);
    ComplexField psi(grid_, fm);
    NonlinearityBreakdown nb = nonlinearity(rb.z, fm, AtVariant::PhaseRotated);
    std::vector<double> tn(N + 1);
    tn[0] = 1.0;
    for (int n = 1; n <= N; ++n) tn[n] = tn[n - 1] * ta;
    for (std::size_t j = 0; j < grid_->n(); ++j) {
        Cplx val = rb.lin_err.v[j];  // linear error of z_lin_hat (exact)
        if (N > 0) {
            const double Y = r[j] / st;
            const double mask = 1.0 - Cutoff::base(Y);
            const double dmask = -Cutoff::dbase(Y) / st;
            const double d2mask = -Cutoff::d2base(Y) / ta;
            const double dtmask = Cutoff::dbase(Y) * Y / (2.0 * ta);
            if (mask != 0.0 || dmask != 0.0) {
                Cplx sum(0.0), dsum(0.0), lsum(0.0), tsum(0.0);
                for (int n = 1; n <= N; ++n) {
                    sum += tn[n] * M.prof.g[n].v[j];
                    dsum += tn[n] * M.dg[n].v[j];
                    lsum += tn[n] * M.lap_g[n].v[j];
                    tsum += double(n) * tn[n - 1] * M.prof.g[n].v[j];
                }
                // i d_t (mask sum) + Delta (mask sum)
                val += Cplx(0.0, 1.0) * (mask * tsum + dtmask * sum);
                val += mask * lsum + d2mask * sum + dmask * (2.0 * dsum + sum / r[j]);
            }
        }
        val -= nb.total.v[j];
        psi.v[j] = val;
    }

    ResidualReport rep;
    rep.delta_z = delta_z;
    rep.psi_l2 = norm_l2(psi);
    std::vector<double> am1 = abs_minus1(psi);
    double s0 = 0.0, sdz = 0.0;
    const auto& w = grid_->w;
    for (std::size_t j = 0; j < grid_->n(); ++j) {
        const double a2 = am1[j] * am1[j];
        s0 += w[j] * r[j] * a2;
        sdz += w[j] * r[j] * a2 * std::pow(r[j], -2.0 * delta_z);
    }
    rep.psi_weighted_s0 = std::sqrt(2.0 * M_PI * s0);
    rep.psi_weighted_sdz = std::sqrt(2.0 * M_PI * sdz);

    // analytic vs 4th-order finite-difference d_t z (at positive time).
    // The f2 branch carries the pseudoconformal phase e^{i r^2/4t}; the
    // step must keep its change small over the stencil: h |d phase/dt| << 1
    // with |d phase/dt| <= r_supp^2 / (4 t^2), r_supp = 2.
    const double h = std::min(1e-3 * ta, 0.02 * ta * ta);
    auto zb = [&](double tt) { return raw_build(M, tt).z; };
    ComplexField zp1 = zb(ta + h), zm1 = zb(ta - h), zp2 = zb(ta + 2 * h), zm2 = zb(ta - 2 * h);
    double num = 0.0, den = 0.0;
    for (std::size_t j = 0; j < grid_->n(); ++j) {
        const Cplx fd = (-zp2.v[j] + 8.0 * zp1.v[j] - 8.0 * zm1.v[j] + zm2.v[j]) / (12.0 * h);
        num += std::norm(fd - rb.dt_z.v[j]) * w[j] * r[j];
        den += std::norm(rb.dt_z.v[j]) * w[j] * r[j];
    }
    rep.dt_crosscheck_rel = std::sqrt(num / std::max(den, 1e-300));
    rep.crosscheck_ok = rep.dt_crosscheck_rel < 1e-4;
    return rep;
}

ExpansionProfiles expansion_profiles(const RadiationSpec& spec, const GridPtr& grid) {
    RadiationWorkspace ws(spec, grid);
    return ws.profiles_positive();
}

RadiationField z_full(const RadiationSpec& spec, double t, const GridPtr& grid) {
    RadiationWorkspace ws(spec, grid);
    return ws.build(t);
}

ResidualReport psi_z(const RadiationSpec& spec, double t, const GridPtr& grid, double delta_z) {
    RadiationWorkspace ws(spec, grid);
    return ws.residual(t, delta_z);
}

// ------------------------------------------------------------- transforms

ComplexField hankel_half_transform(const ComplexField& f) {
    const auto& r = f.grid->r;
    const auto& w = f.grid->w;
    ComplexField out(f.grid, f.m);
    const Cplx pref(0.0, -0.5);
    // restrict to the support of f (trailing zeros cost nothing)
    std::size_t jmax = f.n();
    while (jmax > 1 && std::abs(f.v[jmax - 1]) == 0.0) --jmax;
    for (std::size_t i = 0; i < f.n(); ++i) {
        const double rho = r[i];
        Cplx acc(0.0);
        for (std::size_t j = 0; j < jmax; ++j)
            acc += w[j] * bessel_j2(0.5 * rho * r[j]) * f.v[j] * r[j];
        out.v[i] = pref * acc;
    }
    return out;
}

ComplexField u_star(const RadiationSpec& spec, const GridPtr& grid) {
    return hankel_half_transform(asymptotic_profile(spec, grid));
}

std::pair<ComplexField, double> pseudoconformal(const ComplexField& u, double t) {
    if (t == 0.0) throw std::invalid_argument("pseudoconformal requires t != 0");
    const double tp = -1.0 / t;
    ComplexField out(u.grid, u.m);
    const auto& r = u.grid->r;
    for (std::size_t j = 0; j < u.n(); ++j) {
        const Cplx val = interp_field(u, r[j] / tp);
        out.v[j] = (1.0 / tp) * std::exp(Cplx(0.0, r[j] * r[j] / (4.0 * tp))) * val;
    }
    return {out, tp};
}

} // namespace css
