#pragma once

#include "css/cutoff.hpp"
#include "css/gauge.hpp"
#include "css/specfun.hpp"

namespace css {

// Asymptotic-profile data (q, nu), Re nu > 0: z*(r) = q r^nu chi(r).
struct RadiationSpec {
    Cplx q{1.0, 0.0};
    Cplx nu{2.0, 0.0};
    int frak_m = -2;
    int N = 1;             // floor((Re nu + 1)/2)
    Cutoff cutoff{1.0};

    static RadiationSpec make(Cplx q, Cplx nu);
};

struct RadiationField {
    double t = 0.0;
    ComplexField z;        // index frak_m
    ComplexField z1;       // D_z^{(m)} z
    double gamma_z = 0.0;  // phase correction, -int_0^t theta_z
};

struct ResidualReport {
    double psi_l2 = 0.0;          // ||Psi_z||_{L2}
    double psi_weighted_s0 = 0.0; // || |Psi_z|_{-1} ||_{L2}
    double psi_weighted_sdz = 0.0;// || r^{-delta_z} |Psi_z|_{-1} ||_{L2}
    double delta_z = 0.0;
    double dt_crosscheck_rel = 0.0; // analytic vs finite-difference d_t z
    bool crosscheck_ok = true;
};

struct ExpansionProfiles {
    std::vector<ComplexField> g;     // g_0..g_N
    std::vector<ComplexField> h;     // h_0..h_N
    std::vector<ComplexField> plin;  // P_lin,0..P_lin,N (closed-form commutator profiles)
};

// Per-(spec, grid) machinery; builds cache the connection data and the
// expansion profiles for both time signs (t<0 is the conjugate of the
// (conj q, conj nu) construction at |t|).
class RadiationWorkspace {
  public:
    RadiationWorkspace(RadiationSpec spec, GridPtr grid);

    const RadiationSpec& spec() const { return spec_; }
    const GridPtr& grid() const { return grid_; }

    ComplexField z_lin_hat(double t) const;
    RadiationField build(double t, bool with_gamma_z = true) const;
    ResidualReport residual(double t, double delta_z = 0.2) const;
    const ExpansionProfiles& profiles_positive() const { return pos_.prof; }
    const RegularSolution& regular_solution_positive() const { return pos_.reg; }
    double theta_at(double t_abs) const;   // theta_z of the |t|-side build
    double gamma_z_at(double t) const;

  private:
    struct Machinery {
        Cplx q, nu;
        RegularSolution reg;
        ExpansionProfiles prof;
        std::vector<ComplexField> lap_g;  // FD Laplacians of g_n
        std::vector<ComplexField> dg;     // FD radial derivatives of g_n
    };
    struct RawBuild {
        ComplexField z, dz_r, dt_z, lin_err;  // at positive time
    };

    Machinery make_machinery(Cplx q, Cplx nu) const;
    RawBuild raw_build(const Machinery& M, double t) const;

    RadiationSpec spec_;
    GridPtr grid_;
    Machinery pos_, neg_;
};

// Convenience wrappers matching the operation names.
ExpansionProfiles expansion_profiles(const RadiationSpec& spec, const GridPtr& grid);
RadiationField z_full(const RadiationSpec& spec, double t, const GridPtr& grid);
ResidualReport psi_z(const RadiationSpec& spec, double t, const GridPtr& grid,
                     double delta_z = 0.2);

// Hankel-type transform u*(rho) = -(i/2) int_0^inf J_2(rho r / 2) z*(r) r dr.
ComplexField u_star(const RadiationSpec& spec, const GridPtr& grid);
// Same kernel applied to an arbitrary compactly supported field.
ComplexField hankel_half_transform(const ComplexField& f);

// Pseudoconformal transform [C u](t', r) = (1/t') e^{i r^2/(4 t')} u(r/t'),
// t' = -1/t. Returns the transformed field and t'.
std::pair<ComplexField, double> pseudoconformal(const ComplexField& u, double t);

// z*(r) = q r^nu chi(r) sampled on a grid.
ComplexField asymptotic_profile(const RadiationSpec& spec, const GridPtr& grid);

} // namespace css
