#pragma once

#include <complex>
#include <vector>

namespace css {

using Cplx = std::complex<double>;

// Complex gamma (Lanczos, reflection for Re z < 1/2). Throws on poles.
Cplx gamma_complex(Cplx z);

// Principal branch power: z^w = exp(w (ln|z| + i Arg z)), Arg in (-pi, pi].
Cplx cpow_principal(Cplx z, Cplx w);

// Kummer's confluent hypergeometric M(a, c, z). Power series with
// compensated summation; ODE continuation for |z| > 30.
struct KummerResult { Cplx value; bool converged = true; };
KummerResult kummer_m(Cplx a, Cplx c, Cplx z);
Cplx kummer_m_value(Cplx a, Cplx c, Cplx z);

// Self-similar ODE A_{m,nu} V = V'' + V'/Y - m^2 V/Y^2 - (i/2) Y V' + (i nu/2) V.
struct SelfSimilarODE {
    Cplx nu;
    int frak_m = -2;
    Cplx apply(Cplx V, Cplx dV, Cplx d2V, double Y) const;
};

enum class SeriesKind { F1, F2, E1 };

// Truncated asymptotic/convergent series for the fundamental systems.
//   f1 = Y^nu (1 + sum c_{2n} Y^{-2n}), f2 = e^{iY^2/4} Y^{-(nu+2)} (1 + sum d_{2n} Y^{-2n}),
//   e1 = Y^{|m|} (1 + sum e_{2n} Y^{2n}).
struct AsymptoticSeries {
    SeriesKind kind;
    Cplx nu;
    int frak_m;
    int K;                     // number of stored coefficients (c_0 = 1 first)
    std::vector<Cplx> coeffs;  // c_{2n}, n = 0..K-1

    // value and dV/dY at Y (including the prefactor)
    void eval(double Y, Cplx* value, Cplx* deriv) const;
};
AsymptoticSeries series_coeffs(SeriesKind kind, Cplx nu, int frak_m, int K);

// e1 via Kummer: e1 = Y^{|m|} M(a, c, i Y^2/4), a = -(nu-|m|)/2, c = |m|+1.
void eval_e1(Cplx nu, int frak_m, double Y, Cplx* value, Cplx* deriv);

struct ConnectionResult {
    Cplx alpha;           // matched coefficient: f1 + alpha f2 = (4i)^w p e1
    Cplx p;               // Gamma((nu+|m|)/2 + 1) / Gamma(|m|+1)
    Cplx fitted_scale;    // joint-fit proportionality constant (should equal (4i)^w p)
    double window_residual = 0.0;  // RMS misfit / RMS target on the window
    bool ill_conditioned = false;
};

// alpha by least squares on the window Y in [4, 8]; f1, f2 obtained from
// their large-Y series seeded at Y=20 and transported to the window by a
// high-accuracy integration of the ODE.
ConnectionResult connection(Cplx nu, int frak_m);

// Piecewise evaluation of the regular combination W = f1 + alpha f2
// ( = (4i)^w p e1 ): Kummer route for Y <= y_switch, series beyond.
struct RegularSolution {
    Cplx nu;
    int frak_m = -2;
    Cplx alpha, p, four_i_pow_w_p;  // (4i)^{(nu-|m|)/2} p
    AsymptoticSeries f1, f2;
    double y_switch = 8.0;

    void eval(double Y, Cplx* value, Cplx* deriv) const;  // W(Y), W'(Y)
};
RegularSolution make_regular_solution(Cplx nu, int frak_m);

// Bessel J_2 (order -2 equals order 2): series for small x, Hankel
// asymptotics for large x.
double bessel_j2(double x);

} // namespace css
