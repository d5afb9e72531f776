#pragma once

namespace css {

// Smooth radial cutoff chi with chi(x)=1 for x<=1 and chi(x)=0 for x>=2.
// The transition is the C^2 quintic smoothstep; first and second
// derivatives are closed-form. chi_A(r) = chi(r/A).
struct Cutoff {
    double A = 1.0;

    static double base(double x) {
        if (x <= 1.0) return 1.0;
        if (x >= 2.0) return 0.0;
        const double s = x - 1.0;
        return 1.0 - s * s * s * (10.0 - 15.0 * s + 6.0 * s * s);
    }
    static double dbase(double x) {
        if (x <= 1.0 || x >= 2.0) return 0.0;
        const double s = x - 1.0;
        return -30.0 * s * s * (1.0 - s) * (1.0 - s);
    }
    static double d2base(double x) {
        if (x <= 1.0 || x >= 2.0) return 0.0;
        const double s = x - 1.0;
        return -60.0 * s * (1.0 - s) * (1.0 - 2.0 * s);
    }

    double chi(double r) const { return base(r / A); }
    double dchi(double r) const { return dbase(r / A) / A; }
    double d2chi(double r) const { return d2base(r / A) / (A * A); }
};

} // namespace css
