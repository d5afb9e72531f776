#pragma once

#include <complex>
#include <vector>

#include "css/grid.hpp"

namespace css {

using Cplx = std::complex<double>;

// Complex radial samples with an equivariance index m. Immutable grid
// reference; values are one sample per radius.
struct ComplexField {
    GridPtr grid;
    int m = 0;
    std::vector<Cplx> v;

    ComplexField() = default;
    ComplexField(GridPtr g, int m_) : grid(std::move(g)), m(m_), v(grid->n(), Cplx(0.0)) {}
    ComplexField(GridPtr g, int m_, std::vector<Cplx> vals)
        : grid(std::move(g)), m(m_), v(std::move(vals)) {
        if (v.size() != grid->n()) throw std::invalid_argument("field/grid size mismatch");
    }

    std::size_t n() const { return v.size(); }
    const std::vector<double>& r() const { return grid->r; }
};

// Pointwise helpers (fields must share a grid; m of the result is taken
// from the first argument unless stated).
ComplexField operator+(const ComplexField& a, const ComplexField& b);
ComplexField operator-(const ComplexField& a, const ComplexField& b);
ComplexField operator*(Cplx s, const ComplexField& a);
ComplexField conj(const ComplexField& a);
ComplexField multiply(const ComplexField& a, const ComplexField& b);      // a*b
ComplexField multiply_real(const std::vector<double>& s, const ComplexField& a);

template <class F>
ComplexField sample_field(const GridPtr& g, int m, F&& f) {
    ComplexField out(g, m);
    for (std::size_t j = 0; j < g->n(); ++j) out.v[j] = f(g->r[j]);
    return out;
}

// 4-point Lagrange interpolation of a field at radius x. Below the first
// node the value follows the regular branch c * r^{|m|}; beyond r_max it
// is zero.
Cplx interp_field(const ComplexField& f, double x);

// Interpolate both f and its radial derivative (derivative of the cubic).
struct InterpPair { Cplx value, deriv; };
InterpPair interp_field_with_deriv(const ComplexField& f, double x);

} // namespace css
