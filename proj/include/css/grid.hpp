#pragma once

#include <cstddef>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace css {

enum class GridKind { Uniform, LogUniform };

// Radial quadrature grid: strictly increasing radii r_0 < ... < r_{N-1},
// all positive, with trapezoid weights so that 2*pi * sum_j w_j f(r_j) r_j
// approximates the planar integral of a radial function f.
struct RadialGrid {
    std::vector<double> r;
    std::vector<double> w;   // trapezoid weights in dr
    GridKind kind = GridKind::LogUniform;
    double r_max = 0.0;

    std::size_t n() const { return r.size(); }
    double r_min() const { return r.front(); }

    static RadialGrid log_uniform(std::size_t n, double r_min, double r_max);
    static RadialGrid uniform(std::size_t n, double r_max);

    // Default grid per kind; log grids use r_min = 1e-6 * r_max.
    static RadialGrid make(GridKind kind, std::size_t n, double r_max);
};

using GridPtr = std::shared_ptr<const RadialGrid>;

GridPtr make_log_grid(std::size_t n, double r_max, double r_min = -1.0);
GridPtr make_uniform_grid(std::size_t n, double r_max);

// Index of the largest grid point <= x, clamped to [0, n-2].
std::size_t bracket_index(const RadialGrid& g, double x);

} // namespace css
