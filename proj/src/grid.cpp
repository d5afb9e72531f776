#include "css/grid.hpp"

#include <algorithm>
#include <cmath>

namespace css {

static std::vector<double> trapezoid_weights(const std::vector<double>& r) {
    const std::size_t n = r.size();
    std::vector<double> w(n, 0.0);
    if (n < 2) throw std::invalid_argument("grid needs at least 2 nodes");
    w[0] = 0.5 * (r[1] - r[0]);
    for (std::size_t j = 1; j + 1 < n; ++j) w[j] = 0.5 * (r[j + 1] - r[j - 1]);
    w[n - 1] = 0.5 * (r[n - 1] - r[n - 2]);
    return w;
}

RadialGrid RadialGrid::log_uniform(std::size_t n, double r_min, double r_max) {
    if (!(r_min > 0.0) || !(r_max > r_min)) throw std::invalid_argument("bad log grid bounds");
    RadialGrid g;
    g.kind = GridKind::LogUniform;
    g.r_max = r_max;
    g.r.resize(n);
    const double l0 = std::log(r_min), l1 = std::log(r_max);
    for (std::size_t j = 0; j < n; ++j)
        g.r[j] = std::exp(l0 + (l1 - l0) * double(j) / double(n - 1));
    g.r.front() = r_min;
    g.r.back() = r_max;
    g.w = trapezoid_weights(g.r);
    return g;
}

RadialGrid RadialGrid::uniform(std::size_t n, double r_max) {
    if (!(r_max > 0.0)) throw std::invalid_argument("bad uniform grid bound");
    RadialGrid g;
    g.kind = GridKind::Uniform;
    g.r_max = r_max;
    g.r.resize(n);
    const double h = r_max / double(n);
    for (std::size_t j = 0; j < n; ++j) g.r[j] = h * double(j + 1);
    g.w = trapezoid_weights(g.r);
    return g;
}

RadialGrid RadialGrid::make(GridKind kind, std::size_t n, double r_max) {
    if (kind == GridKind::Uniform) return uniform(n, r_max);
    return log_uniform(n, 1e-6 * r_max, r_max);
}

GridPtr make_log_grid(std::size_t n, double r_max, double r_min) {
    if (r_min <= 0.0) r_min = 1e-6 * r_max;
    return std::make_shared<const RadialGrid>(RadialGrid::log_uniform(n, r_min, r_max));
}

GridPtr make_uniform_grid(std::size_t n, double r_max) {
    return std::make_shared<const RadialGrid>(RadialGrid::uniform(n, r_max));
}

std::size_t bracket_index(const RadialGrid& g, double x) {
    const auto& r = g.r;
    auto it = std::upper_bound(r.begin(), r.end(), x);
    if (it == r.begin()) return 0;
    std::size_t j = std::size_t(it - r.begin()) - 1;
    if (j > r.size() - 2) j = r.size() - 2;
    return j;
}

} // namespace css
