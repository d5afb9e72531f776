#pragma once

#include <complex>
#include <string>

namespace css {

// Plain key=value run configuration. Unknown keys are rejected.
struct RunConfig {
    std::size_t grid_n = 4096;
    double grid_r_max = 100.0;
    std::string grid_kind = "log";  // log | uniform
    double q_re = 1.0, q_im = 0.0;
    double nu_re = 2.0, nu_im = 0.0;
    double tau = -0.01;
    double window = 0.005;
    double dt_max = 1e-4;
    double c_cfl = 0.1;
    std::string out_dir = ".";

    std::complex<double> q() const { return {q_re, q_im}; }
    std::complex<double> nu() const { return {nu_re, nu_im}; }

    static RunConfig from_file(const std::string& path);
    static RunConfig from_kv(const std::string& text);
};

} // namespace css
