#include "css/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace css {

std::string fmt_g17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

void write_text_atomic(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary);
        if (!os) throw std::runtime_error("cannot open " + tmp);
        os << content;
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw std::runtime_error("cannot move " + tmp + " to " + path);
}

void write_field_csv(const std::string& path, const ComplexField& f) {
    std::ostringstream os;
    os << "# m=" << f.m << " n=" << f.n() << " r_max=" << fmt_g17(f.grid->r_max) << "\n";
    for (std::size_t j = 0; j < f.n(); ++j) {
        os << fmt_g17(f.grid->r[j]) << ',' << fmt_g17(f.v[j].real()) << ','
           << fmt_g17(f.v[j].imag()) << "\n";
    }
    write_text_atomic(path, os.str());
}

ComplexField read_field_csv(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open " + path);
    std::string line;
    if (!std::getline(is, line) || line.rfind("# m=", 0) != 0)
        throw std::runtime_error("field CSV missing header: " + path);
    int m = 0;
    std::size_t n = 0;
    double r_max = 0;
    if (std::sscanf(line.c_str(), "# m=%d n=%zu r_max=%lf", &m, &n, &r_max) != 3)
        throw std::runtime_error("bad field CSV header: " + line);
    std::vector<double> r;
    std::vector<Cplx> v;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        double rr, re, im;
        if (std::sscanf(line.c_str(), "%lf,%lf,%lf", &rr, &re, &im) != 3)
            throw std::runtime_error("bad field CSV row: " + line);
        r.push_back(rr);
        v.push_back(Cplx(re, im));
    }
    if (r.size() != n) throw std::runtime_error("field CSV row count mismatch");
    auto g = std::make_shared<RadialGrid>();
    g->r = r;
    g->r_max = r_max;
    // classify spacing
    const double d0 = r[1] - r[0], d1 = r.back() - r[r.size() - 2];
    g->kind = (std::abs(d1 - d0) < 1e-9 * d1) ? GridKind::Uniform : GridKind::LogUniform;
    g->w.resize(n);
    g->w[0] = 0.5 * (r[1] - r[0]);
    for (std::size_t j = 1; j + 1 < n; ++j) g->w[j] = 0.5 * (r[j + 1] - r[j - 1]);
    g->w[n - 1] = 0.5 * (r[n - 1] - r[n - 2]);
    return ComplexField(GridPtr(g), m, std::move(v));
}

} // namespace css
