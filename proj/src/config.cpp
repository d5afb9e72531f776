#include "css/config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace css {

static void apply_kv(RunConfig& c, const std::string& key, const std::string& val) {
    auto as_double = [&]() { return std::stod(val); };
    auto as_size = [&]() { return std::stoul(val); };
    if (key == "grid.n") c.grid_n = as_size();
    else if (key == "grid.r_max") c.grid_r_max = as_double();
    else if (key == "grid.kind") {
        if (val != "log" && val != "uniform")
            throw std::invalid_argument("grid.kind must be log or uniform");
        c.grid_kind = val;
    }
    else if (key == "spec.q_re") c.q_re = as_double();
    else if (key == "spec.q_im") c.q_im = as_double();
    else if (key == "spec.nu_re") c.nu_re = as_double();
    else if (key == "spec.nu_im") c.nu_im = as_double();
    else if (key == "time.tau") c.tau = as_double();
    else if (key == "time.window") c.window = as_double();
    else if (key == "solver.dt_max") c.dt_max = as_double();
    else if (key == "solver.c_cfl") c.c_cfl = as_double();
    else if (key == "out.dir") c.out_dir = val;
    else throw std::invalid_argument("unknown config key: " + key);
}

RunConfig RunConfig::from_kv(const std::string& text) {
    RunConfig c;
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        // trim
        const auto b = line.find_first_not_of(" \t\r");
        if (b == std::string::npos) continue;
        const auto e = line.find_last_not_of(" \t\r");
        line = line.substr(b, e - b + 1);
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line missing '=': " + line);
        std::string key = line.substr(0, eq);
        std::string val = line.substr(eq + 1);
        const auto ke = key.find_last_not_of(" \t");
        key = key.substr(0, ke + 1);
        const auto vb = val.find_first_not_of(" \t");
        val = (vb == std::string::npos) ? "" : val.substr(vb);
        apply_kv(c, key, val);
    }
    return c;
}

RunConfig RunConfig::from_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::invalid_argument("cannot open config file: " + path);
    std::stringstream ss;
    ss << is.rdbuf();
    return from_kv(ss.str());
}

} // namespace css
