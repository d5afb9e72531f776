#pragma once

#include <string>
#include <vector>

#include "css/config.hpp"

#include "json.hpp"

namespace css {

using Json = nlohmann::ordered_json;

// Subcommand drivers. Each returns the machine-readable summary (schema: 1,
// with a "pass" flag over the checks it covers) and, when out_dir is
// nonempty, writes its CSV data files there.
Json run_soliton_check(const RunConfig& cfg, const std::string& out_dir);
Json run_specfun_check(const RunConfig& cfg, const std::string& out_dir);
Json run_radiation_build(const RunConfig& cfg, const std::string& out_dir,
                         const std::vector<double>& t_ladder);
Json run_mod_ode(const RunConfig& cfg, const std::string& out_dir);
Json run_decompose(const RunConfig& cfg, const std::string& out_dir);
Json run_evolve(const RunConfig& cfg, const std::string& out_dir);
Json run_blowup_verify(const RunConfig& cfg, const std::string& out_dir, int n_monitor = 64);
Json run_transform(const RunConfig& cfg, const std::string& out_dir);

} // namespace css
