#pragma once

#include <map>
#include <optional>
#include <string>

#include "wwl/grid.hpp"

namespace wwl {

/// Run configuration shared by every CLI workflow. Parsed from an optional
/// key=value file with flag overrides; every module precondition is checked
/// here before any compute starts.
struct RunConfig {
    double lx = 60.0;
    double ly = 60.0;
    int nx = 256;
    int ny = 256;
    double eps = 0.1;
    double sigma = 1.0;
    double tol_outer = 1e-9;
    double tol_inner = 1e-11;
    double tol_linear = 1e-10;
    int max_iter = 50;
    int max_iter_linear = 600;
    int oracle_nz = 16;
    double oracle_tol = 1e-11;
    int oracle_maxiter = 200;
    std::string dno_mode = "exact";  // exact | series
    std::string out_dir = ".";
    std::uint64_t seed = 20250810;
    double eps_max = 0.3;  // proven-regime gate for solve; --force overrides
    bool force = false;

    GridPtr make_grid() const;
    void validate() const;
};

/// Parses a key=value file (comments with '#', blank lines fine); unknown
/// keys are rejected. Returned map feeds apply_kv.
std::map<std::string, std::string> parse_kv_file(const std::string& path);

/// Applies one key/value pair; throws ConfigError on unknown key or bad value.
void apply_kv(RunConfig& cfg, const std::string& key, const std::string& value);

}  // namespace wwl
