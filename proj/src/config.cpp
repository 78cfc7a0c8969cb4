#include "wwl/config.hpp"

#include <fstream>
#include <sstream>

namespace wwl {

GridPtr RunConfig::make_grid() const {
    validate();
    return Grid::create(lx, ly, nx, ny, eps, sigma);
}

void RunConfig::validate() const {
    if (!(eps > 0.0) || !(eps < 1.0)) throw ConfigError("config: eps must lie in (0, 1)");
    if (!(sigma > 1.0 / 3.0)) throw ConfigError("config: sigma must exceed 1/3");
    if (nx < 16 || ny < 16 || nx % 2 || ny % 2)
        throw ConfigError("config: nx, ny must be even and >= 16");
    if (!(lx > 0.0) || !(ly > 0.0)) throw ConfigError("config: lx, ly must be positive");
    if (!(tol_outer > 0.0) || !(tol_inner > 0.0) || !(tol_linear > 0.0))
        throw ConfigError("config: tolerances must be positive");
    if (max_iter < 1 || max_iter_linear < 1 || oracle_maxiter < 1)
        throw ConfigError("config: iteration caps must be positive");
    if (oracle_nz < 8) throw ConfigError("config: oracle_nz must be >= 8");
    if (dno_mode != "exact" && dno_mode != "series")
        throw ConfigError("config: dno_mode must be 'exact' or 'series'");
}

std::map<std::string, std::string> parse_kv_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("config: cannot open " + path);
    std::map<std::string, std::string> kv;
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::string trimmed;
        for (char ch : line)
            if (!std::isspace(static_cast<unsigned char>(ch))) trimmed += ch;
        if (trimmed.empty()) continue;
        const auto eq = trimmed.find('=');
        if (eq == std::string::npos || eq == 0)
            throw ConfigError("config: malformed line " + std::to_string(lineno) + " in " + path);
        kv[trimmed.substr(0, eq)] = trimmed.substr(eq + 1);
    }
    return kv;
}

namespace {
double to_double(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        double x = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ConfigError("config: bad numeric value for " + key + ": " + v);
    }
}

int to_int(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        int x = std::stoi(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ConfigError("config: bad integer value for " + key + ": " + v);
    }
}
}  // namespace

void apply_kv(RunConfig& cfg, const std::string& key, const std::string& value) {
    if (key == "lx") cfg.lx = to_double(key, value);
    else if (key == "ly") cfg.ly = to_double(key, value);
    else if (key == "nx") cfg.nx = to_int(key, value);
    else if (key == "ny") cfg.ny = to_int(key, value);
    else if (key == "eps") cfg.eps = to_double(key, value);
    else if (key == "sigma") cfg.sigma = to_double(key, value);
    else if (key == "tol_outer") cfg.tol_outer = to_double(key, value);
    else if (key == "tol_inner") cfg.tol_inner = to_double(key, value);
    else if (key == "tol_linear") cfg.tol_linear = to_double(key, value);
    else if (key == "max_iter") cfg.max_iter = to_int(key, value);
    else if (key == "max_iter_linear") cfg.max_iter_linear = to_int(key, value);
    else if (key == "oracle_nz") cfg.oracle_nz = to_int(key, value);
    else if (key == "oracle_tol") cfg.oracle_tol = to_double(key, value);
    else if (key == "oracle_maxiter") cfg.oracle_maxiter = to_int(key, value);
    else if (key == "dno_mode") cfg.dno_mode = value;
    else if (key == "out_dir") cfg.out_dir = value;
    else if (key == "seed") cfg.seed = static_cast<std::uint64_t>(to_int(key, value));
    else if (key == "eps_max") cfg.eps_max = to_double(key, value);
    else throw ConfigError("config: unknown key: " + key);
}

}  // namespace wwl
