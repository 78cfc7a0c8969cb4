#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "wwl/config.hpp"
#include "wwl/io.hpp"
#include "wwl/nonlinear.hpp"
#include "wwl/spectral.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace wwl;

namespace {

void add_common_flags(CLI::App* cmd, RunConfig& cfg, std::string& config_path) {
    cmd->add_option("--config", config_path, "key=value config file");
    cmd->add_option("--eps", cfg.eps, "small parameter eps in (0,1)");
    cmd->add_option("--sigma", cfg.sigma, "surface tension coefficient (> 1/3)");
    cmd->add_option("--nx", cfg.nx, "samples along x (even, >= 16)");
    cmd->add_option("--ny", cfg.ny, "samples along y (even, >= 16)");
    cmd->add_option("--lx", cfg.lx, "half-length of the x-domain");
    cmd->add_option("--ly", cfg.ly, "half-length of the y-domain");
    cmd->add_option("--tol-outer", cfg.tol_outer, "outer fixed-point tolerance");
    cmd->add_option("--tol-inner", cfg.tol_inner, "inner (psi) tolerance");
    cmd->add_option("--tol-linear", cfg.tol_linear, "Krylov relative tolerance");
    cmd->add_option("--max-iter", cfg.max_iter, "outer iteration cap");
    cmd->add_option("--nz", cfg.oracle_nz, "Chebyshev levels of the DNO oracle");
    cmd->add_option("--dno", cfg.dno_mode, "DNO mode: exact | series")
        ->check(CLI::IsMember({"exact", "series"}));
    cmd->add_option("--out", cfg.out_dir, "output directory");
    cmd->add_option("--seed", cfg.seed, "seed for probe fields");
    cmd->add_flag("--force", cfg.force, "run solve outside the eps_max gate");
}

// Flags override file values: parse the file first, then re-apply any flag
// the user passed on the command line.
void merge_config_file(CLI::App* cmd, RunConfig& cfg, const std::string& path) {
    if (path.empty()) return;
    RunConfig from_file;
    for (const auto& [k, v] : parse_kv_file(path)) apply_kv(from_file, k, v);
    auto keep_if_set = [&](const char* flag, auto member) {
        if (cmd->count(flag) == 0) cfg.*member = from_file.*member;
    };
    keep_if_set("--eps", &RunConfig::eps);
    keep_if_set("--sigma", &RunConfig::sigma);
    keep_if_set("--nx", &RunConfig::nx);
    keep_if_set("--ny", &RunConfig::ny);
    keep_if_set("--lx", &RunConfig::lx);
    keep_if_set("--ly", &RunConfig::ly);
    keep_if_set("--tol-outer", &RunConfig::tol_outer);
    keep_if_set("--tol-inner", &RunConfig::tol_inner);
    keep_if_set("--tol-linear", &RunConfig::tol_linear);
    keep_if_set("--max-iter", &RunConfig::max_iter);
    keep_if_set("--nz", &RunConfig::oracle_nz);
    keep_if_set("--dno", &RunConfig::dno_mode);
    keep_if_set("--out", &RunConfig::out_dir);
    keep_if_set("--seed", &RunConfig::seed);
}

SolveConfig to_solve_config(const RunConfig& cfg) {
    SolveConfig sc;
    sc.tol_outer = cfg.tol_outer;
    sc.tol_inner = cfg.tol_inner;
    sc.tol_linear = cfg.tol_linear;
    sc.max_outer = cfg.max_iter;
    sc.max_linear = cfg.max_iter_linear;
    sc.dno_mode = cfg.dno_mode == "series" ? DnoMode::SeriesOnly : DnoMode::Exact;
    sc.oracle.Nz = cfg.oracle_nz;
    sc.oracle.tol = cfg.oracle_tol;
    sc.oracle.maxiter = cfg.oracle_maxiter;
    return sc;
}

json config_echo(const RunConfig& cfg) {
    return json{{"lx", cfg.lx},
                {"ly", cfg.ly},
                {"nx", cfg.nx},
                {"ny", cfg.ny},
                {"eps", cfg.eps},
                {"sigma", cfg.sigma},
                {"tol_outer", cfg.tol_outer},
                {"tol_inner", cfg.tol_inner},
                {"tol_linear", cfg.tol_linear},
                {"max_iter", cfg.max_iter},
                {"oracle_nz", cfg.oracle_nz},
                {"dno_mode", cfg.dno_mode},
                {"seed", cfg.seed}};
}

void write_json(const fs::path& path, const json& j) {
    std::ofstream os(path);
    if (!os) throw ConfigError("cannot write " + path.string());
    os << j.dump(2) << "\n";
}

int cmd_lump(const RunConfig& cfg, bool with_oracle) {
    auto grid = cfg.make_grid();
    LumpParams params(cfg.eps, cfg.sigma);
    RealField q = lump_profile(params, grid);
    LumpDerivatives d = lump_derivatives(params, grid);
    RealField res = kpi_residual(q, params);

    // interior = central half-box; the boundary ring carries the
    // periodization floor of the algebraic tails
    double interior_max = 0.0, full_max = 0.0, d2max = 0.0;
    for (int i = 0; i < grid->nx(); ++i)
        for (int j = 0; j < grid->ny(); ++j) {
            const double r = std::abs(res.at(i, j));
            full_max = std::max(full_max, r);
            d2max = std::max({d2max, std::abs(d.qxx.at(i, j)), std::abs(d.qxy.at(i, j)),
                              std::abs(d.qyy.at(i, j))});
            if (std::abs(grid->x(i)) <= grid->lx() / 2 &&
                std::abs(grid->y(j)) <= grid->ly() / 2)
                interior_max = std::max(interior_max, r);
        }

    fs::create_directories(cfg.out_dir);
    write_wwl1((fs::path(cfg.out_dir) / "q.wwl1").string(), q);
    write_wwl1((fs::path(cfg.out_dir) / "dq.wwl1").string(), d.qx);

    json rep;
    rep["config"] = config_echo(cfg);
    rep["A"] = params.A;
    rep["c"] = params.c;
    rep["extrema"] = {{"max_q", max_abs(q)},
                      {"q_at_origin_dx", d.qx.at(grid->nx() / 2, grid->ny() / 2)}};
    rep["residual"] = {{"interior_max", interior_max},
                       {"full_max", full_max},
                       {"d2q_max", d2max},
                       {"interior_rel", interior_max / d2max}};
    rep["hox_defect"] = parity_defect(q, Parity::Hox);
    if (with_oracle) {
        PetviashviliResult pv = lump_petviashvili(params, grid);
        RealField diff = pv.u - d.qx;
        rep["petviashvili"] = {{"iterations", pv.iterations},
                               {"residual", pv.residual},
                               {"gamma", pv.gamma_final},
                               {"rel_l2_vs_closed_form", l2_grid(diff) / l2_grid(d.qx)}};
    }
    write_json(fs::path(cfg.out_dir) / "lump.json", rep);
    std::cout << rep.dump(2) << "\n";
    const bool ok = interior_max <= 1e-3 * d2max;
    return ok ? 0 : 1;
}

int cmd_solve(const RunConfig& cfg) {
    if (cfg.eps > cfg.eps_max && !cfg.force)
        throw ConfigError("solve: eps exceeds the proven-regime gate eps_max = " +
                          std::to_string(cfg.eps_max) + " (pass --force to override)");
    auto grid = cfg.make_grid();
    NonlinearContext ctx(grid, to_solve_config(cfg));
    auto [state, rep] = solve_fixed_point(ctx);

    fs::create_directories(cfg.out_dir);
    write_wwl1((fs::path(cfg.out_dir) / "phi.wwl1").string(), state.phi);
    write_wwl1((fs::path(cfg.out_dir) / "psi.wwl1").string(), state.psi);
    write_wwl1((fs::path(cfg.out_dir) / "eta.wwl1").string(), state.eta);
    write_wwl1((fs::path(cfg.out_dir) / "xi.wwl1").string(), state.xi);

    json j;
    j["config"] = config_echo(cfg);
    if (cfg.eps > cfg.eps_max) j["warning"] = "outside proven regime (eps > eps_max)";
    j["converged"] = rep.converged;
    j["iterations"] = rep.iterations;
    j["update_norms"] = rep.update_norms;
    j["contraction_ratios"] = rep.contraction_ratios;
    j["inner_iterations"] = rep.inner_iterations;
    j["linear_iterations"] = rep.linear_iterations;
    j["phi_norms"] = rep.final_norms;
    j["phi_star_over_eps"] = rep.phi_star_over_eps;
    j["psi_h"] = rep.psi_h;
    j["hfrak_F5"] = rep.hfrak_F5;
    j["residuals"] = {{"r25_abs", rep.r25_abs},
                      {"r25_rel", rep.r25_rel},
                      {"r26_abs", rep.r26_abs},
                      {"r26_rel", rep.r26_rel}};
    j["theorem11"] = {{"E_eta", rep.E_eta}, {"E_xi", rep.E_xi}};
    if (!rep.diagnosis.empty()) j["diagnosis"] = rep.diagnosis;
    j["wall_s"] = rep.wall_s;
    write_json(fs::path(cfg.out_dir) / "report.json", j);
    std::cout << j.dump(2) << "\n";
    return rep.converged ? 0 : 3;
}

int cmd_verify(const RunConfig& cfg) {
    json rep;
    rep["config"] = config_echo(cfg);
    bool all_ok = true;
    auto verdict = [&](const std::string& name, bool ok, json detail) {
        detail["pass"] = ok;
        rep["checks"][name] = detail;
        all_ok = all_ok && ok;
    };

    auto grid = cfg.make_grid();

    // spectral core
    {
        RealField f = random_smooth_field(grid, Parity::None, cfg.seed);
        RealField back = inverse(transform(f));
        const double round_err = max_abs(back - f) / std::max(1e-300, max_abs(f));
        const double pg = parseval_grid(f), ps = parseval_spec(transform(f));
        const double parseval_err = std::abs(pg - ps) / pg;
        verdict("spectral_roundtrip", round_err <= 1e-13, {{"max_rel_err", round_err}});
        verdict("parseval", parseval_err <= 1e-12, {{"rel_err", parseval_err}});
    }

    // symbol suite
    {
        SymbolTable table = build_symbols(grid);
        std::vector<double> samples;
        const int n = 100000;
        for (int i = 0; i < n; ++i)
            samples.push_back(1e-6 * std::pow(50.0 / 1e-6, double(i) / (n - 1)));
        TanhBoundsReport tb = tanh_bounds_check(samples);
        verdict("tanh_bounds", tb.ok,
                {{"samples", tb.samples},
                 {"min_slack_upper", tb.min_slack_upper},
                 {"min_slack_lower", tb.min_slack_lower}});
        L2EnvelopeReport env = l2_envelope_check(table);
        verdict("l2_envelope", env.ok,
                {{"C", env.C},
                 {"c0", env.c0},
                 {"min_l2_offzero", env.min_l2_offzero},
                 {"kmax_grid", env.kmax_grid}});
        const double za = l2_smallk_series(1e-2), zb = l2_smallk_direct(1e-2);
        const double gap = std::abs(za - zb) / std::abs(zb);
        verdict("l2_smallk_branches", gap <= 1e-10, {{"rel_gap", gap}});
    }

    // lump suite (closed form + Hox class)
    {
        LumpParams params(cfg.eps, cfg.sigma);
        RealField q = lump_profile(params, grid);
        RealField res = kpi_residual(q, params);
        double interior = 0.0, d2 = max_abs(derivative(q, 0, 2));
        for (int i = 0; i < grid->nx(); ++i)
            for (int j = 0; j < grid->ny(); ++j)
                if (std::abs(grid->x(i)) <= grid->lx() / 2 &&
                    std::abs(grid->y(j)) <= grid->ly() / 2)
                    interior = std::max(interior, std::abs(res.at(i, j)));
        verdict("lump_residual", interior <= 1e-3 * d2,
                {{"interior_max", interior}, {"d2q_max", d2}});
        verdict("lump_parity", parity_defect(q, Parity::Hox) == 0.0,
                {{"defect", parity_defect(q, Parity::Hox)}});
    }

    // eigenreport of the lump Hessian
    {
        auto eggrid = Grid::create(cfg.lx, cfg.ly, std::min(cfg.nx, 128),
                                   std::min(cfg.ny, 128), cfg.eps, cfg.sigma);
        EigenReport er = eig_L(LumpParams(cfg.eps, cfg.sigma), eggrid);
        verdict("eig_lump_hessian", er.n_negative == 1 && er.lambda1 < 0.0,
                {{"lambda1", er.lambda1},
                 {"n_negative", er.n_negative},
                 {"residual", er.residual},
                 {"eigenvalues", er.eigenvalues}});
    }

    fs::create_directories(cfg.out_dir);
    write_json(fs::path(cfg.out_dir) / "report.json", rep);
    std::cout << rep.dump(2) << "\n";
    return all_ok ? 0 : 1;
}

int cmd_dno_check(const RunConfig& cfg, const std::string& symbols_csv) {
    auto grid = cfg.make_grid();
    if (!symbols_csv.empty()) {
        SymbolTable t = build_symbols(grid);
        std::ofstream os(symbols_csv);
        os << "m1,m2,sigma_L1,sigma_L2\n";
        for (int i = 0; i < grid->nx(); ++i)
            for (int j = 0; j < grid->ny(); ++j) {
                const auto id = grid->idx(i, j);
                os << grid->m1(i) << "," << grid->m2(j) << "," << t.l1[id] << ","
                   << t.l2[id] << "\n";
            }
    }

    OracleConfig ocfg;
    ocfg.Nz = cfg.oracle_nz;
    ocfg.tol = cfg.oracle_tol;
    ocfg.maxiter = cfg.oracle_maxiter;
    DnoOracle oracle(grid, ocfg);

    json rep;
    rep["config"] = config_echo(cfg);
    bool ok = true;

    // flat case
    RealField xi = random_smooth_field(grid, Parity::Hox, cfg.seed);
    {
        RealField flat = oracle.apply(SurfaceState{RealField(grid, Parity::He), xi});
        const double err = max_abs(flat - g0_apply(xi)) / std::max(1e-300, max_abs(g0_apply(xi)));
        rep["flat_rel_err"] = err;
        ok = ok && err <= 1e-10;
    }

    // constant-eta strip symbol
    {
        const double eta0 = 0.05;
        RealField eta(grid, Parity::He);
        for (double& v : eta.v) v = eta0;
        RealField got = oracle.apply(SurfaceState{eta, xi});
        SpectralField xhat = transform(xi);
        for (int i = 0; i < grid->nx(); ++i)
            for (int j = 0; j < grid->ny(); ++j) {
                const double k = grid->kmag(i, j);
                xhat.at(i, j) *= k * std::tanh((1.0 + eta0) * k);
            }
        RealField want = inverse(xhat, xi.parity);
        const double err = l2_grid(got - want) / std::max(1e-300, l2_grid(want));
        rep["strip_rel_err"] = err;
        ok = ok && err <= 1e-8;
    }

    // remainder scaling orders under eta -> eta/2
    {
        RealField eta = 0.05 * random_smooth_field(grid, Parity::He, cfg.seed + 1);
        eta.parity = Parity::He;
        RealField eta_half = 0.5 * eta;
        DnoRemainders r_full = remainders(SurfaceState{eta, xi}, oracle);
        DnoRemainders r_half = remainders(SurfaceState{eta_half, xi}, oracle);
        const double ratio2 = l2_grid(r_full.r2) / l2_grid(r_half.r2);
        const double ratio3 = l2_grid(r_full.r3) / l2_grid(r_half.r3);
        rep["r2_halving_ratio"] = ratio2;
        rep["r3_halving_ratio"] = ratio3;
        rep["r2_order"] = std::log2(ratio2);
        rep["r3_order"] = std::log2(ratio3);
        ok = ok && ratio2 >= 3.2 && ratio2 <= 4.8 && ratio3 >= 6.0 && ratio3 <= 10.0;
    }

    fs::create_directories(cfg.out_dir);
    write_json(fs::path(cfg.out_dir) / "dno_check.json", rep);
    std::cout << rep.dump(2) << "\n";
    return ok ? 0 : 1;
}

int cmd_sweep(const RunConfig& cfg, const std::string& eps_list) {
    std::vector<double> eps_values;
    std::stringstream ss(eps_list);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        eps_values.push_back(std::stod(tok));
    }
    if (eps_values.empty()) throw ConfigError("sweep: --eps-list is empty");
    for (double e : eps_values)
        if (!(e > 0.0) || !(e < 1.0)) throw ConfigError("sweep: eps values must lie in (0,1)");

    Theorem11Table table = theorem11_check(eps_values, to_solve_config(cfg), cfg.lx,
                                           cfg.ly, cfg.nx, cfg.ny, cfg.sigma);
    fs::create_directories(cfg.out_dir);
    std::ofstream os(fs::path(cfg.out_dir) / "sweep.csv");
    os << "eps,iters,contraction,E_eta,E_xi,r25,r26,wall_s\n";
    os.precision(12);
    for (const auto& r : table.rows)
        os << r.eps << "," << r.iterations << "," << r.contraction << "," << r.E_eta
           << "," << r.E_xi << "," << r.r25_rel << "," << r.r26_rel << "," << r.wall_s
           << "\n";
    json j;
    j["order_eta"] = table.order_eta;
    j["order_xi"] = table.order_xi;
    j["identity_gap"] = table.identity_gap;
    std::cout << j.dump(2) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"wwlump: fully localized gravity-capillary waves from KP-I lumps"};
    app.require_subcommand(1);

    RunConfig cfg;
    std::string config_path;
    bool lump_oracle = false;
    std::string symbols_csv;
    std::string eps_list = "0.2,0.1,0.05";

    CLI::App* lump = app.add_subcommand("lump", "closed-form lump fields + residual summary");
    add_common_flags(lump, cfg, config_path);
    lump->add_flag("--oracle", lump_oracle, "also run the Petviashvili cross-check");

    CLI::App* solve = app.add_subcommand("solve", "two-level fixed point for one (eps, sigma)");
    add_common_flags(solve, cfg, config_path);

    CLI::App* verify = app.add_subcommand("verify", "invariant suites + eigenreport");
    add_common_flags(verify, cfg, config_path);

    CLI::App* dno = app.add_subcommand("dno-check", "DNO constant-eta and scaling suites");
    add_common_flags(dno, cfg, config_path);
    dno->add_option("--symbols-csv", symbols_csv, "also dump (m1,m2,sigma_L1,sigma_L2)");

    CLI::App* sweep = app.add_subcommand("sweep", "eps sweep with scaling table");
    add_common_flags(sweep, cfg, config_path);
    sweep->add_option("--eps-list", eps_list, "comma-separated eps values");

    CLI11_PARSE(app, argc, argv);

    try {
        CLI::App* sub = app.get_subcommands().front();
        merge_config_file(sub, cfg, config_path);
        cfg.validate();
        if (sub == lump) return cmd_lump(cfg, lump_oracle);
        if (sub == solve) return cmd_solve(cfg);
        if (sub == verify) return cmd_verify(cfg);
        if (sub == dno) return cmd_dno_check(cfg, symbols_csv);
        if (sub == sweep) return cmd_sweep(cfg, eps_list);
    } catch (const ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 2;
    } catch (const IterationFailure& e) {
        std::cerr << "iteration failure: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
