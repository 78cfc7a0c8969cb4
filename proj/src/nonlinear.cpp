#include "wwl/nonlinear.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <thread>

#include "wwl/spectral.hpp"

namespace wwl {

namespace {
// -P g = (d1^2 + eps^2 d2^2) g; P is the positive Laplacian-type operator.
RealField apply_P(const RealField& g) {
    const double e2 = g.grid->eps() * g.grid->eps();
    RealField r = (-1.0) * derivative(g, 0, 2);
    r -= e2 * derivative(g, 1, 2);
    r.parity = g.parity;
    return r;
}

RealField apply_Q(const RealField& g) {
    const double e2 = g.grid->eps() * g.grid->eps();
    RealField r = g + (e2 / 3.0) * apply_P(g);
    r.parity = g.parity;
    return r;
}

RealField lap_eps(const RealField& g) {  // (d1^2 + eps^2 d2^2) g = -P g
    return (-1.0) * apply_P(g);
}
}  // namespace

NonlinearContext::NonlinearContext(GridPtr grid_, SolveConfig cfg_)
    : grid(std::move(grid_)),
      symbols(build_symbols(grid)),
      params(grid->eps(), grid->sigma()),
      q(lump_profile(params, grid)),
      q1(lump_derivatives(params, grid).qx),
      kpres(kpi_residual(q, params)),
      lin(symbols, q1, cfg_.tol_linear, cfg_.max_linear),
      oracle(grid, cfg_.oracle),
      cfg(cfg_) {}

RealField helmholtz_solve(const NonlinearContext& ctx, const RealField& hfrak) {
    std::vector<double> inv(ctx.symbols.helm.size());
    for (std::size_t i = 0; i < inv.size(); ++i) inv[i] = 1.0 / ctx.symbols.helm[i];
    RealField psi = apply_multiplier(hfrak, inv);
    psi.parity = hfrak.parity;
    return psi;
}

RealField compute_Pi(const NonlinearContext& ctx, const RealField& h, const RealField& f) {
    const GridPtr& g = ctx.grid;
    const double eps = g->eps(), sigma = g->sigma(), c = ctx.params.c;
    const double e2 = eps * eps;
    const double e4 = e2 * e2, e6 = e4 * e2;

    RealField fx = derivative(f, 0, 1), fy = derivative(f, 1, 1);
    RealField hx = derivative(h, 0, 1), hy = derivative(h, 1, 1);

    // -(1/2) (d2 f)^2
    RealField pi = (-0.5) * prod(fy, fy);

    // kinematic term with the (2-5) substitution for the DNO trace
    RealField W = (-c) * hx + e2 * (prod(hx, fx) + e2 * prod(hy, fy));
    RealField W2 = prod(W, W);
    RealField U = prod(hx, hx) + e2 * prod(hy, hy);  // |grad_eps h|^2
    for (std::size_t i = 0; i < pi.v.size(); ++i)
        pi.v[i] += W2.v[i] / (2.0 * (1.0 + e6 * U.v[i]));

    // regularized surface-tension divergence:
    //   sigma eps^4 grad_eps . [ -U grad_eps h / (sqrt(1+eps^6 U)(1+sqrt(1+eps^6 U))) ]
    RealField Vx = prod(U, hx), Vy = prod(U, hy);
    for (std::size_t i = 0; i < Vx.v.size(); ++i) {
        const double root = std::sqrt(1.0 + e6 * U.v[i]);
        const double den = root * (1.0 + root);
        Vx.v[i] /= den;
        Vy.v[i] /= den;
    }
    RealField div = derivative(Vx, 0, 1) + e2 * derivative(Vy, 1, 1);
    pi -= sigma * e4 * div;
    return project_parity(pi, Parity::He);
}

RealField pi_unscaled_reference(const NonlinearContext& ctx, const RealField& h,
                                const RealField& f) {
    const GridPtr& g = ctx.grid;
    const double eps = g->eps(), sigma = g->sigma(), c = ctx.params.c;
    const double e2 = eps * eps, e3 = e2 * eps;
    const double e6 = e3 * e3;

    // Unscaled ingredients as grid data: eta = e2 h, xi = eps f; d_x1 = eps d1,
    // d_x2 = eps^2 d2. The DNO trace G(eta)xi is replaced by the kinematic
    // value -c e3 d1 h, the same substitution compute_Pi makes.
    RealField ex1 = e3 * derivative(h, 0, 1);          // d_x1 eta
    RealField ex2 = e2 * e2 * derivative(h, 1, 1);     // d_x2 eta
    RealField xx1 = e2 * derivative(f, 0, 1);          // d_x1 xi
    RealField xx2 = e3 * derivative(f, 1, 1);          // d_x2 xi
    RealField Gtrace = (-c * e3) * derivative(h, 0, 1);

    RealField grad_eta2 = prod(ex1, ex1) + prod(ex2, ex2);
    RealField grad_xi2 = prod(xx1, xx1) + prod(xx2, xx2);
    RealField X = Gtrace + prod(ex1, xx1) + prod(ex2, xx2);
    RealField X2 = prod(X, X);

    RealField out = 0.5 * prod(xx1, xx1);
    for (std::size_t i = 0; i < out.v.size(); ++i) {
        const double bracket = X2.v[i] - grad_xi2.v[i] * grad_eta2.v[i] - grad_xi2.v[i];
        out.v[i] += bracket / (2.0 * (1.0 + grad_eta2.v[i]));
    }

    // sigma (div[grad eta / sqrt(1+|grad eta|^2)] - Lap eta), naive algebra.
    RealField Wx = ex1, Wy = ex2;
    for (std::size_t i = 0; i < Wx.v.size(); ++i) {
        const double root = std::sqrt(1.0 + grad_eta2.v[i]);
        Wx.v[i] = ex1.v[i] / root - ex1.v[i];
        Wy.v[i] = ex2.v[i] / root - ex2.v[i];
    }
    RealField div = eps * derivative(Wx, 0, 1) + e2 * derivative(Wy, 1, 1);
    out += sigma * div;
    out *= 1.0 / e6;
    return project_parity(out, Parity::He);
}

RealField compute_hfrak(const NonlinearContext& ctx, const RealField& phi,
                        const RealField& psi) {
    const GridPtr& g = ctx.grid;
    const double eps = g->eps(), sigma = g->sigma(), c = ctx.params.c;
    const double e2 = eps * eps;

    RealField f = ctx.q + phi;
    f.parity = Parity::Hox;
    RealField h = ctx.q1 + psi;
    h *= c;
    h.parity = Parity::He;

    RealField fx = derivative(f, 0, 1);
    RealField hf = derivative(phi, 0, 1);
    hf += sigma * e2 * lap_eps(ctx.q1);
    hf -= (e2 / (2.0 * c)) * prod(fx, fx);
    hf += (e2 * e2 / c) * compute_Pi(ctx, h, f);
    return project_parity(hf, Parity::He);
}

RealField solve_psi(const NonlinearContext& ctx, const RealField& phi,
                    const RealField* psi0, InnerSolveInfo* info) {
    if (phi.parity != Parity::Hox)
        throw PreconditionError("solve_psi: phi must carry Hox parity");
    RealField psi = psi0 ? *psi0 : RealField(ctx.grid, Parity::He);
    InnerSolveInfo local;
    InnerSolveInfo& inf = info ? *info : local;
    double prev_update = 0.0;
    for (int it = 0; it < ctx.cfg.max_inner; ++it) {
        RealField next = helmholtz_solve(ctx, compute_hfrak(ctx, phi, psi));
        next = project_parity(next, Parity::He);
        const double update = norm(next - psi, NormTag::H);
        inf.iterations = it + 1;
        inf.last_ratio = prev_update > 0.0 ? update / prev_update : 0.0;
        inf.last_update = update;
        prev_update = update;
        psi = next;
        if (update <= ctx.cfg.tol_inner) return psi;
    }
    throw IterationFailure("solve_psi: inner fixed point did not reach tol (last update " +
                           std::to_string(inf.last_update) + ", ratio " +
                           std::to_string(inf.last_ratio) + ")");
}

SolutionState make_state(const NonlinearContext& ctx, const RealField& phi,
                         const RealField& psi, int iteration) {
    SolutionState s;
    s.phi = phi;
    s.psi = psi;
    s.f = ctx.q + phi;
    s.f.parity = Parity::Hox;
    s.h = ctx.q1 + psi;
    s.h *= ctx.params.c;
    s.h.parity = Parity::He;
    const double eps = ctx.grid->eps();
    s.eta = eps * eps * s.h;
    s.xi = eps * s.f;
    s.iteration = iteration;
    return s;
}

PerturbationTerms assemble_P(const NonlinearContext& ctx, const SolutionState& state) {
    const GridPtr& g = ctx.grid;
    const double eps = g->eps(), sigma = g->sigma(), c = ctx.params.c;
    const double e2 = eps * eps, e4 = e2 * e2;
    const double c2 = c * c;
    const double third_sigma = 1.0 / 3.0 + sigma;

    const RealField& f = state.f;
    const RealField& h = state.h;
    RealField fx = derivative(f, 0, 1), fy = derivative(f, 1, 1);
    RealField Sq = prod(fx, fx);
    RealField Pi = compute_Pi(ctx, h, f);
    RealField Ph = apply_P(h);

    PerturbationTerms out;

    // P1
    {
        RealField t = (-e2 / c) * derivative(apply_Q(Pi), 0, 1);
        t -= (e2 / (2.0 * c2)) * derivative(prod(Sq, fx), 0, 1);
        t -= (sigma * e2 / c2) * derivative(prod(fx, Ph), 0, 1);
        t += (e4 / c2) * derivative(prod(fx, Pi), 0, 1);
        t += (e2 / (6.0 * c)) * apply_P(derivative(Sq, 0, 1));
        t += (e2 / c2) * third_sigma * apply_P(derivative(prod(h, fx), 0, 1));
        out.P1 = project_parity(t, Parity::Hox);
    }

    // P2
    {
        RealField hfy = prod(h, fy);
        RealField t = (e2 / c2) * derivative(hfy, 1, 1);
        t += (e4 / c2) * third_sigma * apply_P(derivative(hfy, 1, 1));
        out.P2 = project_parity(t, Parity::Hox);
    }

    // P3: remainder ladder of the DNO with surface data eps^2 h applied to f.
    {
        SurfaceState surf{state.eta, f};
        DnoRemainders rem = remainders(surf, ctx.oracle, ctx.cfg.dno_mode);
        RealField G2f = g2_apply(state.eta, f);
        RealField t = (-1.0 / (c2 * e4)) * (G2f + rem.r3);
        t -= (third_sigma / (c2 * e2)) * (apply_P(G2f) + apply_P(rem.r3));
        t -= (sigma / (3.0 * c2)) * apply_P(apply_P(rem.r1));
        out.P3 = project_parity(t, Parity::Hox);
    }

    // P4
    {
        RealField G0f = g0_apply(f);
        RealField T = g0_apply(prod(h, G0f));
        RealField t = (1.0 / (c2 * e2)) * T;
        t += (third_sigma / c2) * apply_P(T);
        out.P4 = project_parity(t, Parity::Hox);
    }
    return out;
}

RealField rhs_57(const NonlinearContext& ctx, const SolutionState& state) {
    const GridPtr& g = ctx.grid;
    const double eps = g->eps(), sigma = g->sigma(), c = ctx.params.c;
    const double e2 = eps * eps, e4 = e2 * e2;
    const double A = ctx.params.A;

    PerturbationTerms P = assemble_P(ctx, state);

    RealField phix = derivative(state.phi, 0, 1);
    RealField rhs = P.P1 + P.P2 + P.P3 + P.P4;
    rhs += (1.5 / c) * derivative(prod(phix, phix), 0, 1);
    rhs -= (2.0 * A + 1.0 / 3.0) * e2 * derivative(derivative(ctx.q, 0, 2), 1, 2);
    rhs -= sigma * (1.0 + e2) * e4 * derivative(ctx.q, 1, 4);
    rhs -= apply_multiplier(ctx.q, ctx.symbols.l2);
    if (ctx.cfg.compensate_lump_residual) rhs -= ctx.kpres;
    return project_parity(rhs, Parity::Hox);
}

SolutionState picard_step(const NonlinearContext& ctx, const SolutionState& state,
                          RunReport* report) {
    RealField rhs = rhs_57(ctx, state);
    LinearSolveInfo lininfo;
    RealField phi_new = solve_Leps(ctx.lin, rhs, &lininfo);
    InnerSolveInfo psinfo;
    RealField psi_new = solve_psi(ctx, phi_new, &state.psi, &psinfo);
    if (report) {
        report->linear_iterations.push_back(lininfo.iterations);
        report->inner_iterations.push_back(psinfo.iterations);
    }
    return make_state(ctx, phi_new, psi_new, state.iteration + 1);
}

std::pair<SolutionState, RunReport> solve_fixed_point(const NonlinearContext& ctx) {
    const auto t0 = std::chrono::steady_clock::now();
    RunReport rep;
    RealField phi0(ctx.grid, Parity::Hox);
    InnerSolveInfo psinfo;
    RealField psi0 = solve_psi(ctx, phi0, nullptr, &psinfo);
    SolutionState state = make_state(ctx, phi0, psi0, 0);

    double prev_update = 0.0;
    for (int it = 0; it < ctx.cfg.max_outer; ++it) {
        SolutionState next = picard_step(ctx, state, &rep);
        const double update = norm(next.phi - state.phi, NormTag::Star);
        rep.update_norms.push_back(update);
        if (prev_update > 0.0) rep.contraction_ratios.push_back(update / prev_update);
        prev_update = update;
        state = next;
        rep.iterations = it + 1;
        if (update <= ctx.cfg.tol_outer) {
            rep.converged = true;
            break;
        }
    }
    if (!rep.converged) {
        rep.diagnosis = "outer fixed point did not reach tol_outer within max_outer";
    }

    const double eps = ctx.grid->eps();
    rep.phi_star = norm(state.phi, NormTag::Star);
    rep.phi_star_over_eps = rep.phi_star / eps;
    rep.psi_h = norm(state.psi, NormTag::H);
    rep.hfrak_F5 = norm(compute_hfrak(ctx, state.phi, state.psi), NormTag::F5);
    for (NormTag t : {NormTag::A, NormTag::B, NormTag::C, NormTag::Star,
                      NormTag::StarStar, NormTag::StarStarStar})
        rep.final_norms[norm_tag_name(t)] = norm(state.phi, t);

    Residual2526 res = residual_25_26(ctx, state);
    rep.r25_abs = res.r25_abs;
    rep.r25_rel = res.r25_rel;
    rep.r26_abs = res.r26_abs;
    rep.r26_rel = res.r26_rel;
    rep.E_eta = max_abs(state.h - ctx.q1);
    rep.E_xi = max_abs(state.phi);
    rep.wall_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return {state, rep};
}

Residual2526 residual_25_26(const NonlinearContext& ctx, const SolutionState& state) {
    const GridPtr& g = ctx.grid;
    const double eps = g->eps(), sigma = g->sigma(), c = ctx.params.c;
    const double e2 = eps * eps;

    Residual2526 out;
    // (2-5): -c d1 h = eps^-2 G(eps^2 h) f, with the oracle trace.
    RealField dno = ctx.oracle.apply(SurfaceState{state.eta, state.f});
    RealField lhs25 = c * derivative(state.h, 0, 1);
    out.r25 = lhs25 + (1.0 / e2) * dno;
    out.r25_abs = l2_grid(out.r25);
    out.r25_rel = out.r25_abs / std::max({l2_grid(lhs25), l2_grid((1.0 / e2) * dno), 1e-300});

    // (2-6): -c d1 f = -h - (eps^2/2)(d1 f)^2 + sigma eps^2 (d1^2+eps^2 d2^2) h + eps^4 Pi.
    RealField fx = derivative(state.f, 0, 1);
    RealField rhs26 = (-1.0) * state.h;
    rhs26 -= (e2 / 2.0) * prod(fx, fx);
    rhs26 += sigma * e2 * lap_eps(state.h);
    rhs26 += e2 * e2 * compute_Pi(ctx, state.h, state.f);
    out.r26 = (-c) * fx - rhs26;
    out.r26_abs = l2_grid(out.r26);
    out.r26_rel = out.r26_abs / std::max({l2_grid(state.h), c * l2_grid(fx), 1e-300});
    return out;
}

int worker_count(int njobs) {
    int cap = static_cast<int>(std::thread::hardware_concurrency());
    if (cap < 1) cap = 1;
    if (const char* env = std::getenv("WWLUMP_THREADS")) {
        try {
            cap = std::max(1, std::min(cap, std::stoi(env)));
        } catch (const std::exception&) {
            throw ConfigError("WWLUMP_THREADS must be an integer");
        }
    }
    return std::max(1, std::min(cap, njobs));
}

void run_parallel(std::vector<std::function<void()>> jobs) {
    const int workers = worker_count(static_cast<int>(jobs.size()));
    if (workers <= 1) {
        for (auto& j : jobs) j();
        return;
    }
    std::vector<std::exception_ptr> errors(jobs.size());
    std::vector<std::thread> pool;
    std::size_t next = 0;
    std::mutex mtx;
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&]() {
            for (;;) {
                std::size_t mine;
                {
                    std::lock_guard<std::mutex> lock(mtx);
                    if (next >= jobs.size()) return;
                    mine = next++;
                }
                try {
                    jobs[mine]();
                } catch (...) {
                    errors[mine] = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

Theorem11Table theorem11_check(const std::vector<double>& eps_values,
                               const SolveConfig& cfg, double lx, double ly, int nx,
                               int ny, double sigma) {
    Theorem11Table table;
    table.rows.resize(eps_values.size());
    std::vector<double> identity_gaps(eps_values.size(), 0.0);
    std::vector<std::function<void()>> jobs;
    for (std::size_t i = 0; i < eps_values.size(); ++i) {
        jobs.push_back([&, i]() {
            const double eps = eps_values[i];
            NonlinearContext ctx(Grid::create(lx, ly, nx, ny, eps, sigma), cfg);
            auto [state, rep] = solve_fixed_point(ctx);
            if (!rep.converged)
                throw IterationFailure("theorem11_check: eps = " + std::to_string(eps) +
                                       " did not converge");
            Theorem11Row row;
            row.eps = eps;
            row.iterations = rep.iterations;
            row.contraction =
                rep.contraction_ratios.empty() ? 0.0 : rep.contraction_ratios.front();
            row.E_eta = rep.E_eta;
            row.E_xi = rep.E_xi;
            row.r25_rel = rep.r25_rel;
            row.r26_rel = rep.r26_rel;
            row.phi_star_over_eps = rep.phi_star_over_eps;
            row.wall_s = rep.wall_s;
            table.rows[i] = row;
            // ansatz identity h/c - d1 q = psi, two computation paths
            RealField gap = (1.0 / ctx.params.c) * state.h - ctx.q1 - state.psi;
            identity_gaps[i] = max_abs(gap);
        });
    }
    run_parallel(std::move(jobs));

    // least-squares slope of log E vs log eps
    auto fit_order = [&](auto getter) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        const double n = static_cast<double>(table.rows.size());
        for (const auto& r : table.rows) {
            const double X = std::log(r.eps), Y = std::log(std::max(getter(r), 1e-300));
            sx += X;
            sy += Y;
            sxx += X * X;
            sxy += X * Y;
        }
        return (n * sxy - sx * sy) / (n * sxx - sx * sx);
    };
    table.order_eta = fit_order([](const Theorem11Row& r) { return r.E_eta; });
    table.order_xi = fit_order([](const Theorem11Row& r) { return r.E_xi; });
    for (double gap : identity_gaps) table.identity_gap = std::max(table.identity_gap, gap);
    return table;
}

double contraction_probe(const NonlinearContext& ctx, int npairs, double amplitude,
                         std::uint64_t seed) {
    const double eps = ctx.grid->eps();
    auto apply_N = [&](const RealField& phi) {
        RealField psi = solve_psi(ctx, phi);
        SolutionState st = make_state(ctx, phi, psi);
        return solve_Leps(ctx.lin, rhs_57(ctx, st));
    };
    double kappa = 0.0;
    for (int p = 0; p < npairs; ++p) {
        RealField base = random_smooth_field(ctx.grid, Parity::Hox, seed + 2 * p);
        RealField pert = random_smooth_field(ctx.grid, Parity::Hox, seed + 2 * p + 1);
        base *= amplitude * eps;
        pert *= 0.1 * amplitude * eps;
        RealField phi1 = base;
        RealField phi2 = base + pert;
        phi2.parity = Parity::Hox;
        RealField d = apply_N(phi1) - apply_N(phi2);
        kappa = std::max(kappa, norm(d, NormTag::Star) / norm(phi1 - phi2, NormTag::Star));
    }
    return kappa;
}

}  // namespace wwl
