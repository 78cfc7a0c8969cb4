#include "wwl/dno.hpp"

#include <Eigen/Dense>

#include <cmath>

#include "wwl/spectral.hpp"

namespace wwl {

namespace {
std::vector<double> g0_symbol(const GridPtr& g) {
    std::vector<double> s(g->size());
    for (int i = 0; i < g->nx(); ++i)
        for (int j = 0; j < g->ny(); ++j) {
            const double z = g->kmag(i, j);
            s[g->idx(i, j)] = z * std::tanh(z);
        }
    return s;
}

std::vector<double> kk_symbol(const GridPtr& g) {  // |k|^2
    std::vector<double> s(g->size());
    for (int i = 0; i < g->nx(); ++i)
        for (int j = 0; j < g->ny(); ++j) {
            const double z = g->kmag(i, j);
            s[g->idx(i, j)] = z * z;
        }
    return s;
}

// d/dx1 = i k1 = eps * d/dx (scaled), d/dx2 = eps^2 * d/dy.
RealField dx1(const RealField& f) {
    RealField r = derivative(f, 0, 1);
    r *= f.grid->eps();
    return r;
}
RealField dx2(const RealField& f) {
    RealField r = derivative(f, 1, 1);
    r *= f.grid->eps() * f.grid->eps();
    return r;
}
}  // namespace

RealField g0_apply(const RealField& xi) {
    return apply_multiplier(xi, g0_symbol(xi.grid));
}

RealField g1_apply(const RealField& eta, const RealField& xi) {
    const auto g0 = g0_symbol(xi.grid);
    RealField term1 = apply_multiplier(prod(eta, apply_multiplier(xi, g0)), g0);
    RealField term2 = dx1(prod(eta, dx1(xi))) + dx2(prod(eta, dx2(xi)));
    RealField r = (-1.0) * (term1 + term2);
    return r;
}

RealField g2_apply(const RealField& eta, const RealField& xi) {
    const auto g0 = g0_symbol(xi.grid);
    const auto kk = kk_symbol(xi.grid);
    RealField eta2 = prod(eta, eta);
    RealField g0xi = apply_multiplier(xi, g0);
    RealField t1 = apply_multiplier(prod(eta2, g0xi), kk);
    RealField t2 = apply_multiplier(prod(eta2, apply_multiplier(xi, kk)), g0);
    RealField t3 = apply_multiplier(prod(eta, apply_multiplier(prod(eta, g0xi), g0)), g0);
    RealField r = t3 - 0.5 * (t1 + t2);
    return r;
}

// ---------------------------------------------------------------------------
// Oracle: Chebyshev-Gauss-Lobatto collocation in s on [0, 1], s_0 = 1 (top).

struct DnoOracle::Impl {
    GridPtr grid;
    OracleConfig cfg;
    int nz;                          // number of levels = Nz + 1
    std::vector<double> s;           // collocation points, s[0] = 1, s[nz-1] = 0
    Eigen::MatrixXd D1, D2;          // differentiation matrices in s
    // Per unique (|kx|, |ky|) index pair: inverse of the flat operator
    // (D2 - |k|^2 I) with Dirichlet row at s=1 and Neumann row at s=0.
    std::vector<Eigen::MatrixXd> flat_inv;
    std::vector<int> pair_index;     // mode (i,j) -> index into flat_inv

    Impl(GridPtr g, OracleConfig c) : grid(std::move(g)), cfg(c) {
        if (cfg.Nz < 8) throw ConfigError("DnoOracle: Nz must be >= 8");
        nz = cfg.Nz + 1;
        build_cheb();
        build_flat();
    }

    void build_cheb() {
        const int N = cfg.Nz;
        s.resize(nz);
        for (int j = 0; j <= N; ++j) s[j] = 0.5 * (1.0 + std::cos(M_PI * j / N));
        // Standard CGL differentiation matrix on [-1,1], then chain rule for
        // the affine map to [0,1] (factor 2).
        Eigen::MatrixXd D(nz, nz);
        std::vector<double> cbar(nz, 1.0);
        cbar[0] = cbar[N] = 2.0;
        std::vector<double> zeta(nz);
        for (int j = 0; j <= N; ++j) zeta[j] = std::cos(M_PI * j / N);
        for (int i = 0; i <= N; ++i)
            for (int j = 0; j <= N; ++j) {
                if (i != j) {
                    double sign = ((i + j) % 2 == 0) ? 1.0 : -1.0;
                    D(i, j) = cbar[i] / cbar[j] * sign / (zeta[i] - zeta[j]);
                }
            }
        for (int i = 0; i <= N; ++i) {
            double rowsum = 0.0;
            for (int j = 0; j <= N; ++j)
                if (j != i) rowsum += D(i, j);
            D(i, i) = -rowsum;  // negative-sum trick
        }
        D1 = 2.0 * D;
        D2 = D1 * D1;
    }

    void build_flat() {
        const GridPtr& g = grid;
        const int nx = g->nx(), ny = g->ny();
        const int hx = nx / 2, hy = ny / 2;
        pair_index.assign(g->size(), -1);
        flat_inv.reserve(static_cast<std::size_t>(hx + 1) * (hy + 1));
        std::vector<int> lookup(static_cast<std::size_t>(hx + 1) * (hy + 1), -1);
        for (int i = 0; i < nx; ++i) {
            const int ai = i <= hx ? i : nx - i;
            for (int j = 0; j < ny; ++j) {
                const int aj = j <= hy ? j : ny - j;
                const std::size_t key = static_cast<std::size_t>(ai) * (hy + 1) + aj;
                if (lookup[key] < 0) {
                    const double kk = g->kmag(ai, aj);
                    Eigen::MatrixXd M = D2 - kk * kk * Eigen::MatrixXd::Identity(nz, nz);
                    M.row(0).setZero();
                    M(0, 0) = 1.0;                 // u(s=1) = Dirichlet data
                    M.row(nz - 1) = D1.row(nz - 1);  // u_s(s=0) = 0
                    lookup[key] = static_cast<int>(flat_inv.size());
                    flat_inv.push_back(M.inverse());
                }
                pair_index[g->idx(i, j)] = lookup[key];
            }
        }
    }

    // Solves the flat problem (Delta_horizontal + d_ss) u = rhs with
    // u(s=1) = xi, u_s(s=0) = 0. rhs/out are phys-space level stacks.
    void flat_solve(const std::vector<RealField>& rhs, const SpectralField& xi_hat,
                    std::vector<RealField>& out) const {
        const GridPtr& g = grid;
        const std::size_t n = g->size();
        std::vector<SpectralField> rhat(nz, SpectralField(g));
        for (int l = 0; l < nz; ++l) rhat[l] = transform(rhs[l]);
        std::vector<SpectralField> uhat(nz, SpectralField(g));
        Eigen::VectorXd br(nz), bi(nz), ur(nz), ui(nz);
        for (std::size_t id = 0; id < n; ++id) {
            for (int l = 0; l < nz; ++l) {
                br(l) = rhat[l].c[id].real();
                bi(l) = rhat[l].c[id].imag();
            }
            br(0) = xi_hat.c[id].real();
            bi(0) = xi_hat.c[id].imag();
            br(nz - 1) = 0.0;
            bi(nz - 1) = 0.0;
            const Eigen::MatrixXd& Minv = flat_inv[pair_index[id]];
            ur.noalias() = Minv * br;
            ui.noalias() = Minv * bi;
            for (int l = 0; l < nz; ++l) uhat[l].c[id] = cplx(ur(l), ui(l));
        }
        out.resize(nz, RealField(g));
        for (int l = 0; l < nz; ++l) out[l] = inverse(uhat[l]);
    }

    // Chebyshev derivative across levels, pointwise in the horizontal.
    std::vector<RealField> level_derivative(const std::vector<RealField>& u,
                                            const Eigen::MatrixXd& D) const {
        std::vector<RealField> du(nz, RealField(grid));
        const std::size_t n = grid->size();
        for (int l = 0; l < nz; ++l) {
            for (int m = 0; m < nz; ++m) {
                const double w = D(l, m);
                if (w == 0.0) continue;
                for (std::size_t id = 0; id < n; ++id) du[l].v[id] += w * u[m].v[id];
            }
        }
        return du;
    }

    RealField apply(const SurfaceState& state) const {
        const GridPtr& g = grid;
        const RealField& eta = state.eta;
        const RealField& xi = state.xi;
        if (max_abs(eta) >= 1.0)
            throw PreconditionError("DnoOracle: ||eta||_inf must stay below 1");

        // Metric helpers: w_i = eta_{x_i}/(1+eta), v_i = d_{x_i} w_i,
        // metric0 = 1/(1+eta)^2 - 1.
        RealField ex1 = dx1(eta), ex2 = dx2(eta);
        const std::size_t n = g->size();
        RealField w1(g), w2(g), metric0(g), onep(g);
        for (std::size_t id = 0; id < n; ++id) {
            const double op = 1.0 + eta.v[id];
            onep.v[id] = op;
            w1.v[id] = ex1.v[id] / op;
            w2.v[id] = ex2.v[id] / op;
            metric0.v[id] = (1.0 - op * op) / (op * op);
        }
        RealField v1 = dx1(w1), v2 = dx2(w2);
        RealField gpot1(g), gpot2(g);  // v_i - w_i^2 (coefficient of s u_s)
        for (std::size_t id = 0; id < n; ++id) {
            gpot1.v[id] = v1.v[id] - w1.v[id] * w1.v[id];
            gpot2.v[id] = v2.v[id] - w2.v[id] * w2.v[id];
        }

        SpectralField xi_hat = transform(xi);
        std::vector<RealField> zero_rhs(nz, RealField(g));
        std::vector<RealField> u;
        flat_solve(zero_rhs, xi_hat, u);

        const double scale = std::max(1.0, max_abs(xi));
        std::vector<RealField> rhs(nz, RealField(g));
        int it = 0;
        double change = 0.0;
        for (; it < cfg.maxiter; ++it) {
            std::vector<RealField> us = level_derivative(u, D1);
            std::vector<RealField> uss = level_derivative(u, D2);
            for (int l = 0; l < nz; ++l) {
                RealField usx1 = dx1(us[l]), usx2 = dx2(us[l]);
                const double sl = s[l];
                RealField& r = rhs[l];
                for (std::size_t id = 0; id < n; ++id) {
                    const double b1 = sl * w1.v[id], b2 = sl * w2.v[id];
                    double m = -2.0 * b1 * usx1.v[id] - 2.0 * b2 * usx2.v[id];
                    m += (b1 * b1 + b2 * b2 + metric0.v[id]) * uss[l].v[id];
                    m -= sl * (gpot1.v[id] + gpot2.v[id]) * us[l].v[id];
                    r.v[id] = -m;
                }
            }
            std::vector<RealField> unew;
            flat_solve(rhs, xi_hat, unew);
            change = 0.0;
            for (int l = 0; l < nz; ++l)
                change = std::max(change, max_abs(unew[l] - u[l]));
            u = std::move(unew);
            if (change <= cfg.tol * scale) break;
        }
        if (change > cfg.tol * scale)
            throw IterationFailure(
                "DnoOracle: no convergence in " + std::to_string(cfg.maxiter) +
                " sweeps (last update " + std::to_string(change) +
                "); reduce ||eta|| or increase Nz");

        // G(eta)xi = u_s (1 + |grad eta|^2)/(1+eta) - grad eta . grad xi at s = 1.
        std::vector<RealField> us = level_derivative(u, D1);
        RealField xix1 = dx1(xi), xix2 = dx2(xi);
        RealField out(g);
        for (std::size_t id = 0; id < n; ++id) {
            const double ge2 = ex1.v[id] * ex1.v[id] + ex2.v[id] * ex2.v[id];
            out.v[id] = us[0].v[id] * (1.0 + ge2) / onep.v[id] -
                        ex1.v[id] * xix1.v[id] - ex2.v[id] * xix2.v[id];
        }
        return out;
    }
};

DnoOracle::DnoOracle(GridPtr grid, OracleConfig cfg)
    : impl_(std::make_unique<Impl>(std::move(grid), cfg)) {}
DnoOracle::~DnoOracle() = default;
DnoOracle::DnoOracle(DnoOracle&&) noexcept = default;
DnoOracle& DnoOracle::operator=(DnoOracle&&) noexcept = default;

RealField DnoOracle::apply(const SurfaceState& state) const { return impl_->apply(state); }
const OracleConfig& DnoOracle::config() const { return impl_->cfg; }
const GridPtr& DnoOracle::grid() const { return impl_->grid; }

DnoRemainders remainders(const SurfaceState& state, const DnoOracle& oracle, DnoMode mode) {
    DnoRemainders r;
    RealField g1 = g1_apply(state.eta, state.xi);
    RealField g2 = g2_apply(state.eta, state.xi);
    if (mode == DnoMode::SeriesOnly) {
        r.r1 = g1 + g2;
        r.r2 = g2;
        r.r3 = RealField(state.xi.grid);
        return r;
    }
    RealField full = oracle.apply(state);
    r.r1 = full - g0_apply(state.xi);
    r.r2 = r.r1 - g1;
    r.r3 = r.r2 - g2;
    return r;
}

}  // namespace wwl
