#include "wwl/linear.hpp"

#include <Eigen/Dense>

#include <cmath>

#include "wwl/spectral.hpp"

namespace wwl {

LinearContext::LinearContext(SymbolTable syms, RealField q1_, double tol_, int maxiter_)
    : symbols(std::move(syms)), q1(std::move(q1_)), tol(tol_), maxiter(maxiter_) {
    if (!symbols.grid->same_box(*q1.grid))
        throw ConfigError("LinearContext: symbols and q1 grids differ");
    const std::size_t n = symbols.grid->size();
    lsym.resize(n);
    lsym_inv.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        lsym[i] = symbols.l1[i] + symbols.l2[i];
        lsym_inv[i] = lsym[i] > 0.0 ? 1.0 / lsym[i] : 0.0;
    }
}

RealField apply_Leps(const LinearContext& ctx, const RealField& phi) {
    if (phi.parity != Parity::Hox)
        throw PreconditionError("apply_Leps: phi must carry Hox parity");
    RealField out = apply_multiplier(phi, ctx.lsym);
    RealField coupling = derivative(prod(ctx.q1, derivative(phi, 0, 1)), 0, 1);
    const double c = ctx.symbols.c;
    out -= (3.0 / c) * coupling;
    out.parity = Parity::Hox;
    return out;
}

namespace {
double dot_l2(const RealField& a, const RealField& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.v.size(); ++i) s += a.v[i] * b.v[i];
    return s * a.grid->cell_area();
}
}  // namespace

RealField solve_Leps(const LinearContext& ctx, const RealField& rhs, LinearSolveInfo* info) {
    const GridPtr& g = ctx.symbols.grid;
    RealField b = project_parity(rhs, Parity::Hox);
    const double bnorm = l2_grid(b);
    LinearSolveInfo local;
    LinearSolveInfo& out_info = info ? *info : local;
    if (bnorm == 0.0) {
        out_info.residual = 0.0;
        return RealField(g, Parity::Hox);
    }

    // BiCGSTAB on M x = f with M = P^-1 L_eps, f = P^-1 rhs; P is the exact
    // (l1 + l2) multiplier, so M = I + small coupling for small eps.
    auto apply_M = [&](const RealField& x) {
        RealField y = apply_Leps(ctx, x);
        y = apply_multiplier(y, ctx.lsym_inv);
        return project_parity(y, Parity::Hox);
    };
    RealField f = project_parity(apply_multiplier(b, ctx.lsym_inv), Parity::Hox);

    RealField x(g, Parity::Hox);
    RealField r = f;
    RealField rhat = r;
    RealField p = r, v(g, Parity::Hox);
    double rho = 1.0, alpha = 1.0, omega = 1.0;
    double rho_prev = dot_l2(rhat, r);
    const double fnorm = l2_grid(f);

    auto true_residual = [&](const RealField& xx) {
        RealField res = apply_Leps(ctx, xx) - b;
        return l2_grid(res) / bnorm;
    };

    p = r;
    for (int it = 0; it < ctx.maxiter; ++it) {
        v = apply_M(p);
        const double rhv = dot_l2(rhat, v);
        if (rhv == 0.0) break;
        alpha = rho_prev / rhv;
        RealField s = r - alpha * v;
        if (l2_grid(s) <= 1e-16 * fnorm) {
            x += alpha * p;
            break;
        }
        RealField t = apply_M(s);
        const double tt = dot_l2(t, t);
        if (tt == 0.0) break;
        omega = dot_l2(t, s) / tt;
        x += alpha * p + omega * s;
        r = s - omega * t;
        const double rel = true_residual(x);
        out_info.history.push_back(rel);
        out_info.iterations = it + 1;
        out_info.residual = rel;
        if (rel <= ctx.tol) break;
        rho = dot_l2(rhat, r);
        const double beta = (rho / rho_prev) * (alpha / omega);
        rho_prev = rho;
        p = r + beta * (p - omega * v);
        p.parity = Parity::Hox;
    }
    out_info.residual = true_residual(x);
    if (out_info.residual > ctx.tol) {
        std::string msg = "solve_Leps: stagnation after " +
                          std::to_string(out_info.iterations) +
                          " iterations, residual " + std::to_string(out_info.residual);
        throw IterationFailure(msg);
    }
    return project_parity(x, Parity::Hox);
}

double coupling_spectral_radius(const LinearContext& ctx, int iters, std::uint64_t seed) {
    const GridPtr& g = ctx.symbols.grid;
    RealField x = random_smooth_field(g, Parity::Hox, seed);
    const double c = ctx.symbols.c;
    double lam = 0.0;
    for (int it = 0; it < iters; ++it) {
        RealField y = derivative(prod(ctx.q1, derivative(x, 0, 1)), 0, 1);
        y = apply_multiplier(y, ctx.lsym_inv);
        y = project_parity(y, Parity::Hox);
        y *= 3.0 / c;
        lam = l2_grid(y) / std::max(l2_grid(x), 1e-300);
        const double n = l2_grid(y);
        if (n == 0.0) return 0.0;
        y *= 1.0 / n;
        x = y;
    }
    return lam;
}

// ---------------------------------------------------------------------------
// Lump Hessian eigenproblem: A m1^2 + 1 + (1+eps^2) m2^2/m1^2 + (3/c) q1.

namespace {
struct HessianOp {
    GridPtr grid;
    std::vector<double> diag;      // free symbol, m1 = 0 pinned to 0
    std::vector<double> diag_inv;  // preconditioner
    RealField potential;           // (3/c) d1 q

    HessianOp(const LumpParams& p, const GridPtr& g, const RealField* q1_override)
        : grid(g) {
        const double a2 = 1.0 + p.eps * p.eps;
        diag.assign(g->size(), 0.0);
        diag_inv.assign(g->size(), 0.0);
        for (int i = 1; i < g->nx(); ++i) {
            const double m1 = g->m1(i);
            for (int j = 0; j < g->ny(); ++j) {
                const double m2 = g->m2(j);
                const double d = p.A * m1 * m1 + 1.0 + a2 * m2 * m2 / (m1 * m1);
                diag[g->idx(i, j)] = d;
                diag_inv[g->idx(i, j)] = 1.0 / d;
            }
        }
        if (q1_override) {
            potential = *q1_override;
        } else {
            potential = lump_derivatives(p, g).qx;
        }
        potential *= 3.0 / p.c;
    }

    // Projection onto He with vanishing m1 = 0 modes.
    RealField restrict_he(const RealField& f) const {
        RealField r = project_parity(f, Parity::He);
        SpectralField s = transform(r);
        for (int j = 0; j < grid->ny(); ++j) s.at(0, j) = 0.0;
        return inverse(s, Parity::He);
    }

    RealField apply(const RealField& f) const {
        RealField y = apply_multiplier(f, diag);
        for (std::size_t i = 0; i < y.v.size(); ++i) y.v[i] += potential.v[i] * f.v[i];
        return restrict_he(y);
    }

    RealField precondition(const RealField& f) const {
        return restrict_he(apply_multiplier(f, diag_inv));
    }
};
}  // namespace

EigenReport eig_L(const LumpParams& p, const GridPtr& grid, int nwant, double tol,
                  int maxiter, std::uint64_t seed, const RealField* q1_override) {
    HessianOp op(p, grid, q1_override);
    const int b = nwant + 2;

    std::vector<RealField> X, P;
    for (int k = 0; k < b; ++k)
        X.push_back(op.restrict_he(random_smooth_field(grid, Parity::He, seed + k)));

    auto gram = [&](const std::vector<RealField>& S) {
        Eigen::MatrixXd G(S.size(), S.size());
        for (std::size_t i = 0; i < S.size(); ++i)
            for (std::size_t j = i; j < S.size(); ++j) {
                G(i, j) = dot_l2(S[i], S[j]);
                G(j, i) = G(i, j);
            }
        return G;
    };

    EigenReport rep;
    std::vector<RealField> AX;
    Eigen::VectorXd theta;
    for (int it = 0; it < maxiter; ++it) {
        AX.clear();
        for (const auto& x : X) AX.push_back(op.apply(x));

        // Rayleigh-Ritz over [X, W, P] with W the preconditioned residuals.
        Eigen::MatrixXd xtax(b, b);
        for (int i = 0; i < b; ++i)
            for (int j = 0; j < b; ++j) xtax(i, j) = dot_l2(X[i], AX[j]);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> small(0.5 * (xtax + xtax.transpose()));

        std::vector<RealField> S = X;
        std::vector<RealField> W;
        double worst_res = 0.0;
        for (int k = 0; k < b; ++k) {
            const double lam = xtax(k, k);
            RealField r = AX[k] - lam * X[k];
            if (k < nwant)
                worst_res = std::max(worst_res, l2_grid(r) / std::max(1.0, std::abs(lam)));
            W.push_back(op.precondition(r));
        }
        for (auto& w : W) S.push_back(w);
        for (auto& pp : P) S.push_back(pp);

        Eigen::MatrixXd G = gram(S);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ges(G);
        // Drop near-dependent directions, whiten the basis.
        std::vector<int> keep;
        const double gmax = ges.eigenvalues().maxCoeff();
        for (int i = 0; i < G.rows(); ++i)
            if (ges.eigenvalues()(i) > 1e-12 * gmax) keep.push_back(i);
        const int m = static_cast<int>(keep.size());
        Eigen::MatrixXd T(G.rows(), m);
        for (int c = 0; c < m; ++c)
            T.col(c) = ges.eigenvectors().col(keep[c]) / std::sqrt(ges.eigenvalues()(keep[c]));

        std::vector<RealField> AS;
        for (std::size_t i = 0; i < S.size(); ++i) AS.push_back(op.apply(S[i]));
        Eigen::MatrixXd H(S.size(), S.size());
        for (std::size_t i = 0; i < S.size(); ++i)
            for (std::size_t j = i; j < S.size(); ++j) {
                H(i, j) = dot_l2(S[i], AS[j]);
                H(j, i) = H(i, j);
            }
        Eigen::MatrixXd Ht = T.transpose() * H * T;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> rr(0.5 * (Ht + Ht.transpose()));
        theta = rr.eigenvalues();

        const int nb = std::min<int>(b, m);
        Eigen::MatrixXd Y = T * rr.eigenvectors().leftCols(nb);
        std::vector<RealField> Xn, Pn;
        for (int k = 0; k < nb; ++k) {
            RealField xk(grid, Parity::He);
            RealField pk(grid, Parity::He);
            for (std::size_t i = 0; i < S.size(); ++i) {
                const double w = Y(static_cast<int>(i), k);
                if (w == 0.0) continue;
                for (std::size_t id = 0; id < xk.v.size(); ++id)
                    xk.v[id] += w * S[i].v[id];
                if (i >= static_cast<std::size_t>(b)) {
                    for (std::size_t id = 0; id < pk.v.size(); ++id)
                        pk.v[id] += w * S[i].v[id];
                }
            }
            Xn.push_back(xk);
            Pn.push_back(pk);
        }
        X = std::move(Xn);
        P = std::move(Pn);
        while (static_cast<int>(X.size()) < b) {
            X.push_back(op.restrict_he(
                random_smooth_field(grid, Parity::He, seed + 100 + it + X.size())));
        }
        if (worst_res < tol && it > 2) break;
    }

    // Final Rayleigh quotients on the converged block.
    AX.clear();
    for (const auto& x : X) AX.push_back(op.apply(x));
    Eigen::MatrixXd xtax(b, b), gx(b, b);
    for (int i = 0; i < b; ++i)
        for (int j = 0; j < b; ++j) {
            xtax(i, j) = dot_l2(X[i], AX[j]);
            gx(i, j) = dot_l2(X[i], X[j]);
        }
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> fin(
        0.5 * (xtax + xtax.transpose()), 0.5 * (gx + gx.transpose()));
    Eigen::VectorXd lam = fin.eigenvalues();

    for (int k = 0; k < nwant; ++k) rep.eigenvalues.push_back(lam(k));
    rep.lambda1 = lam(0);
    rep.n_negative = 0;
    for (int k = 0; k < nwant; ++k)
        if (lam(k) < -1e-8) ++rep.n_negative;
    rep.bound_state = rep.lambda1 < 1.0 - 1e-6;

    RealField phi0(grid, Parity::He);
    for (int i = 0; i < b; ++i) {
        const double w = fin.eigenvectors()(i, 0);
        for (std::size_t id = 0; id < phi0.v.size(); ++id) phi0.v[id] += w * X[i].v[id];
    }
    const double pn = l2_grid(phi0);
    if (pn > 0) phi0 *= 1.0 / pn;
    rep.phi0 = phi0;
    RealField resid = op.apply(phi0) - rep.lambda1 * phi0;
    rep.residual = l2_grid(resid) / std::max(1.0, std::abs(rep.lambda1));
    if (rep.residual > std::sqrt(tol))
        throw IterationFailure("eig_L: eigensolver failed to converge (residual " +
                               std::to_string(rep.residual) + ")");
    return rep;
}

std::vector<double> eig_dense_oracle(const LumpParams& p, const GridPtr& grid, int nwant) {
    HessianOp op(p, grid, nullptr);
    const int nx = grid->nx(), ny = grid->ny();
    const double box = grid->box_area();

    struct Mode {
        int j1, j2;
        double nrm;  // L2 norm of cos(m1 x) cos(m2 y) over the box
    };
    std::vector<Mode> modes;
    for (int j1 = 1; j1 < nx / 2; ++j1)
        for (int j2 = 0; j2 < ny / 2; ++j2)
            modes.push_back({j1, j2, std::sqrt(box / (j2 == 0 ? 2.0 : 4.0))});
    const int dim = static_cast<int>(modes.size());

    Eigen::MatrixXd H(dim, dim);
    RealField basis(grid, Parity::He);
    for (int col = 0; col < dim; ++col) {
        const auto& mo = modes[col];
        const double m1 = M_PI / grid->lx() * mo.j1;
        const double m2 = M_PI / grid->ly() * mo.j2;
        for (int i = 0; i < nx; ++i) {
            const double cx = std::cos(m1 * grid->x(i));
            for (int j = 0; j < ny; ++j)
                basis.at(i, j) = cx * std::cos(m2 * grid->y(j)) / mo.nrm;
        }
        RealField out = op.apply(basis);
        SpectralField ohat = transform(out);
        for (int row = 0; row < dim; ++row) {
            const auto& mr = modes[row];
            // <cos cos, F> = box * Re Fhat(j1, j2) for He-symmetric F.
            H(row, col) = box * ohat.at(mr.j1, mr.j2).real() / mr.nrm;
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(0.5 * (H + H.transpose()));
    std::vector<double> lows;
    for (int k = 0; k < std::min(nwant, dim); ++k) lows.push_back(eig.eigenvalues()(k));
    return lows;
}

}  // namespace wwl
