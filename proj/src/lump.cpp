#include "wwl/lump.hpp"

#include <cmath>

#include "wwl/spectral.hpp"

namespace wwl {

LumpParams::LumpParams(double eps_, double sigma_) : eps(eps_), sigma(sigma_) {
    if (eps < 0.0) throw ConfigError("LumpParams: eps must be nonnegative");
    A = sigma * (1.0 + eps * eps) - 1.0 / 3.0;
    c = 1.0 / std::sqrt(1.0 + eps * eps);
    if (!(A > 0.0)) throw ConfigError("LumpParams: A = sigma(1+eps^2) - 1/3 must be positive");
}

RealField lump_closed_form(const LumpParams& p, const GridPtr& grid) {
    const double a2 = 1.0 + p.eps * p.eps;
    const double a = std::sqrt(a2);
    RealField q(grid, Parity::Hox);
    for (int i = 0; i < grid->nx(); ++i) {
        const double x = grid->x(i);
        for (int j = 0; j < grid->ny(); ++j) {
            const double y = grid->y(j);
            const double den = y * y + a2 * (x * x + 3.0 * p.A);
            q.at(i, j) = -8.0 * a * p.A * x / den;
        }
    }
    return q;
}

RealField lump_profile(const LumpParams& p, const GridPtr& grid) {
    // Exact periodization of the closed form by Poisson summation: the torus
    // coefficients are samples of the continuous transform
    //   qhat(k) = 16 pi i A b k1 K1(b rho) / (a^2 rho),  rho = |(k1/a, k2)|,
    // with a^2 = 1+eps^2 and b^2 = 3 A a^2. The raw restriction would carry an
    // O(1/L) jump at the seam from the algebraic tails; the image sum keeps
    // the field smooth on the torus with an O(L^-2) interior deviation.
    const double a2 = 1.0 + p.eps * p.eps;
    const double b = std::sqrt(3.0 * p.A * a2);
    SpectralField s(grid);
    const double scale = 16.0 * M_PI * p.A * b / (a2 * grid->box_area());
    for (int i = 0; i < grid->nx(); ++i) {
        const double m1 = grid->m1(i);
        for (int j = 0; j < grid->ny(); ++j) {
            const double m2 = grid->m2(j);
            if (i == 0 && j == 0) continue;
            const double rho = std::hypot(m1 / std::sqrt(a2), m2);
            const double br = b * rho;
            // K1 underflows past ~700; those coefficients are exact zeros in
            // double precision anyway.
            const double k1v = br < 650.0 ? std::cyl_bessel_k(1, br) : 0.0;
            s.at(i, j) = cplx(0.0, scale * m1 * k1v / rho);
        }
    }
    RealField q = inverse(s, Parity::Hox);
    return project_parity(q, Parity::Hox);
}

LumpDerivatives lump_derivatives(const LumpParams& p, const GridPtr& grid) {
    const double a2 = 1.0 + p.eps * p.eps;
    const double a = std::sqrt(a2);
    const double C = 8.0 * a * p.A;
    LumpDerivatives d{RealField(grid, Parity::He),  RealField(grid, Parity::Hoo),
                      RealField(grid, Parity::Hox), RealField(grid, Parity::Hoy),
                      RealField(grid, Parity::Hox)};
    for (int i = 0; i < grid->nx(); ++i) {
        const double x = grid->x(i);
        for (int j = 0; j < grid->ny(); ++j) {
            const double y = grid->y(j);
            const double M = y * y + a2 * (x * x + 3.0 * p.A);
            const double M2 = M * M, M3 = M2 * M;
            d.qx.at(i, j) = -C * (M - 2.0 * a2 * x * x) / M2;
            d.qy.at(i, j) = 2.0 * C * x * y / M2;
            d.qxx.at(i, j) = 2.0 * C * a2 * x * (3.0 * M - 4.0 * a2 * x * x) / M3;
            d.qxy.at(i, j) = 2.0 * C * y * (M - 4.0 * a2 * x * x) / M3;
            d.qyy.at(i, j) = 2.0 * C * x * (M - 4.0 * y * y) / M3;
        }
    }
    return d;
}

RealField kpi_residual(const RealField& q, const LumpParams& p) {
    // Evaluated on the resolved (2/3-rule) band: beyond it the fourth
    // derivative of the algebraically decaying profile is not representable
    // on the grid and would swamp the periodization floor being measured.
    const double a2 = 1.0 + p.eps * p.eps;
    RealField qx = derivative(q, 0, 1);
    RealField res = p.A * derivative(q, 0, 4);
    res -= derivative(q, 0, 2);
    res -= a2 * derivative(q, 1, 2);
    res -= (1.5 / p.c) * derivative(prod(qx, qx), 0, 1);
    res = dealias(res);
    res.parity = q.parity;
    return res;
}

namespace {
// Symbol of M = A d1^2-like positive operator for the d_x q unknown;
// 1/M with m1 = 0 modes pinned.
std::vector<double> petviashvili_inv_symbol(const LumpParams& p, const GridPtr& g) {
    std::vector<double> inv(g->size(), 0.0);
    const double a2 = 1.0 + p.eps * p.eps;
    for (int i = 1; i < g->nx(); ++i) {
        const double m1 = g->m1(i);
        for (int j = 0; j < g->ny(); ++j) {
            const double m2 = g->m2(j);
            const double M = p.A * m1 * m1 + 1.0 + a2 * m2 * m2 / (m1 * m1);
            inv[g->idx(i, j)] = 1.0 / M;
        }
    }
    return inv;
}

std::vector<double> petviashvili_symbol(const LumpParams& p, const GridPtr& g) {
    std::vector<double> sym(g->size(), 0.0);
    const double a2 = 1.0 + p.eps * p.eps;
    for (int i = 1; i < g->nx(); ++i) {
        const double m1 = g->m1(i);
        for (int j = 0; j < g->ny(); ++j) {
            const double m2 = g->m2(j);
            sym[g->idx(i, j)] = p.A * m1 * m1 + 1.0 + a2 * m2 * m2 / (m1 * m1);
        }
    }
    return sym;
}

double inner_l2(const RealField& a, const RealField& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.v.size(); ++i) s += a.v[i] * b.v[i];
    return s * a.grid->cell_area();
}
}  // namespace

PetviashviliResult lump_petviashvili(const LumpParams& p, const GridPtr& grid,
                                     double tol, int maxiter, int seed_sign) {
    if (!(tol > 0.0)) throw PreconditionError("lump_petviashvili: tol must be positive");
    const double nl_coeff = -1.5 / p.c;
    const auto Msym = petviashvili_symbol(p, grid);
    const auto Minv = petviashvili_inv_symbol(p, grid);

    // Localized He seed with zero x-mean, negative at the origin like the lump.
    RealField u(grid, Parity::He);
    const double w = 6.0 * p.A;
    const double amp = 8.0 / (3.0 * std::sqrt(1.0 + p.eps * p.eps));
    for (int i = 0; i < grid->nx(); ++i) {
        const double x = grid->x(i);
        for (int j = 0; j < grid->ny(); ++j) {
            const double y = grid->y(j);
            u.at(i, j) = -seed_sign * amp * (1.0 - 2.0 * x * x / w) *
                         std::exp(-(x * x + y * y) / w);
        }
    }

    PetviashviliResult out;
    double gamma = 0.0;
    bool converged = false;
    for (int it = 0; it < maxiter; ++it) {
        RealField Nu = nl_coeff * prod(u, u);
        RealField Mu = apply_multiplier(u, Msym);
        const double num = inner_l2(Mu, u);
        const double den = inner_l2(Nu, u);
        if (den == 0.0) throw IterationFailure("lump_petviashvili: degenerate iterate");
        gamma = num / den;
        RealField next = apply_multiplier(Nu, Minv);
        next *= gamma * gamma;
        next = project_parity(next, Parity::He);
        const double update = l2_grid(next - u) / std::max(l2_grid(next), 1e-300);
        u = next;
        out.history.push_back(update);
        out.iterations = it + 1;
        out.gamma_final = gamma;
        if (update <= tol) {
            converged = true;
            break;
        }
    }
    if (!converged)
        throw IterationFailure("lump_petviashvili: no convergence in " +
                               std::to_string(maxiter) + " iterations (update " +
                               std::to_string(out.history.back()) + ")");
    // in-band equation residual of the converged iterate; the m1 = 0 column
    // is not part of the equation (it lives in the image of d1)
    SpectralField rhat = transform(apply_multiplier(u, Msym) - (nl_coeff * prod(u, u)));
    dealias(rhat);
    for (int j = 0; j < grid->ny(); ++j) rhat.at(0, j) = 0.0;
    out.residual = l2_grid(inverse(rhat)) / std::max(l2_grid(u), 1e-300);
    out.u = u;
    out.q = antiderivative_x(u, 1);
    out.q.parity = Parity::Hox;
    return out;
}

}  // namespace wwl
