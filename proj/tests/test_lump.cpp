#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "wwl/lump.hpp"

using namespace wwl;
using namespace wwl::testing;

namespace {
double interior_max(const RealField& f) {
    const GridPtr& g = f.grid;
    double m = 0.0;
    for (int i = 0; i < g->nx(); ++i)
        for (int j = 0; j < g->ny(); ++j)
            if (std::abs(g->x(i)) <= g->lx() / 2 && std::abs(g->y(j)) <= g->ly() / 2)
                m = std::max(m, std::abs(f.at(i, j)));
    return m;
}
}  // namespace

TEST_CASE("closed-form values") {
    CHECK_THROWS_AS(LumpParams(0.1, 0.2), ConfigError);
    LumpParams p0(0.0, 1.0);
    CHECK(p0.A == doctest::Approx(2.0 / 3.0));
    CHECK(p0.c == 1.0);
    LumpParams p(0.1, 1.0);
    CHECK(p.c * p.c * (1.0 + 0.01) == doctest::Approx(1.0).epsilon(1e-15));

    // grid with x = 1 on a sample: q0(1, 0) = -(16/3)/3 = -16/9
    auto g = Grid::create(64.0, 64.0, 256, 256, 0.5, 1.0);
    RealField q = lump_closed_form(p0, g);
    const int i1 = g->nx() / 2 + 2, j0 = g->ny() / 2;  // x = 1, y = 0
    CHECK(g->x(i1) == doctest::Approx(1.0));
    CHECK(q.at(i1, j0) == doctest::Approx(-16.0 / 9.0).epsilon(1e-14));
    // odd in x: q(0, y) = 0
    for (int j = 0; j < g->ny(); ++j) CHECK(q.at(g->nx() / 2, j) == 0.0);

    // max |q0| = 4 sqrt(2)/3 at (x, y) = (-+sqrt(2), 0)
    auto gf = Grid::create(60.0, 60.0, 1024, 1024, 0.5, 1.0);
    CHECK(max_abs(lump_closed_form(p0, gf)) ==
          doctest::Approx(4.0 * std::sqrt(2.0) / 3.0).epsilon(1e-3));
}

TEST_CASE("periodized profile: parity, zero x-mean, closeness to the closed form") {
    auto g = Grid::create(60.0, 60.0, 256, 256, 0.5, 1.0);
    LumpParams p(0.0, 1.0);
    RealField q = lump_profile(p, g);
    CHECK(parity_defect(q, Parity::Hox) <= 1e-15);

    // x-slice integrals vanish by oddness
    for (int j : {0, 17, 128}) {
        double s = 0.0;
        for (int i = 0; i < g->nx(); ++i) s += q.at(i, j);
        CHECK(std::abs(s * g->dx()) <= 1e-12);
    }

    // periodization shifts the profile by the O(L^-2) image tail only
    RealField raw = lump_closed_form(p, g);
    CHECK(interior_max(q - raw) <= 6e-2);
    CHECK(max_abs(q) == doctest::Approx(4.0 * std::sqrt(2.0) / 3.0).epsilon(3e-3));

    auto g2 = Grid::create(120.0, 120.0, 512, 512, 0.5, 1.0);
    RealField q2 = lump_profile(p, g2);
    RealField raw2 = lump_closed_form(p, g2);
    // the image tail behaves like x/L^2; its sup over the half box (x = L/2)
    // therefore halves when L doubles
    const double r = interior_max(q - raw) / interior_max(q2 - raw2);
    CHECK(r >= 1.6);
    CHECK(r <= 2.7);
}

TEST_CASE("analytic derivatives: origin slope, y-axis symmetry, cross-method gap") {
    auto g = Grid::create(60.0, 60.0, 256, 256, 0.5, 1.0);
    for (double eps : {0.0, 0.2}) {
        LumpParams p(eps, 1.0);
        LumpDerivatives d = lump_derivatives(p, g);
        const int i0 = g->nx() / 2, j0 = g->ny() / 2;
        CHECK(d.qx.at(i0, j0) ==
              doctest::Approx(-8.0 / (3.0 * std::sqrt(1.0 + eps * eps))).epsilon(1e-14));
        for (int i : {0, 31, 100}) CHECK(d.qy.at(i, j0) == 0.0);

        // quotient rule consistent with a centered difference of the closed form
        RealField raw = lump_closed_form(p, g);
        const int it = i0 + 7, jt = j0 + 3;
        const double h = 1e-5;
        const double a2 = 1.0 + eps * eps;
        auto qf = [&](double x, double y) {
            return -8.0 * std::sqrt(a2) * p.A * x / (y * y + a2 * (x * x + 3.0 * p.A));
        };
        const double fd = (qf(g->x(it) + h, g->y(jt)) - qf(g->x(it) - h, g->y(jt))) / (2 * h);
        CHECK(d.qx.at(it, jt) == doctest::Approx(fd).epsilon(1e-8));
        (void)raw;
    }

    // independent routes: spectral d1 of the periodized profile vs the raw
    // quotient rule agree in the interior up to the periodization tail
    LumpParams p(0.0, 1.0);
    RealField qx_spec = derivative(lump_profile(p, g), 0, 1);
    RealField qx_raw = lump_derivatives(p, g).qx;
    CHECK(interior_max(qx_spec - qx_raw) <= 5e-3);
}

TEST_CASE("KPI residual: zero field, resolved floor, O(L^-2) tail") {
    LumpParams p(0.0, 1.0);
    auto g = Grid::create(60.0, 60.0, 256, 256, 0.5, 1.0);
    CHECK(max_abs(kpi_residual(RealField(g, Parity::Hox), p)) == 0.0);

    // resolved periodization floor at L = 60 (dx = 0.156): measured
    // 3.49e-3 * ||d2q||; the coarse default grid sits above it (resolution
    // floor, see the verify report)
    auto ga = Grid::create(60.0, 60.0, 768, 768, 0.5, 1.0);
    RealField qa = lump_profile(p, ga);
    const double ra = interior_max(kpi_residual(qa, p));
    const double d2a = max_abs(derivative(qa, 0, 2));
    CHECK(ra / d2a <= 4.5e-3);

    // doubling the box at fixed resolution cuts the floor ~4x
    auto gb = Grid::create(120.0, 120.0, 1536, 1536, 0.5, 1.0);
    RealField qb = lump_profile(p, gb);
    const double rb = interior_max(kpi_residual(qb, p));
    CHECK(ra / rb >= 3.4);
    CHECK(ra / rb <= 4.6);
}

TEST_CASE("Petviashvili oracle: convergence, fixed-point factor, symmetry") {
    auto g = Grid::create(60.0, 60.0, 256, 256, 0.5, 1.0);
    LumpParams p(0.0, 1.0);
    CHECK_THROWS_AS(lump_petviashvili(p, g, -1.0), PreconditionError);

    PetviashviliResult pv = lump_petviashvili(p, g, 1e-11, 300);
    CHECK(pv.iterations <= 200);
    // stabilizing factor -> 1 at the fixed point
    CHECK(std::abs(pv.gamma_final - 1.0) <= 1e-10);
    // converged iterate solves the discrete equation on the resolved band
    CHECK(pv.residual <= 1e-9);
    // u is even-even with zero m1 = 0 content; q recovers Hox
    CHECK(parity_defect(pv.u, Parity::He) <= 1e-12);
    CHECK(parity_defect(pv.q, Parity::Hox) <= 1e-12);

    // mirrored run from the flipped seed lands on the same lump, which is its
    // own mirror image: -q(x, y) = q(-x, y)
    PetviashviliResult pv2 = lump_petviashvili(p, g, 1e-11, 300, -1);
    CHECK(max_abs(pv2.u - pv.u) <= 1e-10);

    // oracle vs closed form: the gap is the L = 60 torus tail (measured
    // 2.06e-3 relative L2, grid-converged)
    auto gf = Grid::create(60.0, 60.0, 512, 512, 0.5, 1.0);
    PetviashviliResult pvf = lump_petviashvili(p, gf, 1e-11, 300);
    RealField qx = derivative(lump_profile(p, gf), 0, 1);
    CHECK(rel_l2_err(pvf.u, qx) <= 3e-3);
}

TEST_CASE("eps -> 0 pointwise limit of the profile") {
    auto g = Grid::create(60.0, 60.0, 256, 256, 0.5, 1.0);
    RealField q_small = lump_profile(LumpParams(1e-3, 1.0), g);
    RealField q_zero = lump_profile(LumpParams(0.0, 1.0), g);
    CHECK(max_abs(q_small - q_zero) <= 1e-2 * max_abs(q_zero));
}
