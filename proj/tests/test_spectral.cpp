#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "wwl/io.hpp"

using namespace wwl;
using namespace wwl::testing;

TEST_CASE("grid invariants are enforced") {
    CHECK_THROWS_AS(Grid::create(1.0, 1.0, 14, 32, 0.1, 1.0), ConfigError);
    CHECK_THROWS_AS(Grid::create(1.0, 1.0, 33, 32, 0.1, 1.0), ConfigError);
    CHECK_THROWS_AS(Grid::create(1.0, 1.0, 32, 32, 0.0, 1.0), ConfigError);
    CHECK_THROWS_AS(Grid::create(1.0, 1.0, 32, 32, 0.1, 0.2), ConfigError);
    auto g = small_grid();
    CHECK(g->x(g->nx() / 2) == doctest::Approx(0.0));
    CHECK(g->m1(1) == doctest::Approx(M_PI / g->lx()));
    CHECK(g->m1(g->nx() - 1) == doctest::Approx(-M_PI / g->lx()));
}

TEST_CASE("transform of zero and of a single cosine") {
    auto g = small_grid();
    RealField zero(g);
    SpectralField s = transform(zero);
    for (const auto& z : s.c) CHECK(std::abs(z) == 0.0);

    RealField f = fill(g, [&](double x, double) { return std::cos(M_PI * x / g->lx()); });
    s = transform(f);
    for (int i = 0; i < g->nx(); ++i)
        for (int j = 0; j < g->ny(); ++j) {
            const cplx z = s.at(i, j);
            if (j == 0 && (i == 1 || i == g->nx() - 1)) {
                CHECK(z.real() == doctest::Approx(0.5).epsilon(1e-13));
                CHECK(std::abs(z.imag()) < 1e-14);
            } else {
                CHECK(std::abs(z) < 1e-13);
            }
        }
}

TEST_CASE("roundtrip is identity to 1e-13 relative") {
    auto g = small_grid();
    RealField f = random_smooth_field(g, Parity::None, 42);
    RealField back = inverse(transform(f));
    CHECK(rel_max_err(back, f) <= 1e-13);
}

TEST_CASE("Parseval holds to 1e-12 relative") {
    auto g = small_grid();
    RealField f = random_smooth_field(g, Parity::None, 7);
    const double pg = parseval_grid(f);
    const double ps = parseval_spec(transform(f));
    CHECK(std::abs(pg - ps) / pg <= 1e-12);
}

TEST_CASE("multiplier: identity, eigenfunction, linearity") {
    auto g = small_grid();
    RealField f = random_smooth_field(g, Parity::None, 3);
    std::vector<double> one(g->size(), 1.0);
    CHECK(rel_max_err(apply_multiplier(f, one), f) < 1e-14);

    // m1^2 applied to cos(x) on an Lx = pi grid returns cos(x)
    RealField cosx = fill(g, [](double x, double) { return std::cos(x); });
    std::vector<double> m1sq(g->size());
    std::vector<double> m2sq(g->size());
    std::vector<double> msum(g->size());
    for (int i = 0; i < g->nx(); ++i)
        for (int j = 0; j < g->ny(); ++j) {
            m1sq[g->idx(i, j)] = g->m1(i) * g->m1(i);
            m2sq[g->idx(i, j)] = g->m2(j) * g->m2(j);
            msum[g->idx(i, j)] = m1sq[g->idx(i, j)] + m2sq[g->idx(i, j)];
        }
    CHECK(rel_max_err(apply_multiplier(cosx, m1sq), cosx) < 1e-12);

    RealField lhs = apply_multiplier(f, msum);
    RealField rhs = apply_multiplier(f, m1sq) + apply_multiplier(f, m2sq);
    CHECK(rel_max_err(lhs, rhs) < 1e-12);

    std::vector<double> bad(g->size(), std::nan(""));
    CHECK_THROWS_AS(apply_multiplier(f, bad), NumericError);
}

TEST_CASE("real fields stay real through even multipliers") {
    auto g = small_grid();
    RealField f = random_smooth_field(g, Parity::None, 9);
    std::vector<double> sym(g->size());
    for (int i = 0; i < g->nx(); ++i)
        for (int j = 0; j < g->ny(); ++j)
            sym[g->idx(i, j)] = std::exp(-0.1 * (g->m1(i) * g->m1(i) + g->m2(j) * g->m2(j)));
    SpectralField s = apply_multiplier(transform(f), sym);
    CHECK(imag_residue(s) <= 1e-12 * max_abs(f));
}

TEST_CASE("derivative: sin -> cos, y-constant, product rule") {
    auto g = small_grid();
    RealField sinx = fill(g, [](double x, double) { return std::sin(x); });
    RealField cosx = fill(g, [](double x, double) { return std::cos(x); });
    CHECK(rel_max_err(derivative(sinx, 0, 1), cosx) <= 1e-12);

    RealField yconst = fill(g, [](double x, double) { return std::exp(std::cos(x)); });
    CHECK(max_abs(derivative(yconst, 1, 2)) <= 1e-12 * max_abs(yconst));

    RealField f = random_smooth_field(g, Parity::None, 11);
    RealField h = random_smooth_field(g, Parity::None, 12);
    RealField lhs = derivative(prod(f, h), 0, 1);
    RealField rhs = prod(derivative(f, 0, 1), h) + prod(f, derivative(h, 0, 1));
    CHECK(rel_max_err(lhs, rhs) <= 1e-10);
}

TEST_CASE("parity projection: orthogonality, idempotence, direct sum") {
    auto g = small_grid();
    RealField evenx = fill(g, [](double x, double y) { return std::cos(x) * std::cos(y); });
    CHECK(max_abs(project_parity(evenx, Parity::Hox)) <= 1e-15);

    RealField f = random_smooth_field(g, Parity::None, 5);
    RealField sum(g);
    for (Parity p : {Parity::Hox, Parity::He, Parity::Hoy, Parity::Hoo}) {
        RealField proj = project_parity(f, p);
        CHECK(rel_max_err(project_parity(proj, p), proj) < 1e-14);
        sum += proj;
    }
    CHECK(rel_max_err(sum, f) < 1e-14);
}

TEST_CASE("parity algebra under derivatives, even multipliers and products") {
    auto g = small_grid();
    RealField f = random_smooth_field(g, Parity::Hox, 21);
    CHECK(parity_defect(f, Parity::Hox) <= 1e-15);
    CHECK(parity_defect(derivative(f, 0, 1), Parity::He) <= 1e-13);
    CHECK(parity_defect(derivative(f, 1, 1), Parity::Hoo) <= 1e-13);
    CHECK(parity_defect(derivative(f, 0, 2), Parity::Hox) <= 1e-12);

    RealField h = random_smooth_field(g, Parity::He, 22);
    CHECK(parity_defect(prod(f, h), Parity::Hox) <= 1e-13);
    RealField o = random_smooth_field(g, Parity::Hoy, 23);
    CHECK(parity_defect(prod(f, o), Parity::Hoo) <= 1e-13);

    CHECK(parity_product(Parity::Hox, Parity::Hox) == Parity::He);
    CHECK(parity_derivative(Parity::Hox, 0, 1) == Parity::He);
    CHECK(parity_derivative(Parity::Hox, 1, 1) == Parity::Hoo);
}

TEST_CASE("antiderivative_x: cos -> sin, roundtrip, mixed symbol") {
    auto g = small_grid();
    RealField cosx = fill(g, [](double x, double) { return std::cos(x); });
    RealField sinx = fill(g, [](double x, double) { return std::sin(x); });
    CHECK(rel_max_err(antiderivative_x(cosx, 1), sinx) <= 1e-12);

    RealField f = random_smooth_field(g, Parity::Hox, 31);
    CHECK(rel_max_err(derivative(antiderivative_x(f, 1), 0, 1), f) <= 1e-11);

    // d1^-2 d2^2 has symbol m2^2/m1^2 = +1 at the (1,1) mode, so it fixes
    // sin(x)cos(y) on an Lx=Ly=pi grid
    RealField sc = fill(g, [](double x, double y) { return std::sin(x) * std::cos(y); });
    RealField got = antiderivative_x(derivative(sc, 1, 2), 2);
    CHECK(rel_max_err(got, sc) <= 1e-12);

    RealField even = fill(g, [](double x, double) { return std::cos(x) + 1.0; });
    CHECK_THROWS_AS(antiderivative_x(even, 1), PreconditionError);
}

TEST_CASE("dealiased product of band-limited fields is alias-free") {
    auto g = small_grid(M_PI, 48);
    // two modes just under the 1/3 cutoff: their product's high mode would
    // alias on a plain pointwise multiply
    RealField a = fill(g, [](double x, double) { return std::cos(15.0 * x); });
    RealField b = fill(g, [](double x, double) { return std::cos(14.0 * x); });
    SpectralField s = transform(prod(a, b));
    // only the difference mode survives the 2/3 rule (cutoff at |k| >= 16)
    for (int i = 0; i < g->nx(); ++i)
        for (int j = 0; j < g->ny(); ++j) {
            const double mag = std::abs(s.at(i, j));
            if (j == 0 && (i == 1 || i == g->nx() - 1))
                CHECK(mag == doctest::Approx(0.25).epsilon(1e-12));
            else
                CHECK(mag < 1e-13);
        }
}

TEST_CASE("WWL1 roundtrip preserves header and samples") {
    auto g = small_grid();
    RealField f = random_smooth_field(g, Parity::He, 77);
    const std::string path = "test_field.wwl1";
    write_wwl1(path, f);
    RealField back = read_wwl1(path);
    CHECK(back.grid->nx() == g->nx());
    CHECK(back.grid->eps() == doctest::Approx(g->eps()));
    CHECK(back.parity == Parity::He);
    CHECK(rel_max_err(back, f) == 0.0);
    std::remove(path.c_str());
}
