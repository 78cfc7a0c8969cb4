#pragma once

#include <string>
#include <vector>

#include "wwl/grid.hpp"

namespace wwl {

/// Parity classes of Section "symmetry" usage: Hox is odd in x / even in y,
/// He even in both, Hoy even in x / odd in y, Hoo odd in both.
enum class Parity : std::uint8_t { None = 0, Hox = 1, He = 2, Hoy = 3, Hoo = 4 };

std::string parity_name(Parity p);
Parity parity_from_name(const std::string& s);

/// Parity of a pointwise product / of a derivative.
Parity parity_product(Parity a, Parity b);
Parity parity_derivative(Parity p, int axis, int order);

/// Scalar field in collocation representation (row-major, x slow axis).
struct RealField {
    GridPtr grid;
    std::vector<double> v;
    Parity parity = Parity::None;

    RealField() = default;
    explicit RealField(GridPtr g, Parity p = Parity::None)
        : grid(std::move(g)), v(grid->size(), 0.0), parity(p) {}

    double& at(int i, int j) { return v[grid->idx(i, j)]; }
    double at(int i, int j) const { return v[grid->idx(i, j)]; }
};

/// Scalar field in coefficient representation: f(x,y) = sum c(m) e^{i(m1 x + m2 y)}.
struct SpectralField {
    GridPtr grid;
    std::vector<cplx> c;

    SpectralField() = default;
    explicit SpectralField(GridPtr g) : grid(std::move(g)), c(grid->size(), cplx{}) {}

    cplx& at(int i, int j) { return c[grid->idx(i, j)]; }
    cplx at(int i, int j) const { return c[grid->idx(i, j)]; }
};

// Elementwise arithmetic on matching grids.
RealField operator+(const RealField& a, const RealField& b);
RealField operator-(const RealField& a, const RealField& b);
RealField operator*(double s, const RealField& a);
RealField& operator+=(RealField& a, const RealField& b);
RealField& operator-=(RealField& a, const RealField& b);
RealField& operator*=(RealField& a, double s);

double max_abs(const RealField& f);
double l2_grid(const RealField& f);  // sqrt(sum f^2 * dx*dy)

}  // namespace wwl
