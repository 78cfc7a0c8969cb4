#pragma once

#include <cmath>

#include "wwl/spectral.hpp"

namespace wwl::testing {

inline GridPtr small_grid(double L = M_PI, int N = 32, double eps = 0.5,
                          double sigma = 1.0) {
    return Grid::create(L, L, N, N, eps, sigma);
}

inline GridPtr desk_grid(int N = 128, double L = 60.0, double eps = 0.1,
                         double sigma = 1.0) {
    return Grid::create(L, L, N, N, eps, sigma);
}

/// Fills a field from a callable f(x, y).
template <typename F>
RealField fill(const GridPtr& g, F&& f, Parity p = Parity::None) {
    RealField out(g, p);
    for (int i = 0; i < g->nx(); ++i)
        for (int j = 0; j < g->ny(); ++j) out.at(i, j) = f(g->x(i), g->y(j));
    return out;
}

inline double rel_max_err(const RealField& got, const RealField& want) {
    double scale = max_abs(want);
    if (scale == 0.0) scale = 1.0;
    return max_abs(got - want) / scale;
}

inline double rel_l2_err(const RealField& got, const RealField& want) {
    double scale = l2_grid(want);
    if (scale == 0.0) scale = 1.0;
    return l2_grid(got - want) / scale;
}

}  // namespace wwl::testing
