#include "wwl/symbols.hpp"

#include <algorithm>
#include <cmath>

namespace wwl {

SymbolTable build_symbols(const GridPtr& grid) {
    if (!(grid->sigma() > 1.0 / 3.0))
        throw ConfigError("build_symbols: sigma must exceed 1/3 (A > 0)");
    SymbolTable t;
    t.grid = grid;
    const double eps = grid->eps(), sigma = grid->sigma();
    const double e2 = eps * eps;
    t.A = sigma * (1.0 + e2) - 1.0 / 3.0;
    t.c = 1.0 / std::sqrt(1.0 + e2);
    const std::size_t n = grid->size();
    t.sigmaP.resize(n);
    t.sigmaQ.resize(n);
    t.kmag.resize(n);
    t.g0.resize(n);
    t.l1.resize(n);
    t.l2.resize(n);
    t.helm.resize(n);
    for (int i = 0; i < grid->nx(); ++i) {
        const double m1 = grid->m1(i);
        for (int j = 0; j < grid->ny(); ++j) {
            const double m2 = grid->m2(j);
            const std::size_t id = grid->idx(i, j);
            const double sp = m1 * m1 + e2 * m2 * m2;
            const double z = eps * std::sqrt(sp);
            t.sigmaP[id] = sp;
            t.sigmaQ[id] = 1.0 + e2 / 3.0 * sp;
            t.kmag[id] = z;
            t.g0[id] = z * std::tanh(z);
            t.l1[id] = t.A * m1 * m1 * m1 * m1 + m1 * m1 + (1.0 + e2) * m2 * m2 +
                       (2.0 * t.A + 1.0 / 3.0) * e2 * m1 * m1 * m2 * m2 +
                       sigma * (1.0 + e2) * e2 * e2 * m2 * m2 * m2 * m2;
            t.helm[id] = 1.0 + sigma * e2 * sp;
            // Operator definition: eps^-4 (1+eps^2)(1+sigma|k|^2)(Q G0 - eps^2 P).
            t.l2[id] = (1.0 + e2) * (1.0 + sigma * z * z) * l2_smallk(z) / (e2 * e2);
        }
    }
    return t;
}

double tanh_cf_tail(double z, int first) {
    if (z == 0.0) return 0.0;
    const double z2 = z * z;
    // Backward recurrence; depth grows with z so the truncated tail is below
    // double rounding for every |k| the grids produce.
    int depth = 24 + static_cast<int>(2.0 * z);
    double t = 0.0;
    for (int level = depth; level >= 0; --level) {
        const double den = static_cast<double>(first + 2 * level);
        t = z2 / (den + t);
    }
    return t;
}

double l2_smallk_series(double z) {
    const double z2 = z * z;
    // (1 + z^2/3) z (z^5/45 - 16 z^7/945 + z^9/105)
    const double tail = z2 * z2 * z * (1.0 / 45.0 + z2 * (-16.0 / 945.0 + z2 / 105.0));
    return (1.0 + z2 / 3.0) * z * tail;
}

double l2_smallk_direct(double z) {
    // (1+z^2/3) z tanh z - z^2 == z^4 d / (3 (3 + d + z^2)) with the positive
    // continued-fraction tail d = z^2/(5 + z^2/(7 + ...)); exact rearrangement,
    // stable for every z >= 0.
    const double z2 = z * z;
    const double d = tanh_cf_tail(z, 5);
    return z2 * z2 * d / (3.0 * (3.0 + d + z2));
}

double l2_smallk(double z) {
    if (z < 0.0) throw PreconditionError("l2_smallk: z must be nonnegative");
    if (z < 1e-2) return l2_smallk_series(z);
    return l2_smallk_direct(z);
}

TanhBoundsReport tanh_bounds_check(const std::vector<double>& samples) {
    TanhBoundsReport rep;
    rep.samples = samples.size();
    rep.min_slack_upper = std::numeric_limits<double>::infinity();
    rep.min_slack_lower = std::numeric_limits<double>::infinity();
    for (double x : samples) {
        if (!(x > 0.0)) throw PreconditionError("tanh_bounds_check: samples must be positive");
        const double x2 = x * x;
        // upper bound truncates the fraction after denominator 5; its defect is
        // carried by the tail t7 = x^2/(7 + x^2/(9 + ...)).
        const double t7 = tanh_cf_tail(x, 7);
        const double slack_up =
            x2 * x2 * x * t7 / ((15.0 + 6.0 * x2) * (15.0 + 3.0 * t7 + 6.0 * x2 + t7 * x2));
        // lower bound truncates after denominator 7; defect carried by t9.
        const double t9 = tanh_cf_tail(x, 9);
        const double d0 = 105.0 + 45.0 * x2 + x2 * x2;
        const double slack_lo =
            x2 * x2 * x2 * x * t9 / (d0 * (d0 + t9 * (15.0 + 6.0 * x2)));
        if (slack_up < rep.min_slack_upper) {
            rep.min_slack_upper = slack_up;
            rep.worst_x_upper = x;
        }
        if (slack_lo < rep.min_slack_lower) {
            rep.min_slack_lower = slack_lo;
            rep.worst_x_lower = x;
        }
        if (!(slack_up > 0.0) || !(slack_lo > 0.0))
            throw InvariantFailure("tanh bound violated at x = " + std::to_string(x));
    }
    rep.ok = rep.min_slack_upper > 0.0 && rep.min_slack_lower > 0.0;
    return rep;
}

L2EnvelopeReport l2_envelope_check(const SymbolTable& t) {
    L2EnvelopeReport rep;
    const GridPtr& g = t.grid;
    const double eps = g->eps(), sigma = g->sigma();
    const double e2 = eps * eps;
    double Cmax = 0.0, minl2 = std::numeric_limits<double>::infinity();
    double kmax = 0.0;
    for (int i = 0; i < g->nx(); ++i)
        for (int j = 0; j < g->ny(); ++j) {
            const std::size_t id = g->idx(i, j);
            if (i == 0 && j == 0) continue;
            const double sp = t.sigmaP[id];
            Cmax = std::max(Cmax, t.l2[id] / (e2 * sp * sp * sp));
            minl2 = std::min(minl2, t.l2[id]);
            kmax = std::max(kmax, t.kmag[id]);
        }
    rep.C = Cmax;
    rep.min_l2_offzero = minl2;
    rep.kmax_grid = kmax;

    // The lower envelope is a statement about the radial profile of the
    // symbol; sample it over [1, max(10, kmax)] so the witness exists even
    // when the grid ladder stays below |k| = 1.
    rep.kmax_checked = std::max(10.0, kmax);
    double c0 = std::numeric_limits<double>::infinity();
    const int nsamp = 4096;
    for (int s = 0; s <= nsamp; ++s) {
        const double z = 1.0 + (rep.kmax_checked - 1.0) * s / nsamp;
        const double l2eps4 = (1.0 + e2) * (1.0 + sigma * z * z) * l2_smallk(z);
        c0 = std::min(c0, l2eps4 / (z * z * z * z * z));
    }
    rep.c0 = c0;
    rep.ok = std::isfinite(rep.C) && rep.C > 0.0 && std::isfinite(rep.c0) &&
             rep.c0 > 0.0 && rep.min_l2_offzero > 0.0;
    if (!rep.ok) throw InvariantFailure("l2_envelope_check: no finite witness");
    return rep;
}

}  // namespace wwl
