#pragma once

#include "wwl/field.hpp"

namespace wwl {

/// Precomputed real multiplier arrays over the wavenumber grid, plus the
/// derived constants A = sigma(1+eps^2) - 1/3 and c = 1/sqrt(1+eps^2).
/// All operators here act on fields sampled in the scaled coordinates; the
/// "unscaled" symbols (g0, helm, ...) use k = (eps*m1, eps^2*m2).
struct SymbolTable {
    GridPtr grid;
    std::vector<double> sigmaP;  // m1^2 + eps^2 m2^2
    std::vector<double> sigmaQ;  // 1 + (eps^2/3) sigmaP
    std::vector<double> kmag;    // |k| = eps*sqrt(sigmaP)
    std::vector<double> g0;      // |k| tanh|k|
    std::vector<double> l1;      // symbol of L1
    std::vector<double> l2;      // symbol of L2
    std::vector<double> helm;    // 1 + sigma eps^2 sigmaP
    double A = 0.0;
    double c = 0.0;
};

SymbolTable build_symbols(const GridPtr& grid);

/// Tail of the hyperbolic-tangent continued fraction starting at denominator
/// `first` (odd): z^2/(first + z^2/(first+2 + ...)). Positive for z > 0.
double tanh_cf_tail(double z, int first);

/// Inner factor of the L2 symbol, sigmaQ*sigmaG0 - eps^2*sigmaP expressed in
/// z = |k|: (1 + z^2/3) z tanh z - z^2. Direct evaluation cancels ~10 digits
/// near z = 0; this routine switches between a Taylor tail (z < 1e-2) and the
/// exact continued-fraction rearrangement z^4 d / (3 (3 + d + z^2)) with
/// d = tanh_cf_tail(z, 5).
double l2_smallk(double z);

/// Both branches of l2_smallk, exposed for the dual-branch agreement check.
double l2_smallk_series(double z);
double l2_smallk_direct(double z);

struct TanhBoundsReport {
    std::size_t samples = 0;
    double min_slack_upper = 0.0;  // min over samples of upper(x) - tanh(x)
    double min_slack_lower = 0.0;  // min over samples of tanh(x) - lower(x)
    double worst_x_upper = 0.0;
    double worst_x_lower = 0.0;
    bool ok = false;
};

/// Checks x(15+x^2)/(15+6x^2) > tanh x > (10x^3+105x)/(x^4+45x^2+105) at the
/// given samples. Slacks are computed from the exact continued-fraction tail
/// identities  upper - tanh = x^5 t7 / ((15+6x^2)(15+3t7+6x^2+t7 x^2))  and
/// tanh - lower = x^7 t9 / ((105+45x^2+x^4)(105+15t9+45x^2+6t9 x^2+x^4)),
/// which are positive term by term (no cancellation at small x).
TanhBoundsReport tanh_bounds_check(const std::vector<double>& samples);

struct L2EnvelopeReport {
    double C = 0.0;        // witness: l2 <= C eps^2 sigmaP^3 on the grid
    double c0 = 0.0;       // witness: l2 >= eps^-4 c0 |k|^5 for |k| >= 1
    double kmax_grid = 0.0;
    double kmax_checked = 0.0;  // radial check extends past the grid ladder
    double min_l2_offzero = 0.0;
    bool ok = false;
};

/// Exhibits finite envelope constants for the L2 symbol. C comes from the
/// grid maximum of l2 / (eps^2 sigmaP^3); c0 from radial samples of the
/// 1-D profile over |k| in [1, max(10, |k|max)].
L2EnvelopeReport l2_envelope_check(const SymbolTable& table);

}  // namespace wwl
