#pragma once

#include "wwl/field.hpp"

namespace wwl {

/// Forward transform to true Fourier coefficients w.r.t. e^{i(m1 x + m2 y)}.
SpectralField transform(const RealField& f);

/// Inverse transform; drops the imaginary part (tracked separately below).
RealField inverse(const SpectralField& s, Parity parity = Parity::None);

/// Max |imag| left behind by inverse(); diagnostic for real-multiplier chains.
double imag_residue(const SpectralField& s);

/// coeff_out(m) = symbol(m) * coeff_in(m). Symbol must be real on the grid
/// layout; NaN entries raise NumericError.
SpectralField apply_multiplier(const SpectralField& s, const std::vector<double>& symbol);
RealField apply_multiplier(const RealField& f, const std::vector<double>& symbol);

/// Spectral partial derivative in the scaled coordinate (axis 0 = x, 1 = y).
RealField derivative(const RealField& f, int axis, int order = 1);

/// Exact parity projection (average over grid reflections); idempotent.
RealField project_parity(const RealField& f, Parity p);

/// Max deviation of f from the given parity class at grid points.
double parity_defect(const RealField& f, Parity p);

/// Spectral antiderivative in x: division by (i m1)^order, m1 = 0 pinned.
/// Requires the m1 = 0 content to be below 1e-10 * ||f||.
RealField antiderivative_x(const RealField& f, int order = 1);

/// Zero the top third of each wavenumber axis (2/3 rule).
void dealias(SpectralField& s);
RealField dealias(const RealField& f);

/// Dealiased pointwise product: both inputs and the result truncated by the
/// 2/3 rule, so quadratic products are alias-free. This is the single product
/// primitive used by every nonlinearity in the artifact.
RealField prod(const RealField& a, const RealField& b);

/// sum |f|^2 dx dy computed in collocation space.
double parseval_grid(const RealField& f);
/// sum |c(m)|^2 * (2Lx)(2Ly) over modes.
double parseval_spec(const SpectralField& s);

/// Random smooth field for probe/property tests: Gaussian-decaying spectrum
/// with seeded phases, projected to the requested parity, sup-norm 1.
RealField random_smooth_field(const GridPtr& g, Parity p, std::uint64_t seed,
                              double decay_frac = 0.125);

}  // namespace wwl
