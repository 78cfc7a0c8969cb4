#pragma once

#include <memory>

#include "wwl/field.hpp"

namespace wwl {

/// Surface pair in depth units: eta = eps^2 h is the elevation over the
/// bottom at x3 = -1, xi the surface potential trace. Both are sampled on
/// the scaled grid; horizontal derivatives act through k = (eps m1, eps^2 m2).
struct SurfaceState {
    RealField eta;
    RealField xi;
};

struct OracleConfig {
    int Nz = 16;          // Chebyshev levels in the vertical (Nz+1 points)
    double tol = 1e-11;   // fixed-point tolerance on the update, relative to ||xi||_inf
    int maxiter = 200;
};

enum class DnoMode { Exact, SeriesOnly };

/// Flat Dirichlet-Neumann operator |k| tanh|k|.
RealField g0_apply(const RealField& xi);

/// First expansion term -G0(eta G0 xi) - div(eta grad xi), dealiased products,
/// derivatives in the unscaled horizontal variables.
RealField g1_apply(const RealField& eta, const RealField& xi);

/// Second expansion term -1/2 |D|^2(eta^2 G0 xi) - 1/2 G0(eta^2 |D|^2 xi)
/// + G0(eta G0(eta G0 xi)).
RealField g2_apply(const RealField& eta, const RealField& xi);

/// Transformed-domain Laplace solver for the full G(eta)xi: maps the fluid
/// layer {-1 < x3 < eta} to s in [0,1] via x3 = -1 + s(1+eta), solves by
/// Fourier collocation in the horizontal and Chebyshev collocation in s with
/// the flat solver as preconditioner, and evaluates
/// Phi_x3 - grad eta . grad Phi at the surface. Independent of g1/g2.
class DnoOracle {
  public:
    DnoOracle(GridPtr grid, OracleConfig cfg = {});
    ~DnoOracle();
    DnoOracle(DnoOracle&&) noexcept;
    DnoOracle& operator=(DnoOracle&&) noexcept;

    RealField apply(const SurfaceState& state) const;
    const OracleConfig& config() const;
    const GridPtr& grid() const;

  private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

struct DnoRemainders {
    RealField r1;  // G - G0
    RealField r2;  // r1 - G1
    RealField r3;  // r2 - G2
};

/// Remainders against the oracle (Exact) or the truncated series itself
/// (SeriesOnly: r1 = G1+G2, r2 = G2, r3 = 0).
DnoRemainders remainders(const SurfaceState& state, const DnoOracle& oracle,
                         DnoMode mode = DnoMode::Exact);

}  // namespace wwl
