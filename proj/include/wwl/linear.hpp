#pragma once

#include "wwl/lump.hpp"
#include "wwl/symbols.hpp"

namespace wwl {

/// Context for the modified linearized KP-I operator
///   L_eps = L1 + L2 - (3/c) d1( d1(q) d1(.) )
/// acting on the Hox class. q1 = d1 q is the coupling coefficient (He).
struct LinearContext {
    SymbolTable symbols;
    RealField q1;
    double tol = 1e-10;
    int maxiter = 600;

    std::vector<double> lsym;      // l1 + l2
    std::vector<double> lsym_inv;  // 1/(l1 + l2), zero mode pinned

    LinearContext(SymbolTable syms, RealField q1_, double tol_ = 1e-10, int maxiter_ = 600);
};

/// Full operator application; phi must carry Hox parity.
RealField apply_Leps(const LinearContext& ctx, const RealField& phi);

struct LinearSolveInfo {
    int iterations = 0;
    double residual = 0.0;  // ||L phi - rhs||_L2 / ||rhs||_L2
    std::vector<double> history;
};

/// Preconditioned Krylov (BiCGSTAB on the multiplier-preconditioned operator)
/// with Hox re-projection each step. Throws IterationFailure carrying the
/// residual history on stagnation.
RealField solve_Leps(const LinearContext& ctx, const RealField& rhs,
                     LinearSolveInfo* info = nullptr);

/// Power-iteration estimate of the spectral radius of the preconditioned
/// off-diagonal part K = P^-1 (3/c) d1(q1 d1 .) on the Hox class.
double coupling_spectral_radius(const LinearContext& ctx, int iters = 40,
                                std::uint64_t seed = 7);

struct EigenReport {
    double lambda1 = 0.0;          // lowest eigenvalue of the lump Hessian
    RealField phi0;                // its eigenfunction (He, zero x-mean)
    int n_negative = 0;            // negatives among the lowest window
    double residual = 0.0;         // ||A phi0 - lambda1 phi0|| / |lambda1|
    std::vector<double> eigenvalues;  // lowest window, ascending
    bool bound_state = true;       // false when nothing drops below the band
};

/// Spectrum bottom of the operator  -A d1^2 + 1 + (1+eps^2) d1^-2 d2^2 + (3/c) d1(q)
/// restricted to even-even fields with vanishing m1 = 0 modes (the sign
/// convention with positive free symbol A m1^2 + 1 + (1+eps^2) m2^2/m1^2, so
/// the lump's unique bound state appears as the unique negative eigenvalue).
/// LOBPCG with the inverse free symbol as preconditioner.
EigenReport eig_L(const LumpParams& p, const GridPtr& grid, int nwant = 10,
                  double tol = 1e-9, int maxiter = 400, std::uint64_t seed = 11,
                  const RealField* q1_override = nullptr);

/// Dense brute-force spectrum of the same restricted operator, assembled in
/// the even-even cosine basis (Nyquist rows excluded). Returns the lowest
/// `nwant` eigenvalues, ascending.
std::vector<double> eig_dense_oracle(const LumpParams& p, const GridPtr& grid, int nwant = 10);

}  // namespace wwl
