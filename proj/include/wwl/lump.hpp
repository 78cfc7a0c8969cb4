#pragma once

#include "wwl/field.hpp"

namespace wwl {

/// Parameters of the closed-form lump family. eps = 0 selects the limiting
/// profile; grids keep their own (positive) eps for the Fourier ladders.
struct LumpParams {
    double eps;
    double sigma;
    double A;  // sigma (1 + eps^2) - 1/3
    double c;  // 1 / sqrt(1 + eps^2)

    LumpParams(double eps_, double sigma_);
};

/// Lump profile on the torus: the closed form periodized exactly through its
/// analytic Fourier transform (Poisson summation). Hox parity.
RealField lump_profile(const LumpParams& p, const GridPtr& grid);

/// Raw pointwise evaluation of the closed form (the R^2 object restricted to
/// the box); differs from lump_profile by the O(L^-2) image tail.
RealField lump_closed_form(const LumpParams& p, const GridPtr& grid);

struct LumpDerivatives {
    RealField qx, qy;        // first order
    RealField qxx, qxy, qyy; // second order
};

/// Analytic partial derivatives of the rational closed form (quotient rule),
/// independent of the spectral differentiation path.
LumpDerivatives lump_derivatives(const LumpParams& p, const GridPtr& grid);

/// Left-hand side of the scaled lump equation
///   A qxxxx - qxx - (1+eps^2) qyy - (3/2c) d_x((d_x q)^2),
/// evaluated spectrally with the dealiased square.
RealField kpi_residual(const RealField& q, const LumpParams& p);

struct PetviashviliResult {
    RealField u;  // the converged d_x q
    RealField q;  // antiderivative, Hox
    int iterations = 0;
    double residual = 0.0;       // ||M u + (3/2c) u^2||_L2 / ||u||_L2
    double gamma_final = 0.0;    // stabilizing factor at convergence
    std::vector<double> history; // residual per iteration
};

/// Independent oracle for the lump: Petviashvili iteration on
/// M u = -(3/2c) u^2 with symbol A m1^2 + 1 + (1+eps^2) m2^2/m1^2
/// (m1 = 0 modes pinned to zero), stabilizing exponent 2.
/// seed_sign = -1 flips the initial guess.
PetviashviliResult lump_petviashvili(const LumpParams& p, const GridPtr& grid,
                                     double tol = 1e-9, int maxiter = 500,
                                     int seed_sign = +1);

}  // namespace wwl
