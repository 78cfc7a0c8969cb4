#pragma once

#include "wwl/field.hpp"

namespace wwl {

/// Norm tags: the Sobolev-type ladders of the linear theory (a, b, c), the
/// nonlinear-solve norms (star family, h, F5), plus plain L2/Linf/L4/L43
/// quadrature norms.
enum class NormTag {
    A,
    B,
    C,
    Star,
    StarStar,
    StarStarStar,
    H,
    F5,
    L2,
    Linf,
    L4,
    L43,
};

NormTag norm_tag_from_name(const std::string& name);
std::string norm_tag_name(NormTag t);

/// Evaluates the requested norm: derivative ladders spectrally through
/// sigmaP-powers, L^p by rectangle quadrature on the uniform grid, L^inf as
/// the collocation max. The eps entering nabla_eps weights comes from the
/// field's grid.
double norm(const RealField& f, NormTag tag);
double norm(const RealField& f, const std::string& tag);

/// ||nabla_eps^m f||_L2 and the pointwise magnitude |nabla_eps^m f| field
/// (used for the weighted sup-norm pieces of the star/h ladders).
double grad_eps_l2(const RealField& f, int order);
RealField grad_eps_mag(const RealField& f, int order);

}  // namespace wwl
