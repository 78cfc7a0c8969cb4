#include "wwl/norms.hpp"

#include <cmath>

#include "wwl/spectral.hpp"

namespace wwl {

NormTag norm_tag_from_name(const std::string& s) {
    if (s == "a") return NormTag::A;
    if (s == "b") return NormTag::B;
    if (s == "c") return NormTag::C;
    if (s == "star" || s == "*") return NormTag::Star;
    if (s == "starstar" || s == "**") return NormTag::StarStar;
    if (s == "starstarstar" || s == "***") return NormTag::StarStarStar;
    if (s == "h") return NormTag::H;
    if (s == "F5" || s == "f5") return NormTag::F5;
    if (s == "L2" || s == "l2") return NormTag::L2;
    if (s == "Linf" || s == "linf") return NormTag::Linf;
    if (s == "L4" || s == "l4") return NormTag::L4;
    if (s == "L43" || s == "l43") return NormTag::L43;
    throw ConfigError("unknown norm tag: " + s);
}

std::string norm_tag_name(NormTag t) {
    switch (t) {
        case NormTag::A: return "a";
        case NormTag::B: return "b";
        case NormTag::C: return "c";
        case NormTag::Star: return "star";
        case NormTag::StarStar: return "starstar";
        case NormTag::StarStarStar: return "starstarstar";
        case NormTag::H: return "h";
        case NormTag::F5: return "F5";
        case NormTag::L2: return "L2";
        case NormTag::Linf: return "Linf";
        case NormTag::L4: return "L4";
        case NormTag::L43: return "L43";
    }
    return "?";
}

namespace {
double lp_quadrature(const RealField& f, double p) {
    double s = 0.0;
    for (double x : f.v) s += std::pow(std::abs(x), p);
    return std::pow(s * f.grid->cell_area(), 1.0 / p);
}

// sqrt( sum w(m)^order |fhat|^2 box ) with w = m1^2 + scale^2 m2^2.
double ladder_l2(const RealField& f, int order, double scale) {
    SpectralField s = transform(f);
    const GridPtr& g = f.grid;
    double acc = 0.0;
    for (int i = 0; i < g->nx(); ++i) {
        const double m1 = g->m1(i);
        for (int j = 0; j < g->ny(); ++j) {
            const double m2 = g->m2(j);
            const double w = m1 * m1 + scale * scale * m2 * m2;
            acc += std::pow(w, order) * std::norm(s.at(i, j));
        }
    }
    return std::sqrt(acc * g->box_area());
}

double axis_deriv_l2(const RealField& f, int axis) {
    SpectralField s = transform(f);
    const GridPtr& g = f.grid;
    double acc = 0.0;
    for (int i = 0; i < g->nx(); ++i)
        for (int j = 0; j < g->ny(); ++j) {
            const double m = axis == 0 ? g->m1(i) : g->m2(j);
            acc += m * m * std::norm(s.at(i, j));
        }
    return std::sqrt(acc * g->box_area());
}

RealField grad_mag(const RealField& f, int order, double scale) {
    // |grad^m f|^2 = sum_j binom(m, j) (d1^j (scale*d2)^{m-j} f)^2 pointwise;
    // integrates to the sigmaP^m ladder.
    const GridPtr& g = f.grid;
    RealField acc(g, Parity::None);
    double binom = 1.0;
    for (int j = 0; j <= order; ++j) {
        RealField d = f;
        if (j > 0) d = derivative(d, 0, j);
        if (order - j > 0) d = derivative(d, 1, order - j);
        const double w = binom * std::pow(scale, 2 * (order - j));
        for (std::size_t i = 0; i < acc.v.size(); ++i) acc.v[i] += w * d.v[i] * d.v[i];
        binom *= double(order - j) / double(j + 1);
    }
    for (double& x : acc.v) x = std::sqrt(x);
    return acc;
}
}  // namespace

double grad_eps_l2(const RealField& f, int order) {
    return ladder_l2(f, order, f.grid->eps());
}

RealField grad_eps_mag(const RealField& f, int order) {
    return grad_mag(f, order, f.grid->eps());
}

double norm(const RealField& f, NormTag tag) {
    const double eps = f.grid->eps();
    switch (tag) {
        case NormTag::L2: return lp_quadrature(f, 2.0);
        case NormTag::L4: return lp_quadrature(f, 4.0);
        case NormTag::L43: return lp_quadrature(f, 4.0 / 3.0);
        case NormTag::Linf: return max_abs(f);
        case NormTag::A: {
            const double g5 = grad_eps_l2(f, 5);
            const double g4 = grad_eps_l2(f, 4);
            const double g3 = grad_eps_l2(f, 3);
            const double p2 = ladder_l2(f, 2, 1.0);
            const double p1 = ladder_l2(f, 1, 1.0);
            return std::sqrt(eps * eps * g5 * g5 + g4 * g4 + g3 * g3 + p2 * p2 + p1 * p1);
        }
        case NormTag::B: return lp_quadrature(f, 2.0) + axis_deriv_l2(f, 0);
        case NormTag::C: return lp_quadrature(f, 2.0) + axis_deriv_l2(f, 1);
        case NormTag::Star: {
            // p = 4 for the grad-f Lp piece.
            double n = norm(f, NormTag::A) + lp_quadrature(f, 4.0) + max_abs(f);
            n += lp_quadrature(grad_mag(f, 1, 1.0), 4.0);
            n += std::sqrt(eps) * max_abs(grad_eps_mag(f, 1));
            n += std::sqrt(eps) * max_abs(grad_eps_mag(f, 2));
            n += std::pow(eps, 1.5) * max_abs(grad_eps_mag(f, 3));
            return n;
        }
        case NormTag::StarStar: return norm(f, NormTag::B) + lp_quadrature(f, 4.0 / 3.0);
        case NormTag::StarStarStar: return norm(f, NormTag::C) + lp_quadrature(f, 4.0 / 3.0);
        case NormTag::H: {
            double n = lp_quadrature(f, 2.0);
            n += grad_eps_l2(f, 1) + grad_eps_l2(f, 2) + grad_eps_l2(f, 3);
            n += eps * grad_eps_l2(f, 4) + eps * eps * grad_eps_l2(f, 5) +
                 eps * eps * eps * grad_eps_l2(f, 6);
            n += max_abs(f);
            n += std::sqrt(eps) * max_abs(grad_eps_mag(f, 1));
            n += std::pow(eps, 1.5) * max_abs(grad_eps_mag(f, 2));
            n += std::pow(eps, 2.5) * max_abs(grad_eps_mag(f, 3));
            n += std::pow(eps, 3.5) * max_abs(grad_eps_mag(f, 4));
            return n;
        }
        case NormTag::F5: {
            double n = max_abs(f) + lp_quadrature(f, 2.0);
            n += grad_eps_l2(f, 1) + grad_eps_l2(f, 2) + grad_eps_l2(f, 3);
            n += eps * grad_eps_l2(f, 4);
            return n;
        }
    }
    throw ConfigError("norm: unknown tag");
}

double norm(const RealField& f, const std::string& tag) {
    return norm(f, norm_tag_from_name(tag));
}

}  // namespace wwl
