#include "wwl/spectral.hpp"

#include <cmath>
#include <random>

namespace wwl {

namespace {
// Sample 0 sits at x = -Lx, so coefficients pick up the phase (-1)^{i+j}
// relative to the raw FFT of the sample array.
inline double origin_phase(int i, int j) { return ((i + j) & 1) ? -1.0 : 1.0; }
}  // namespace

SpectralField transform(const RealField& f) {
    SpectralField s(f.grid);
    const auto n = f.grid->size();
    for (std::size_t i = 0; i < n; ++i) s.c[i] = f.v[i];
    f.grid->fft_forward(s.c.data());
    const double inv = 1.0 / static_cast<double>(n);
    const int ny = f.grid->ny();
    for (int i = 0; i < f.grid->nx(); ++i)
        for (int j = 0; j < ny; ++j) s.c[f.grid->idx(i, j)] *= origin_phase(i, j) * inv;
    return s;
}

RealField inverse(const SpectralField& s, Parity parity) {
    std::vector<cplx> buf = s.c;
    const int ny = s.grid->ny();
    for (int i = 0; i < s.grid->nx(); ++i)
        for (int j = 0; j < ny; ++j) buf[s.grid->idx(i, j)] *= origin_phase(i, j);
    s.grid->fft_backward(buf.data());
    RealField f(s.grid, parity);
    for (std::size_t i = 0; i < buf.size(); ++i) f.v[i] = buf[i].real();
    return f;
}

double imag_residue(const SpectralField& s) {
    std::vector<cplx> buf = s.c;
    const int ny = s.grid->ny();
    for (int i = 0; i < s.grid->nx(); ++i)
        for (int j = 0; j < ny; ++j) buf[s.grid->idx(i, j)] *= origin_phase(i, j);
    s.grid->fft_backward(buf.data());
    double m = 0.0;
    for (const cplx& z : buf) m = std::max(m, std::abs(z.imag()));
    return m;
}

SpectralField apply_multiplier(const SpectralField& s, const std::vector<double>& symbol) {
    if (symbol.size() != s.c.size())
        throw ConfigError("apply_multiplier: symbol size does not match grid");
    SpectralField r = s;
    for (std::size_t i = 0; i < r.c.size(); ++i) {
        if (std::isnan(symbol[i])) throw NumericError("apply_multiplier: NaN in symbol");
        r.c[i] *= symbol[i];
    }
    return r;
}

RealField apply_multiplier(const RealField& f, const std::vector<double>& symbol) {
    RealField r = inverse(apply_multiplier(transform(f), symbol), f.parity);
    return r;
}

RealField derivative(const RealField& f, int axis, int order) {
    if (order < 1) throw PreconditionError("derivative: order must be >= 1");
    SpectralField s = transform(f);
    const int nx = f.grid->nx(), ny = f.grid->ny();
    for (int i = 0; i < nx; ++i) {
        for (int j = 0; j < ny; ++j) {
            const double m = axis == 0 ? f.grid->m1(i) : f.grid->m2(j);
            cplx factor = std::pow(cplx(0.0, m), order);
            s.c[f.grid->idx(i, j)] *= factor;
        }
    }
    return inverse(s, parity_derivative(f.parity, axis, order));
}

RealField project_parity(const RealField& f, Parity p) {
    if (p == Parity::None) {
        RealField r = f;
        r.parity = Parity::None;
        return r;
    }
    int sx = (p == Parity::Hox || p == Parity::Hoo) ? -1 : 1;
    int sy = (p == Parity::Hoy || p == Parity::Hoo) ? -1 : 1;
    const int nx = f.grid->nx(), ny = f.grid->ny();
    RealField r(f.grid, p);
    for (int i = 0; i < nx; ++i) {
        const int ir = f.grid->reflect_x(i);
        for (int j = 0; j < ny; ++j) {
            const int jr = f.grid->reflect_y(j);
            r.at(i, j) = 0.25 * (f.at(i, j) + sx * f.at(ir, j) + sy * f.at(i, jr) +
                                 sx * sy * f.at(ir, jr));
        }
    }
    return r;
}

double parity_defect(const RealField& f, Parity p) {
    RealField proj = project_parity(f, p);
    double m = 0.0;
    for (std::size_t i = 0; i < f.v.size(); ++i)
        m = std::max(m, std::abs(f.v[i] - proj.v[i]));
    return m;
}

RealField antiderivative_x(const RealField& f, int order) {
    if (order != 1 && order != 2)
        throw PreconditionError("antiderivative_x: order must be 1 or 2");
    SpectralField s = transform(f);
    const int nx = f.grid->nx(), ny = f.grid->ny();
    double zero_col = 0.0, total = 0.0;
    for (int i = 0; i < nx; ++i)
        for (int j = 0; j < ny; ++j) {
            const double a = std::norm(s.at(i, j));
            total += a;
            if (i == 0) zero_col += a;
        }
    if (zero_col > 1e-20 * total && std::sqrt(zero_col) > 1e-10 * std::sqrt(total))
        throw PreconditionError("antiderivative_x: nonzero m1 = 0 content");
    for (int i = 0; i < nx; ++i) {
        for (int j = 0; j < ny; ++j) {
            if (i == 0) {
                s.at(i, j) = 0.0;
                continue;
            }
            cplx factor = std::pow(cplx(0.0, f.grid->m1(i)), order);
            s.at(i, j) /= factor;
        }
    }
    return inverse(s, parity_derivative(f.parity, 0, order));
}

void dealias(SpectralField& s) {
    const auto& keep = s.grid->dealias_mask();
    for (std::size_t i = 0; i < s.c.size(); ++i)
        if (!keep[i]) s.c[i] = 0.0;
}

RealField dealias(const RealField& f) {
    SpectralField s = transform(f);
    dealias(s);
    return inverse(s, f.parity);
}

RealField prod(const RealField& a, const RealField& b) {
    if (!a.grid->same_box(*b.grid)) throw ConfigError("prod: grids do not match");
    RealField da = dealias(a), db = dealias(b);
    RealField r(a.grid, parity_product(a.parity, b.parity));
    for (std::size_t i = 0; i < r.v.size(); ++i) r.v[i] = da.v[i] * db.v[i];
    return dealias(r);
}

double parseval_grid(const RealField& f) {
    double s = 0.0;
    for (double x : f.v) s += x * x;
    return s * f.grid->cell_area();
}

double parseval_spec(const SpectralField& s) {
    double t = 0.0;
    for (const cplx& z : s.c) t += std::norm(z);
    return t * s.grid->box_area();
}

RealField random_smooth_field(const GridPtr& g, Parity p, std::uint64_t seed,
                              double decay_frac) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    SpectralField s(g);
    const double m1c = decay_frac * M_PI / g->lx() * g->nx();
    const double m2c = decay_frac * M_PI / g->ly() * g->ny();
    for (int i = 0; i < g->nx(); ++i)
        for (int j = 0; j < g->ny(); ++j) {
            const double a1 = g->m1(i) / m1c, a2 = g->m2(j) / m2c;
            const double w = std::exp(-(a1 * a1 + a2 * a2));
            s.at(i, j) = cplx(gauss(rng), gauss(rng)) * w;
        }
    RealField f = inverse(s);
    f = project_parity(f, p);
    const double m = max_abs(f);
    if (m > 0.0) f *= 1.0 / m;
    return f;
}

}  // namespace wwl
