#include "wwl/field.hpp"

#include <cmath>

namespace wwl {

std::string parity_name(Parity p) {
    switch (p) {
        case Parity::None: return "none";
        case Parity::Hox: return "Hox";
        case Parity::He: return "He";
        case Parity::Hoy: return "Hoy";
        case Parity::Hoo: return "Hoo";
    }
    return "none";
}

Parity parity_from_name(const std::string& s) {
    if (s == "Hox") return Parity::Hox;
    if (s == "He") return Parity::He;
    if (s == "Hoy") return Parity::Hoy;
    if (s == "Hoo") return Parity::Hoo;
    if (s == "none") return Parity::None;
    throw ConfigError("unknown parity tag: " + s);
}

namespace {
// (sx, sy) with s = -1 for odd, +1 for even.
inline void parity_signs(Parity p, int& sx, int& sy) {
    switch (p) {
        case Parity::Hox: sx = -1; sy = +1; break;
        case Parity::He: sx = +1; sy = +1; break;
        case Parity::Hoy: sx = +1; sy = -1; break;
        case Parity::Hoo: sx = -1; sy = -1; break;
        default: sx = 0; sy = 0; break;
    }
}

inline Parity parity_from_signs(int sx, int sy) {
    if (sx == -1 && sy == +1) return Parity::Hox;
    if (sx == +1 && sy == +1) return Parity::He;
    if (sx == +1 && sy == -1) return Parity::Hoy;
    if (sx == -1 && sy == -1) return Parity::Hoo;
    return Parity::None;
}
}  // namespace

Parity parity_product(Parity a, Parity b) {
    if (a == Parity::None || b == Parity::None) return Parity::None;
    int ax, ay, bx, by;
    parity_signs(a, ax, ay);
    parity_signs(b, bx, by);
    return parity_from_signs(ax * bx, ay * by);
}

Parity parity_derivative(Parity p, int axis, int order) {
    if (p == Parity::None || order % 2 == 0) return p;
    int sx, sy;
    parity_signs(p, sx, sy);
    if (axis == 0) sx = -sx;
    else sy = -sy;
    return parity_from_signs(sx, sy);
}

namespace {
inline void check_same(const RealField& a, const RealField& b) {
    if (!a.grid || !b.grid || !a.grid->same_box(*b.grid))
        throw ConfigError("field arithmetic: grids do not match");
}
}  // namespace

RealField operator+(const RealField& a, const RealField& b) {
    check_same(a, b);
    RealField r = a;
    for (std::size_t i = 0; i < r.v.size(); ++i) r.v[i] += b.v[i];
    r.parity = (a.parity == b.parity) ? a.parity : Parity::None;
    return r;
}

RealField operator-(const RealField& a, const RealField& b) {
    check_same(a, b);
    RealField r = a;
    for (std::size_t i = 0; i < r.v.size(); ++i) r.v[i] -= b.v[i];
    r.parity = (a.parity == b.parity) ? a.parity : Parity::None;
    return r;
}

RealField operator*(double s, const RealField& a) {
    RealField r = a;
    for (double& x : r.v) x *= s;
    return r;
}

RealField& operator+=(RealField& a, const RealField& b) {
    check_same(a, b);
    for (std::size_t i = 0; i < a.v.size(); ++i) a.v[i] += b.v[i];
    if (a.parity != b.parity) a.parity = Parity::None;
    return a;
}

RealField& operator-=(RealField& a, const RealField& b) {
    check_same(a, b);
    for (std::size_t i = 0; i < a.v.size(); ++i) a.v[i] -= b.v[i];
    if (a.parity != b.parity) a.parity = Parity::None;
    return a;
}

RealField& operator*=(RealField& a, double s) {
    for (double& x : a.v) x *= s;
    return a;
}

double max_abs(const RealField& f) {
    double m = 0.0;
    for (double x : f.v) m = std::max(m, std::abs(x));
    return m;
}

double l2_grid(const RealField& f) {
    double s = 0.0;
    for (double x : f.v) s += x * x;
    return std::sqrt(s * f.grid->cell_area());
}

}  // namespace wwl
