#pragma once

#include <algorithm>
#include <cmath>

#include "nlsg/core.hpp"

namespace nlsg {

inline double cross(cplx u, cplx v) { return u.real() * v.imag() - u.imag() * v.real(); }

inline double dist_to_segment(cplx z, cplx a, cplx b) {
    const cplx d = b - a;
    const double L2 = std::norm(d);
    if (L2 == 0) return std::abs(z - a);
    const double u = std::clamp(std::real((z - a) * std::conj(d)) / L2, 0.0, 1.0);
    return std::abs(z - (a + u * d));
}

// closed triangle test; differences are formed pairwise so tiny triangles near
// a common base stay exact
inline bool in_triangle(const XPt& z, const XPt& a, const XPt& v, const XPt& b) {
    const double d1 = cross(v - a, z - a);
    const double d2 = cross(b - v, z - v);
    const double d3 = cross(a - b, z - b);
    const bool neg = d1 < 0 || d2 < 0 || d3 < 0;
    const bool pos = d1 > 0 || d2 > 0 || d3 > 0;
    return !(neg && pos);
}

}  // namespace nlsg
