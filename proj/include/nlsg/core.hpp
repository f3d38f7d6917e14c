#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace nlsg {

using cplx = std::complex<double>;
inline constexpr cplx I{0.0, 1.0};
inline constexpr double PI = 3.141592653589793238462643383279502884;

class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

class ConvergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Params {
    double x = 0.0;
    double t = 0.0;
    double mu = 1.0;
    cplx T;  // i*sqrt(1 - mu^2/4)

    double absT() const { return T.imag(); }
};

// Throws DomainError unless 0 < mu < 2 and t >= 0.
Params make_params(double x, double t, double mu);

// A point written as base + off, base real. Differences between points sharing a
// base are formed from the offsets, so points exponentially close to +-mu/2 keep
// full relative precision.
struct XPt {
    double base = 0.0;
    cplx off;

    XPt() = default;
    XPt(cplx z) : off(z) {}  // NOLINT: implicit on purpose
    XPt(double b, cplx o) : base(b), off(o) {}

    cplx value() const { return base + off; }
    XPt conj() const { return {base, std::conj(off)}; }
    double imag() const { return off.imag(); }
};

// a - b, exact in the offsets when the bases agree
inline cplx operator-(const XPt& a, const XPt& b) {
    if (a.base == b.base) return a.off - b.off;
    return (a.base - b.base) + (a.off - b.off);
}
inline cplx operator-(const XPt& a, cplx b) { return (a.base - b.real() + a.off.real()) + I * (a.off.imag() - b.imag()); }
inline cplx operator-(cplx a, const XPt& b) { return -(b - a); }

// Upper-half-plane branch points. alpha0 and alpha4 also keep their offsets from
// +mu/2 and -mu/2, which shrink like exp(-c t) at large t.
struct BranchPoints {
    XPt alpha0;
    XPt alpha2;
    XPt alpha4;
    int genus = 2;

    static BranchPoints genus2(double mu, cplx a0, cplx a2, cplx a4);
    static BranchPoints genus2_offsets(double mu, cplx d0, cplx a2, cplx d4);
    static BranchPoints genus0(double mu, cplx a0);
};

struct Tolerances {
    double quad_abs = 1e-10;
    double newton_res = 1e-10;
    int newton_max_iter = 50;
    double contour_clearance = 0.05;  // relative to the local scale

    void validate() const;
};

}  // namespace nlsg
