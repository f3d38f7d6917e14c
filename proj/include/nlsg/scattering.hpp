#pragma once

#include "nlsg/core.hpp"

namespace nlsg {

// The logarithm ln(z - T) is cut from T to a real point c (the "cut foot") and
// continues along the real axis. The stated geometry has c = 0. Loop integrals
// around arcs that straddle the imaginary axis need c moved into the gap between
// the left and right arcs; any c in that gap gives the same integrals.
struct Sheet {
    double cut_foot = 0.0;
};

// f(z) in the upper half plane, Schwarz reflection below. Throws DomainError on
// the real axis or on the cut [T, c] (and its mirror).
cplx eval_f(const XPt& z, const Params& p, Sheet s = {});
cplx eval_f_prime(const XPt& z, const Params& p, Sheet s = {});
cplx eval_f_second(const XPt& z, const Params& p);

// Limits onto the real axis from above (side = +1) or below (side = -1).
cplx eval_f_side(double x, int side, const Params& p, Sheet s = {});
cplx eval_f_prime_side(double x, int side, const Params& p, Sheet s = {});

// Im f(T) from the upper half plane; independent of the cut foot.
double im_f_at_T(const Params& p);

struct TaylorConstants {
    double C1;
    double C2;
    double C3;
};

// f'(z) = C1 + i C2 sgn(Im z) + (C3 - 4t) z + C4 z^2 + ... near 0, sheet with c > 0
TaylorConstants taylor_constants(const Params& p);

// Second-order coefficient, by central differences of f' along the imaginary axis
double taylor_c4(const Params& p);

// (z-a) sqrt((z-b)/(z-a)): cut exactly on [a,b], ~ z at infinity
cplx pair_factor(const XPt& z, const XPt& a, const XPt& b);
// same with the cut moved to the polyline a -> v -> b
cplx pair_factor_via(const XPt& z, const XPt& a, const XPt& v, const XPt& b);

// Genus 2: six-point radical, cuts [a0bar, mu/2] u [mu/2, a0] and [a2, a4] u
// [a4bar, a2bar], R ~ -z^3 as z -> +inf. Genus 0: R ~ -z with the first cut only.
cplx eval_R(const XPt& z, const BranchPoints& bp, const Params& p);
// limit onto a cut from the left (+1) or right (-1) of the cut's orientation
cplx eval_R_side(const XPt& z, int side, cplx direction, const BranchPoints& bp, const Params& p);

// Radical with cuts on the complementary arcs [a0,a2], [a0bar,a2bar] and the
// vertical segment [a4,a4bar]; R_c^2 = R^2 so R/R_c = +-1.
cplx eval_R_comp(const XPt& z, const BranchPoints& bp);

// sqrt((z-a2)(z-a2bar)) with the cut a2 -> -mu/2 -> a2bar, positive for large real z
cplx eval_R_reduced(const XPt& z, cplx alpha2, const Params& p);

// True when z is within snap of a cut of R
bool on_R_cut(const XPt& z, const BranchPoints& bp, const Params& p, double snap);

// Lambda(z) = z - a2, Lambda2 = (z-a0)(z-a4), Lambda3 = (z-a0)(z-a2)(z-a4), a_j = Re alpha_j
cplx lambda1(cplx z, const BranchPoints& bp);
cplx lambda2(cplx z, const BranchPoints& bp);
cplx lambda3(cplx z, const BranchPoints& bp);

namespace detail {
// f and f' without cut checks, for quadrature nodes known to be off the cuts
cplx f_nocheck(const XPt& z, const Params& p, Sheet s);
cplx fp_nocheck(const XPt& z, const Params& p, Sheet s);
// f(z) - f(a) for a = +-mu/2 (where f is real), accurate as z -> a
cplx f_minus_at(const XPt& z, double a, const Params& p, Sheet s);
}  // namespace detail

}  // namespace nlsg
