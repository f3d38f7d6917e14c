#include "nlsg/core.hpp"

#include <cmath>

namespace nlsg {

Params make_params(double x, double t, double mu) {
    if (!(mu > 0.0 && mu < 2.0))
        throw DomainError("mu must lie in (0,2), got " + std::to_string(mu));
    if (!(t >= 0.0)) throw DomainError("t must be nonnegative, got " + std::to_string(t));
    if (!std::isfinite(x)) throw DomainError("x must be finite");
    Params p;
    p.x = x;
    p.t = t;
    p.mu = mu;
    // 1 - mu^2/4 = (1 - mu/2)(1 + mu/2) avoids cancellation near mu = 2
    p.T = cplx(0.0, std::sqrt((1.0 - 0.5 * mu) * (1.0 + 0.5 * mu)));
    return p;
}

BranchPoints BranchPoints::genus2(double mu, cplx a0, cplx a2, cplx a4) {
    return genus2_offsets(mu, a0 - 0.5 * mu, a2, a4 + 0.5 * mu);
}

BranchPoints BranchPoints::genus2_offsets(double mu, cplx d0, cplx a2, cplx d4) {
    if (d0.imag() < 0 || a2.imag() < 0 || d4.imag() < 0)
        throw DomainError("branch points must lie in the closed upper half plane");
    BranchPoints bp;
    bp.alpha0 = XPt(0.5 * mu, d0);
    bp.alpha2 = XPt(0.0, a2);
    bp.alpha4 = XPt(-0.5 * mu, d4);
    bp.genus = 2;
    return bp;
}

BranchPoints BranchPoints::genus0(double mu, cplx a0) {
    if (a0.imag() < 0) throw DomainError("alpha0 must lie in the closed upper half plane");
    BranchPoints bp;
    bp.alpha0 = XPt(0.5 * mu, a0 - 0.5 * mu);
    bp.genus = 0;
    return bp;
}

void Tolerances::validate() const {
    if (!(quad_abs > 0) || !(newton_res > 0) || newton_max_iter < 1 || !(contour_clearance > 0))
        throw DomainError("tolerances must be positive and newton_max_iter >= 1");
}

}  // namespace nlsg
