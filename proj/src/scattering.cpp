#include "nlsg/scattering.hpp"

#include <algorithm>
#include <cmath>

#include "nlsg/geometry.hpp"

namespace nlsg {

namespace {

constexpr double kSnap = 1e-12;

// log w with arg in (th, th + 2 pi)
cplx log_from(cplx w, double th) {
    double a = std::arg(w);
    while (a <= th) a += 2 * PI;
    while (a > th + 2 * PI) a -= 2 * PI;
    return {std::log(std::abs(w)), a};
}

// log(1 + w) without cancellation for small w
cplx clog1p(cplx w) {
    const double re = 0.5 * std::log1p(2 * w.real() + std::norm(w));
    return {re, std::atan2(w.imag(), 1 + w.real())};
}

double cut_angle(const Params& p, Sheet s) { return std::arg(cplx(s.cut_foot, 0.0) - p.T); }

struct Logs {
    cplx w;   // mu/2 - z
    cplx l1;  // ln(mu/2 - z), principal
    cplx lp;  // ln(z + T), principal
    cplx lm;  // ln(z - T), cut from T to the foot
};

Logs logs_upper(const XPt& z, const Params& p, Sheet s) {
    Logs L;
    L.w = XPt(0.5 * p.mu, 0.0) - z;
    L.l1 = std::log(L.w);
    L.lp = std::log(z.value() + p.T);
    L.lm = log_from(z.value() - p.T, cut_angle(p, s));
    return L;
}

double f_constant(const Params& p) {
    const double aT = p.absT();
    // -T artanh(2T/mu) with T = i|T| is |T| atan(2|T|/mu)
    return aT * std::atan(2 * aT / p.mu) + 0.5 * p.mu * std::log(2.0);
}

cplx f_upper(const XPt& z, const Params& p, Sheet s) {
    const Logs L = logs_upper(z, p, s);
    const cplx zz = z.value();
    return L.w * (I * (PI / 2) + L.l1) + 0.5 * (zz + p.T) * L.lp + 0.5 * (zz - p.T) * L.lm + f_constant(p) -
           p.x * zz - 2 * p.t * zz * zz;
}

cplx fp_upper(const XPt& z, const Params& p, Sheet s) {
    const Logs L = logs_upper(z, p, s);
    return -I * (PI / 2) - L.l1 + 0.5 * (L.lp + L.lm) - p.x - 4 * p.t * z.value();
}

void check_off_cuts(const XPt& z, const Params& p, Sheet s) {
    const double scale = std::max(std::abs(z.off), 1e-300);
    if (std::abs(z.imag()) <= kSnap * scale)
        throw DomainError("point lies on the real axis, where f jumps; use the side limits");
    const cplx v = z.value();
    const cplx up = v.imag() > 0 ? v : std::conj(v);
    if (dist_to_segment(up, p.T, cplx(s.cut_foot, 0.0)) <= kSnap * std::max(1.0, std::abs(v)))
        throw DomainError("point lies on the cut of ln(z - T)");
}

// f(z) - f(a) for z in the upper half plane and a = +-mu/2, in a form that keeps
// full relative accuracy as z -> a
cplx f_minus_upper(const XPt& z, double a, const Params& p, Sheet s) {
    const cplx d = z - cplx(a, 0.0);
    const cplx ap = a + p.T, am = a - p.T;
    if (std::abs(d) > 0.25 * std::min({std::abs(ap), p.mu}))
        return f_upper(z, p, s) - f_upper(XPt(a, cplx(0.0, 1e-300)), p, s).real();
    const Logs L = logs_upper(z, p, s);
    const double h = 0.5 * p.mu;
    cplx u;
    if (a == h) {
        u = L.w * (I * (PI / 2) + L.l1);
    } else {
        // (mu - d)(i pi/2 + ln(mu - d)) - mu (i pi/2 + ln mu)
        u = -d * (I * (PI / 2) + L.l1) + p.mu * clog1p(-d / p.mu);
    }
    const cplx v = 0.5 * (d * L.lp + ap * clog1p(d / ap));
    const cplx w = 0.5 * (d * L.lm + am * clog1p(d / am));
    return u + v + w - p.x * d - 2 * p.t * d * (2 * a + d);
}

}  // namespace

namespace detail {

cplx f_minus_at(const XPt& z, double a, const Params& p, Sheet s) {
    if (z.imag() > 0) return f_minus_upper(z, a, p, s);
    return std::conj(f_minus_upper(z.conj(), a, p, s));
}

cplx f_nocheck(const XPt& z, const Params& p, Sheet s) {
    if (z.imag() > 0) return f_upper(z, p, s);
    return std::conj(f_upper(z.conj(), p, s));
}

cplx fp_nocheck(const XPt& z, const Params& p, Sheet s) {
    if (z.imag() > 0) return fp_upper(z, p, s);
    return std::conj(fp_upper(z.conj(), p, s));
}

}  // namespace detail

cplx eval_f(const XPt& z, const Params& p, Sheet s) {
    check_off_cuts(z, p, s);
    return detail::f_nocheck(z, p, s);
}

cplx eval_f_prime(const XPt& z, const Params& p, Sheet s) {
    check_off_cuts(z, p, s);
    return detail::fp_nocheck(z, p, s);
}

cplx eval_f_second(const XPt& z, const Params& p) {
    if (z.imag() == 0) throw DomainError("f'' is evaluated off the real axis only");
    const bool up = z.imag() > 0;
    const XPt zu = up ? z : z.conj();
    const cplx v = zu.value();
    const cplx w = XPt(0.5 * p.mu, 0.0) - zu;
    const cplx r = 1.0 / w + 0.5 * (1.0 / (v + p.T) + 1.0 / (v - p.T)) - 4 * p.t;
    return up ? r : std::conj(r);
}

cplx eval_f_side(double x, int side, const Params& p, Sheet s) {
    const cplx up = f_upper(XPt(x, cplx(0.0, 1e-300)), p, s);
    return side > 0 ? up : std::conj(up);
}

cplx eval_f_prime_side(double x, int side, const Params& p, Sheet s) {
    const cplx up = fp_upper(XPt(x, cplx(0.0, 1e-300)), p, s);
    return side > 0 ? up : std::conj(up);
}

double im_f_at_T(const Params& p) {
    const double aT = p.absT();
    const cplx w = 0.5 * p.mu - p.T;
    return std::imag(w * (I * (PI / 2) + std::log(w))) + aT * std::log(2 * aT) - p.x * aT;
}

TaylorConstants taylor_constants(const Params& p) {
    return {std::log(2 * p.absT() / p.mu) - p.x, PI / 2, 2 / p.mu};
}

double taylor_c4(const Params& p) {
    // f''' at i*delta by central differences of f', then linear extrapolation in delta
    const Sheet s{1.0};
    auto third = [&](double delta) {
        const double h = delta / 2;
        const cplx z0(0.0, delta);
        const cplx d = eval_f_prime(z0 + h, p, s) - 2.0 * eval_f_prime(z0, p, s) + eval_f_prime(z0 - h, p, s);
        return std::real(d) / (h * h);
    };
    const double d = 2e-3;
    return 0.5 * (2 * third(d) - third(2 * d));
}

cplx pair_factor(const XPt& z, const XPt& a, const XPt& b) {
    const cplx za = z - a;
    return za * std::sqrt((z - b) / za);
}

cplx pair_factor_via(const XPt& z, const XPt& a, const XPt& v, const XPt& b) {
    const cplx r = pair_factor(z, a, b);
    return in_triangle(z, a, v, b) ? -r : r;
}

cplx eval_R(const XPt& z, const BranchPoints& bp, const Params& p) {
    const XPt half(0.5 * p.mu, 0.0);
    cplx r = -pair_factor_via(z, bp.alpha0, half, bp.alpha0.conj());
    if (bp.genus == 2) r *= pair_factor(z, bp.alpha2, bp.alpha4) * pair_factor(z, bp.alpha2.conj(), bp.alpha4.conj());
    return r;
}

cplx eval_R_side(const XPt& z, int side, cplx direction, const BranchPoints& bp, const Params& p) {
    double d = std::abs(z - bp.alpha0);
    for (const XPt* q : {&bp.alpha0, &bp.alpha2, &bp.alpha4}) {
        if (bp.genus == 0 && q != &bp.alpha0) continue;
        d = std::min({d, std::abs(z - *q), std::abs(z - q->conj())});
    }
    const cplx n = I * direction / std::abs(direction);
    return eval_R(XPt(z.base, z.off + double(side) * 1e-9 * d * n), bp, p);
}

cplx eval_R_comp(const XPt& z, const BranchPoints& bp) {
    return -pair_factor(z, bp.alpha0, bp.alpha2) * pair_factor(z, bp.alpha0.conj(), bp.alpha2.conj()) *
           pair_factor(z, bp.alpha4, bp.alpha4.conj());
}

cplx eval_R_reduced(const XPt& z, cplx alpha2, const Params& p) {
    const XPt a(alpha2);
    return pair_factor_via(z, a, XPt(-0.5 * p.mu, 0.0), a.conj());
}

bool on_R_cut(const XPt& z, const BranchPoints& bp, const Params& p, double snap) {
    const cplx v = z.value();
    const double s = snap * std::max(1.0, std::abs(v));
    const cplx h(0.5 * p.mu, 0.0);
    if (dist_to_segment(z - h, 0.0, bp.alpha0 - h) <= s) return true;
    if (dist_to_segment(z - h, 0.0, bp.alpha0.conj() - h) <= s) return true;
    if (bp.genus == 2) {
        if (dist_to_segment(v, bp.alpha2.value(), bp.alpha4.value()) <= s) return true;
        if (dist_to_segment(v, std::conj(bp.alpha2.value()), std::conj(bp.alpha4.value())) <= s) return true;
    }
    return false;
}

cplx lambda1(cplx z, const BranchPoints& bp) { return z - bp.alpha2.value().real(); }

cplx lambda2(cplx z, const BranchPoints& bp) {
    return (z - bp.alpha0.value().real()) * (z - bp.alpha4.value().real());
}

cplx lambda3(cplx z, const BranchPoints& bp) { return lambda2(z, bp) * lambda1(z, bp); }

}  // namespace nlsg
