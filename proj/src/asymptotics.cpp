#include "nlsg/asymptotics.hpp"

#include <cmath>

#include "nlsg/contours.hpp"
#include "nlsg/geometry.hpp"
#include "nlsg/gfun.hpp"
#include "nlsg/scattering.hpp"

namespace nlsg {

namespace {

const double LN2 = std::log(2.0);

double abs_T(double mu) { return std::sqrt((1 - 0.5 * mu) * (1 + 0.5 * mu)); }

}  // namespace

Alpha2Coefficients alpha2_coefficients(double x, double mu) {
    const double T = abs_T(mu), sm = std::sqrt(mu);
    const double L = std::log(2 * T / sm);
    Alpha2Coefficients c;
    c.A1 = 0.125;
    c.A2 = 0.25 * L + 0.25 * (LN2 - x);
    c.A3 = 3.0 / (32.0 * mu);
    c.B1 = 0.5 * sm;
    c.B2 = 1.0 / (16.0 * sm);
    c.B3 = (2 + L) / (8 * sm) + (LN2 - x) / (8 * sm);
    return c;
}

ObstructionCoefficients obstruction_coefficients(double mu) {
    const double T2 = (1 - 0.5 * mu) * (1 + 0.5 * mu);
    ObstructionCoefficients c;
    c.c2 = -mu / (16 * T2);
    c.c3 = -mu * (1 + std::log(4 * T2 / mu)) / (16 * T2);
    c.C3_obstruction = (1 - std::log(T2)) / (4 * T2);
    return c;
}

ObstructionCoefficients obstruction_coefficients_from_alpha2(double mu) {
    const double T2 = (1 - 0.5 * mu) * (1 + 0.5 * mu);
    const Alpha2Coefficients a = alpha2_coefficients(LN2, mu);
    ObstructionCoefficients c;
    c.C3_obstruction = (1 - std::log(T2)) / (4 * T2);
    const double B1sq = a.B1 * a.B1;
    c.c2 = -(8 * a.A1 - 0.5) * B1sq / (2 * T2);
    c.c3 = (-(8 * a.A2 - std::log(a.B1)) / (2 * T2) - c.C3_obstruction) * B1sq;
    return c;
}

cplx alpha2_asymptotic(double x, double t, double mu) {
    if (!(t > 1)) throw DomainError("alpha2_asymptotic needs t > 1");
    const Alpha2Coefficients c = alpha2_coefficients(x, mu);
    const double lt = std::log(t), st = std::sqrt(t);
    const double a = c.A1 * lt / t + c.A2 / t + c.A3 * lt / (t * t);
    const double b = c.B1 / st + c.B2 * lt / (t * st) + c.B3 / (t * st);
    return {a, b};
}

double obstruction_asymptote(double t, double mu) {
    if (!(t > 1)) throw DomainError("obstruction_asymptote needs t > 1");
    const ObstructionCoefficients c = obstruction_coefficients(mu);
    return LN2 + c.c2 * std::log(t) / t + c.c3 / t;
}

double im_h_at_T_asymptotic(double x, double t, double mu) {
    const cplx al = alpha2_asymptotic(x, t, mu);
    const double a = al.real(), b = al.imag(), T = abs_T(mu);
    const double b2 = b * b;
    return T * (x - LN2) + (2 / T) * (0.25 * b2 * std::log(b) + 2 * t * a * b2) +
           (2 / T) * ((1 - 2 * std::log(T)) / 8 + (x - LN2) / 4) * b2;
}

double first_break_small_x(double x, double mu) {
    const double s = std::sqrt(mu + 2);
    return 1 / (2 * (mu + 2)) + x / (2 * s * std::tan(PI / 5));
}

double first_break_large_x(double x, double mu, bool conjectural) {
    if (mu < 2 && !conjectural) throw DomainError("large-x first break for mu < 2 is conjectural; enable explicitly");
    if (mu >= 2) {
        const double T = std::sqrt(0.25 * mu * mu - 1);  // solitonless case: real T
        return x / (2 * mu) - std::log(2 * mu / (mu + 2 * T)) / mu - (T / mu) / (mu + 2 * T);
    }
    return x / (2 * mu) - std::log(2.0) / mu;
}

double root_gap_integral_asymptotic(double f0, double fp, double p, double corr_integral, double b) {
    return -0.5 * f0 * b * b * std::log(b) +
           (0.25 * f0 + 0.5 * f0 * LN2 + 0.5 * fp * std::log(p) - 0.5 * corr_integral) * b * b;
}

IntegralTag parse_integral_tag(const std::string& s) {
    if (s == "I1") return IntegralTag::I1;
    if (s == "I2") return IntegralTag::I2;
    if (s == "I3") return IntegralTag::I3;
    if (s == "I4") return IntegralTag::I4;
    if (s == "I5") return IntegralTag::I5;
    if (s == "I6") return IntegralTag::I6;
    if (s == "H2") return IntegralTag::H2;
    if (s == "Hk") return IntegralTag::Hk;
    throw DomainError("unknown integral tag '" + s + "'");
}

std::string to_string(IntegralTag tag) {
    switch (tag) {
        case IntegralTag::I1: return "I1";
        case IntegralTag::I2: return "I2";
        case IntegralTag::I3: return "I3";
        case IntegralTag::I4: return "I4";
        case IntegralTag::I5: return "I5";
        case IntegralTag::I6: return "I6";
        case IntegralTag::H2: return "H2";
        case IntegralTag::Hk: return "Hk";
    }
    return "?";
}

namespace {

// Pieces of the split g'. Lambda(xi) = xi - a; R is the reduced radical with
// R/Lambda -> -1 at infinity.
struct Split {
    const Params& p;
    double a, b;
    cplx z;
    double tol;
    Sheet sheet;

    // R(z)/Lambda(z)
    cplx r_over_lambda() const { return -eval_R_reduced(z, {a, b}, p) / (z - a); }

    // integral over [a, -mu/2] of w(xi) xi/(xi - z), w = 1 or Lambda/R - 1
    cplx real_part(bool corrected) const {
        auto fn = [&](const XPt& s) {
            const double xi = s.value().real();
            double w = 1.0;
            if (corrected) w = -(xi - a) / std::hypot(xi - a, b) - 1.0;
            return w * xi / (xi - z);
        };
        return integrate(make_line(XPt(a), XPt(-0.5 * p.mu)), fn, tol).value;
    }

    // integral from a+ib to a-ib of (Lambda/R) f'(xi) (xi/z)^k. With
    // xi = a + i b cos(th), (Lambda/R) dxi = -sgn b cos(th) dth, where sgn is the
    // sign of R on the segment; f' jumps where the segment crosses the real axis.
    cplx vertical(int k) const {
        const double sgn = std::real(-eval_R_reduced(cplx(a, 0.0), {a, b}, p)) > 0 ? 1.0 : -1.0;
        auto fn = [&](const XPt& s) {
            const double th = s.value().real();
            const cplx xi(a, b * std::cos(th));
            const cplx fp = detail::fp_nocheck(xi, p, sheet);
            return -sgn * b * std::cos(th) * fp * std::pow(xi / z, k);
        };
        const double h = 0.5 * PI;
        return integrate(make_line(XPt(0.0), XPt(h)), fn, tol).value +
               integrate(make_line(XPt(h), XPt(PI)), fn, tol).value;
    }
};

}  // namespace

IntegralCheck verify_integral_table(IntegralTag which, cplx z, const Params& p, cplx alpha2, int k, double quad_tol) {
    const double a = alpha2.real(), b = alpha2.imag(), mu = p.mu, t = p.t;
    if (!(b > 0)) throw DomainError("alpha2 must lie in the upper half plane");
    if (std::abs(z) <= std::abs(alpha2)) throw DomainError("need |z| > |alpha2|");
    if (dist_to_segment(z, cplx(a, 0.0), cplx(-0.5 * mu, 0.0)) <= b)
        throw DomainError("z too close to [a2, -mu/2]");
    if (which == IntegralTag::Hk && k < 2) throw DomainError("Hk needs k >= 2");

    Split S{p, a, b, z, quad_tol, build_reduced_loops(alpha2, p).sheet};
    const cplx r = S.r_over_lambda();
    const cplx c2pi = 1.0 / (2.0 * PI * I * z);
    const double b2 = b * b;
    const double C1 = taylor_constants(p).C1;
    const cplx I1a = -0.5 * std::log(-0.5 * mu - z) + mu / (4.0 * z) + 0.5 * std::log(-z);

    IntegralCheck out{};
    switch (which) {
        case IntegralTag::I1:
            out.numeric = -0.5 * S.real_part(false) / z;
            out.asymptotic = I1a;
            break;
        case IntegralTag::I2:
            out.numeric = 0.5 * (r + 1.0) * S.real_part(false) / z;
            out.asymptotic = b2 / (2.0 * z * z) * I1a;
            break;
        case IntegralTag::I3:
            out.numeric = -0.5 * S.real_part(true) / z;
            out.asymptotic = (b2 * std::log(b) / 4.0 + ((1 - 2 * std::log(mu)) / 8.0 +
                                                        std::log(1.0 + mu / (2.0 * z)) / 4.0) * b2) / (z * z);
            break;
        case IntegralTag::I4:
            out.numeric = 0.5 * (r + 1.0) * S.real_part(true);
            out.asymptotic = 0.0;
            break;
        case IntegralTag::I5:
            out.numeric = c2pi * S.vertical(1);
            out.asymptotic = (2 * t * a * b2 - C1 * b2 / 4) / (z * z);
            break;
        case IntegralTag::I6:
            out.numeric = -c2pi * (r + 1.0) * S.vertical(1);
            out.asymptotic = 0.0;
            break;
        case IntegralTag::H2:
            out.numeric = -c2pi * r * S.vertical(2);
            out.asymptotic = -3 * t * b2 * b2 / (4.0 * z * z * z);
            break;
        case IntegralTag::Hk:
            out.numeric = -c2pi * r * S.vertical(k);
            out.asymptotic = k == 2 ? -3 * t * b2 * b2 / (4.0 * z * z * z) : cplx(0.0);
            break;
    }
    out.gap = std::abs(out.numeric - out.asymptotic);
    return out;
}

}  // namespace nlsg
