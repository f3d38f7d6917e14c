#include <cmath>
#include <random>

#include "doctest.h"
#include "nlsg/contours.hpp"
#include "nlsg/scattering.hpp"

using namespace nlsg;

namespace {

const Params P = make_params(0.4, 0.8, 1.0);

cplx fd(const std::function<cplx(cplx)>& g, cplx z, double h = 1e-5) {
    return (g(z + h) - g(z - h)) / (2 * h);
}

}  // namespace

TEST_CASE("make_params validates mu and t") {
    CHECK_THROWS_AS(make_params(0, 1, 0.0), DomainError);
    CHECK_THROWS_AS(make_params(0, 1, 2.0), DomainError);
    CHECK_THROWS_AS(make_params(0, -1, 1.0), DomainError);
    CHECK(make_params(0, 1, 1.0).absT() == doctest::Approx(std::sqrt(0.75)));
}

TEST_CASE("f' and f'' agree with central differences of f and f'") {
    for (cplx z : {cplx(0.9, 0.3), cplx(-0.7, 1.4), cplx(0.2, 2.5), cplx(-1.3, 0.2)}) {
        const cplx d1 = fd([](cplx w) { return eval_f(XPt(w), P); }, z);
        CHECK(std::abs(eval_f_prime(XPt(z), P) - d1) < 1e-8);
        const cplx d2 = fd([](cplx w) { return eval_f_prime(XPt(w), P); }, z);
        CHECK(std::abs(eval_f_second(XPt(z), P) - d2) < 1e-8);
    }
}

TEST_CASE("f' matches the principal-log formula right of the cut") {
    // -pi i/2 - ln(mu/2 - z) + ln(z^2 - T^2)/2 - x - 4tz
    for (cplx z : {cplx(1.0, 0.5), cplx(0.3, 2.0), cplx(2.0, 0.1)}) {
        const cplx ref = -I * PI / 2.0 - std::log(0.5 - z) + 0.5 * std::log(z * z - P.T * P.T) - P.x - 4 * P.t * z;
        CHECK(std::abs(eval_f_prime(XPt(z), P) - ref) < 1e-13);
    }
}

TEST_CASE("Schwarz reflection") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(-2, 2), v(0.05, 2);
    for (int k = 0; k < 50; ++k) {
        const cplx z(u(rng), v(rng));
        if (std::abs(z - P.T) < 0.05 || std::abs(z.real()) < 0.05) continue;
        CHECK(std::abs(eval_f(XPt(std::conj(z)), P) - std::conj(eval_f(XPt(z), P))) < 1e-12);
        CHECK(std::abs(eval_f_prime(XPt(std::conj(z)), P) - std::conj(eval_f_prime(XPt(z), P))) < 1e-12);
    }
}

TEST_CASE("f is real and continuous at +-mu/2") {
    for (double a : {0.5, -0.5}) {
        const cplx up = eval_f_side(a, +1, P), dn = eval_f_side(a, -1, P);
        CHECK(std::abs(up.imag()) < 1e-12);
        CHECK(std::abs(up - dn) < 1e-12);
    }
}

TEST_CASE("f' jumps by -+ i pi across the real axis on either side of mu/2") {
    const cplx j_in = eval_f_prime_side(0.3, +1, P) - eval_f_prime_side(0.3, -1, P);
    const cplx j_out = eval_f_prime_side(0.9, +1, P) - eval_f_prime_side(0.9, -1, P);
    CHECK(std::abs(j_in + I * PI) < 1e-12);
    CHECK(std::abs(j_out - I * PI) < 1e-12);
}

TEST_CASE("f rejects points on the real axis and on the log cut") {
    CHECK_THROWS_AS(eval_f(XPt(cplx(0.7, 0.0)), P), DomainError);
    CHECK_THROWS_AS(eval_f(XPt(0.5 * P.T), P), DomainError);
}

TEST_CASE("f(z) - f(mu/2) matches the integral of f' next to mu/2") {
    for (cplx d : {cplx(1e-3, 2e-3), cplx(-4e-9, 1e-9), cplx(2e-14, 3e-14)}) {
        const XPt z(0.5, d);
        const cplx direct = integrate(make_line(XPt(0.5, cplx(0.0, 0.0)), z),
                                      [](const XPt& s) { return detail::fp_nocheck(s, P, Sheet{}); }, 1e-30)
                                .value;
        const cplx accurate = detail::f_minus_at(z, 0.5, P, Sheet{});
        CHECK(std::abs(direct - accurate) < 1e-10 * std::abs(accurate));
    }
}

TEST_CASE("pair factors square to the quadratic and behave like z") {
    const XPt a(cplx(0.3, 0.7)), b(cplx(-0.4, 0.2)), v(cplx(0.1, -0.5));
    for (cplx z : {cplx(1.5, 0.3), cplx(-2.0, -1.0), cplx(0.0, 3.0)}) {
        const cplx pf = pair_factor(XPt(z), a, b), pv = pair_factor_via(XPt(z), a, v, b);
        const cplx q = (z - a.value()) * (z - b.value());
        CHECK(std::abs(pf * pf - q) < 1e-12 * std::abs(q));
        CHECK(std::abs(pv * pv - q) < 1e-12 * std::abs(q));
    }
    const cplx far(1e6, 1e5);
    CHECK(std::abs(pair_factor(XPt(far), a, b) / far - 1.0) < 1e-5);
}

TEST_CASE("the genus-2 radical squares to the sextic and decays like -z^3") {
    const BranchPoints bp = BranchPoints::genus2(1.0, cplx(0.55, 0.3), cplx(-0.1, 0.8), cplx(-0.6, 0.25));
    auto sextic = [&](cplx z) {
        cplx s = 1;
        for (const XPt* a : {&bp.alpha0, &bp.alpha2, &bp.alpha4})
            s *= (z - a->value()) * (z - std::conj(a->value()));
        return s;
    };
    for (cplx z : {cplx(1.2, 0.4), cplx(-1.5, -0.9), cplx(0.05, 2.0), cplx(0.3, -0.1)}) {
        const cplx R = eval_R(XPt(z), bp, P), Rc = eval_R_comp(XPt(z), bp);
        CHECK(std::abs(R * R - sextic(z)) < 1e-11 * std::abs(sextic(z)));
        CHECK(std::abs(Rc * Rc - sextic(z)) < 1e-11 * std::abs(sextic(z)));
        CHECK(std::abs(std::abs(R / Rc) - 1.0) < 1e-12);
    }
    const cplx far(1e5, 0.0);
    CHECK(std::abs(eval_R(XPt(far), bp, P) / (-far * far * far) - 1.0) < 1e-4);
}

TEST_CASE("the radical changes sign across its main cut") {
    const BranchPoints bp = BranchPoints::genus2(1.0, cplx(0.55, 0.3), cplx(-0.1, 0.8), cplx(-0.6, 0.25));
    const cplx m = 0.5 * (bp.alpha2.value() + bp.alpha4.value());
    const cplx n = I * (bp.alpha4.value() - bp.alpha2.value());
    const cplx up = eval_R(XPt(m + 1e-7 * n), bp, P), dn = eval_R(XPt(m - 1e-7 * n), bp, P);
    CHECK(std::abs(up + dn) < 1e-5 * std::abs(up));
}
