#include <cmath>

#include "doctest.h"
#include "nlsg/asymptotics.hpp"
#include "nlsg/contours.hpp"
#include "nlsg/gfun.hpp"
#include "nlsg/solvers.hpp"

using namespace nlsg;

TEST_CASE("two-term expansion against direct quadrature for f(s) = exp(s)") {
    const Contour unit = make_line(XPt(0.0, cplx(0.0, 0.0)), XPt(0.0, cplx(1.0, 0.0)));
    const double corr =
        integrate(unit, [](const XPt& s) { return std::exp(s.off) * std::log(s.off); }, 1e-14).value.real();
    for (double b : {1e-2, 1e-3}) {
        const double direct =
            integrate(unit,
                      [b](const XPt& s) {
                          const cplx u = s.off;
                          return std::exp(u) * b * b / (std::sqrt(u * u + b * b) + u);
                      },
                      1e-16)
                .value.real();
        const double approx = root_gap_integral_asymptotic(1.0, std::exp(1.0), 1.0, corr, b);
        CHECK(std::abs(direct - approx) < 10 * b * b * b);
    }
}

TEST_CASE("small-x first break starts at 1/(2(mu+2))") {
    CHECK(first_break_small_x(0.0, 1.0) == doctest::Approx(1.0 / 6.0));
    CHECK(first_break_small_x(0.1, 1.0) > first_break_small_x(0.0, 1.0));
}

TEST_CASE("large-x law is gated for mu < 2") {
    CHECK_THROWS_AS(first_break_large_x(5.0, 1.0), DomainError);
    CHECK(first_break_large_x(5.0, 1.0, true) == doctest::Approx(2.5 - std::log(2.0)));
}

TEST_CASE("c2 agrees between the closed form and the alpha2 route") {
    for (double mu : {0.5, 1.0, 1.5}) {
        const auto a = obstruction_coefficients(mu), b = obstruction_coefficients_from_alpha2(mu);
        CHECK(a.c2 == doctest::Approx(b.c2).epsilon(1e-14));
    }
    CHECK(obstruction_coefficients(1.0).c2 == doctest::Approx(-1.0 / 12));
    CHECK(obstruction_coefficients(1.0).c3 == doctest::Approx(-(1 + std::log(3.0)) / 12));
}

TEST_CASE("alpha2 expansion nearly solves the reduced moment conditions") {
    double prev = 1e300;
    for (double t : {50.0, 200.0, 800.0}) {
        const auto m = reduced_moments(alpha2_asymptotic(1.0, t, 1.0), make_params(1.0, t, 1.0));
        const double r = std::abs(m[0]) + std::abs(m[1]);
        CHECK(r < prev);
        prev = r;
    }
}

TEST_CASE("obstruction asymptote tends to ln 2 and needs t > 1") {
    CHECK(std::abs(obstruction_asymptote(1e8, 1.0) - std::log(2.0)) < 1e-6);
    CHECK_THROWS_AS(obstruction_asymptote(0.5, 1.0), DomainError);
}

TEST_CASE("alpha2 expansion: Im alpha2 sqrt(t) approaches the leading coefficient") {
    const auto c = alpha2_coefficients(1.0, 1.0);
    double prev = 1e300;
    for (double t : {1e2, 1e4, 1e6}) {
        const double dev = std::abs(alpha2_asymptotic(1.0, t, 1.0).imag() * std::sqrt(t) - c.B1);
        CHECK(dev < prev);
        prev = dev;
    }
}

TEST_CASE("Im h(T) expansion tracks the reduced solve at large t") {
    Warm w;
    const double solved = im_h_at_T_solved(1.0, 400.0, 1.0, SolveMode::Reduced, w);
    CHECK(std::abs(solved - im_h_at_T_asymptotic(1.0, 400.0, 1.0)) < 1e-3);
}

TEST_CASE("integral tags round-trip") {
    for (auto tag : {IntegralTag::I1, IntegralTag::I3, IntegralTag::I6, IntegralTag::H2, IntegralTag::Hk})
        CHECK(parse_integral_tag(to_string(tag)) == tag);
    CHECK_THROWS(parse_integral_tag("I9"));
}

TEST_CASE("integral table refuses points inside the alpha2 disc") {
    const Params p = make_params(1.0, 50.0, 1.0);
    const cplx a2 = alpha2_asymptotic(1.0, 50.0, 1.0);
    CHECK_THROWS_AS(verify_integral_table(IntegralTag::I1, 0.5 * a2, p, a2), DomainError);
}
