#include <cmath>

#include "doctest.h"
#include "nlsg/contours.hpp"

using namespace nlsg;

TEST_CASE("line integrals of polynomials are exact") {
    const cplx a(0.3, -0.2), b(-1.1, 0.9);
    const auto r = integrate(make_line(XPt(a), XPt(b)), [](const XPt& z) { return z.value() * z.value(); });
    CHECK(std::abs(r.value - (b * b * b - a * a * a) / 3.0) < 1e-13);
}

TEST_CASE("a full arc integrates 1/(z-a) to 2 pi i times the winding number") {
    const Contour c = make_arc(XPt(cplx(0.1, 0.2)), 0.5, 0.0, 2 * PI);
    for (cplx a : {cplx(0.1, 0.2), cplx(0.3, 0.1), cplx(1.0, 1.0)}) {
        const auto r = integrate(c, [a](const XPt& z) { return 1.0 / (z.value() - a); }, 1e-12);
        const int w = winding_number(c, XPt(a));
        CHECK(std::abs(r.value - 2 * PI * I * double(w)) < 1e-10);
    }
    CHECK(winding_number(c, XPt(cplx(0.1, 0.2))) == 1);
}

TEST_CASE("closed stadium and lobe integrate entire functions to zero") {
    const Contour s = stadium(XPt(cplx(-0.5, 0.1)), XPt(cplx(0.4, 0.6)), 0.1, 0.2);
    const Contour l = pinched_lobe(XPt(cplx(0.5, 0.0)), XPt(cplx(0.7, 0.4)), 0.1);
    for (const Contour* c : {&s, &l}) {
        CHECK(c->closed);
        const auto r = integrate(*c, [](const XPt& z) { return std::exp(z.value()); }, 1e-12);
        CHECK(std::abs(r.value) < 1e-11);
    }
}

TEST_CASE("stadium encloses both foci once") {
    const cplx a(-0.5, 0.1), b(0.4, 0.6);
    const Contour s = stadium(XPt(a), XPt(b), 0.1, 0.2);
    CHECK(std::abs(winding_number(s, XPt(a))) == 1);
    CHECK(winding_number(s, XPt(b)) == winding_number(s, XPt(a)));
    CHECK(winding_number(s, XPt(cplx(2.0, 2.0))) == 0);
}

TEST_CASE("endpoint singularities are resolved through the anchored offsets") {
    // integral of 1/sqrt(s) over [0,1]
    const Contour c = make_line(XPt(0.0, cplx(0.0, 0.0)), XPt(0.0, cplx(1.0, 0.0)));
    const auto r = integrate(c, [](const XPt& z) { return 1.0 / std::sqrt(z.off); }, 1e-12);
    CHECK(std::abs(r.value - 2.0) < 1e-10);
    // integral of ln(s) over [0,1]
    const auto q = integrate(c, [](const XPt& z) { return std::log(z.off); }, 1e-12);
    CHECK(std::abs(q.value + 1.0) < 1e-10);
}

TEST_CASE("vector integrand matches scalar components") {
    const Contour c = make_line(XPt(cplx(0, 0)), XPt(cplx(1, 1)));
    const auto v = integrate_n(c, 2, [](const XPt& z, cplx* out) {
        out[0] = std::sin(z.value());
        out[1] = std::cos(z.value());
    });
    const cplx e(1, 1);
    CHECK(std::abs(v.values[0] - (1.0 - std::cos(e))) < 1e-12);
    CHECK(std::abs(v.values[1] - std::sin(e)) < 1e-12);
}

TEST_CASE("mirrored contour integrates the conjugate function to the conjugate value") {
    const Contour s = stadium(XPt(cplx(-0.5, 0.3)), XPt(cplx(0.4, 0.6)), 0.1, 0.1);
    auto fn = [](const XPt& z) { return 1.0 / (z.value() - cplx(0.0, 0.45)); };
    auto fm = [](const XPt& z) { return 1.0 / (z.value() - cplx(0.0, -0.45)); };
    const cplx a = integrate(s, fn, 1e-12).value, b = integrate(s.mirrored(), fm, 1e-12).value;
    // conjugating the path reverses orientation, hence the sign
    CHECK(std::abs(b + std::conj(a)) < 1e-10);
}

TEST_CASE("cut foot lies between the two point clouds") {
    const Params p = make_params(0.0, 1.0, 1.0);
    const std::vector<cplx> left{cplx(-0.6, 0.3), cplx(-0.4, 0.5)}, right{cplx(0.2, 0.4), cplx(0.5, 0.1)};
    const auto [foot, dist] = choose_cut_foot(p, left, right);
    CHECK(foot > -0.6);
    CHECK(foot < 0.5);
    CHECK(dist > 0);
}
