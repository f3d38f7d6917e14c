#include <cmath>

#include "doctest.h"
#include "nlsg/asymptotics.hpp"
#include "nlsg/phasediagram.hpp"

using namespace nlsg;

namespace {

HField synthetic(int n, const std::function<double(cplx)>& fn, Region R = {}) {
    HField F;
    F.region = R;
    F.nx = F.ny = n;
    F.values.resize(std::size_t(n) * n);
    F.mask.assign(std::size_t(n) * n, 0);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) F.values[std::size_t(j) * n + i] = fn(cplx(F.re(i), F.im(j)));
    return F;
}

}  // namespace

TEST_CASE("a circular level set traces to one closed loop on the circle") {
    const HField F = synthetic(61, [](cplx z) { return std::norm(z) - 0.25; });
    const auto lines = trace_zero_level(F);
    REQUIRE(lines.size() == 1);
    const Polyline& L = lines[0];
    CHECK(std::abs(L.front() - L.back()) < 1e-14);
    const double h = 2.4 / 60;
    for (cplx z : L) CHECK(std::abs(std::abs(z) - 0.5) < h * h);
}

TEST_CASE("a straight level line is one open chain ending on the boundary") {
    const HField F = synthetic(21, [](cplx z) { return z.real() - 0.13; });
    const auto lines = trace_zero_level(F);
    REQUIRE(lines.size() == 1);
    CHECK(lines[0].size() == 21);
    for (cplx z : lines[0]) CHECK(z.real() == doctest::Approx(0.13).epsilon(1e-12));
}

TEST_CASE("a saddle splits into two branches") {
    const HField F = synthetic(40, [](cplx z) { return z.real() * z.imag() + 0.01; });
    CHECK(trace_zero_level(F).size() == 2);
}

TEST_CASE("masked nodes cut the level line") {
    HField F = synthetic(21, [](cplx z) { return z.real() - 0.13; });
    for (int i = 0; i < 21; ++i) F.mask[10 * 21 + i] = 1;
    CHECK(trace_zero_level(F).size() == 2);
}

TEST_CASE("sampled Im h masks the real axis and is odd under conjugation") {
    const Params p = make_params(1.0, 20.0, 1.0);
    const BranchPoints bp = long_time_seed(p);
    const SolveReport r = solve_branch_points_full(p, bp);
    REQUIRE(r.converged);
    const HField F = sample_im_h(Region{}, 9, 9, p, r.bp, 2);
    for (int i = 0; i < 9; ++i) CHECK(F.masked(i, 4));
    for (int j = 0; j < 9; ++j)
        for (int i = 0; i < 9; ++i)
            if (!F.masked(i, j) && !F.masked(i, 8 - j)) CHECK(std::abs(F.at(i, j) + F.at(i, 8 - j)) < 1e-9);
    CHECK(F.masked_fraction() < 0.5);
}

TEST_CASE("grid validation") {
    const Params p = make_params(1.0, 20.0, 1.0);
    CHECK_THROWS_AS(sample_im_h(Region{}, 1, 5, p, long_time_seed(p)), DomainError);
    CHECK_THROWS_AS(build_asymptote_curve(1.0, {2.0, 2.0}), DomainError);
    CHECK_THROWS_AS(build_obstruction_curve(1.0, {}), DomainError);
}

TEST_CASE("asymptote curve leaves out t <= 1") {
    const CurveSample c = build_asymptote_curve(1.0, {0.5, 2.0, 10.0});
    CHECK(c.points.size() == 2);
    REQUIRE(c.failed.size() == 1);
    CHECK(c.failed[0] == 0.5);
    CHECK(c.diagnostics.size() == 3);
    CHECK(c.points[1].second == doctest::Approx(obstruction_asymptote(10.0, 1.0)));
}

TEST_CASE("reduced obstruction curve stays below ln 2 and rises with t") {
    const CurveSample c = build_obstruction_curve(1.0, {50.0, 100.0, 200.0});
    REQUIRE(c.points.size() == 3);
    for (std::size_t k = 0; k < 3; ++k) {
        CHECK(c.points[k].second < std::log(2.0));
        if (k) CHECK(c.points[k].second > c.points[k - 1].second);
    }
    CHECK(to_string(c.kind) == "obstruction_LT");
}
