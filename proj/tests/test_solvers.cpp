#include <cmath>

#include "doctest.h"
#include "nlsg/asymptotics.hpp"
#include "nlsg/gfun.hpp"
#include "nlsg/phasediagram.hpp"
#include "nlsg/solvers.hpp"

using namespace nlsg;

TEST_CASE("tolerances are validated") {
    Tolerances t;
    t.newton_res = -1;
    CHECK_THROWS_AS(t.validate(), DomainError);
}

TEST_CASE("reduced solve converges from a perturbed guess") {
    const Params p = make_params(1.0, 50.0, 1.0);
    const cplx as = alpha2_asymptotic(1.0, 50.0, 1.0);
    const SolveReport a = solve_alpha2_LT(p, as), b = solve_alpha2_LT(p, 0.8 * as);
    REQUIRE(a.converged);
    REQUIRE(b.converged);
    CHECK(std::abs(a.alpha2 - b.alpha2) < 1e-10);
    const auto m = reduced_moments(a.alpha2, p);
    CHECK(std::abs(m[0]) + std::abs(m[1]) < 1e-9);
}

TEST_CASE("genus-0 alpha0 approaches the WKB point as t -> 0") {
    const double x = 0.4;
    const cplx wkb(0.5 * std::tanh(x), 1 / std::cosh(x));
    double prev = 1e300;
    for (double t : {0.02, 0.01, 0.005}) {
        const SolveReport r = solve_genus0(make_params(x, t, 1.0), wkb);
        REQUIRE(r.converged);
        const double d = std::abs(r.bp.alpha0.value() - wkb);
        CHECK(d < prev);
        prev = d;
        const auto m = genus0_moments(r.bp, make_params(x, t, 1.0));
        CHECK(std::abs(m[0]) + std::abs(m[1]) < 1e-8);
    }
}

TEST_CASE("full genus-2 solve from the long-time seed") {
    const Params p = make_params(1.0, 5.0, 1.0);
    const SolveReport r = solve_branch_points_full(p, long_time_seed(p));
    REQUIRE(r.converged);
    const SystemValues sv = evaluate_genus2_system(r.bp, p);
    for (cplx b : sv.B) CHECK(std::abs(b) < 1e-8);
    CHECK(r.bp.alpha0.imag() > 0);
    CHECK(r.bp.alpha2.imag() > 0);
    CHECK(r.bp.alpha4.imag() > 0);
    // alpha2 of the full solve is close to the reduced one
    const SolveReport lt = solve_alpha2_LT(p, alpha2_asymptotic(1.0, 5.0, 1.0));
    CHECK(std::abs(r.bp.alpha2.value() - lt.alpha2) < 1e-3);
}

TEST_CASE("obstruction root in x zeroes Im h(T)") {
    Warm w;
    const SolveReport r = solve_obstruction_x(100.0, 1.0, obstruction_asymptote(100.0, 1.0), SolveMode::Reduced, {}, &w);
    REQUIRE(r.converged);
    CHECK(r.x < std::log(2.0));
    Warm w2;
    CHECK(std::abs(im_h_at_T_solved(r.x, 100.0, 1.0, SolveMode::Reduced, w2)) < 1e-9);
}

TEST_CASE("reduced continuation in t converges at every node") {
    const Params p0 = make_params(1.0, 50.0, 1.0);
    BranchPoints start;
    start.alpha2 = XPt(alpha2_asymptotic(1.0, 50.0, 1.0));
    const auto out = sweep_continuation(CurveKind::Alpha2LTInT, {50.0, 100.0}, 5, p0, start);
    REQUIRE(out.size() == 5);
    for (const auto& r : out) CHECK(r.converged);
    // Im alpha2 decreases in t
    for (std::size_t k = 1; k < out.size(); ++k) CHECK(out[k].alpha2.imag() < out[k - 1].alpha2.imag());
}

TEST_CASE("first break: critical point of h at a real critical value") {
    const FirstBreakSeed s = first_break_seed(0.2, 1.0);
    const SolveReport r = solve_first_break(0.2, 1.0, s.z0, s.t0, {}, s.alpha0);
    REQUIRE(r.converged);
    CHECK(r.t0 == doctest::Approx(0.2422476567).epsilon(1e-6));
    const GFunction G(r.bp, make_params(0.2, r.t0, 1.0), 1e-12, {r.z0});
    CHECK(std::abs(G.h_prime(XPt(r.z0))) < 1e-8);
    CHECK(r.z0.imag() > std::sqrt(0.75));
}
