#include <cmath>

#include "doctest.h"
#include "nlsg/gfun.hpp"
#include "nlsg/solvers.hpp"

using namespace nlsg;

namespace {

struct Genus0 {
    Params p = make_params(0.4, 0.05, 1.0);
    BranchPoints bp;
    Genus0() {
        const SolveReport r = solve_genus0(p, cplx(0.5 * std::tanh(0.4), 1 / std::cosh(0.4)));
        REQUIRE(r.converged);
        bp = r.bp;
    }
};

struct Genus2 {
    Params p = make_params(1.0, 5.0, 1.0);
    BranchPoints bp;
    Genus2() {
        const SolveReport r = solve_branch_points_full(p, long_time_seed(p));
        REQUIRE(r.converged);
        bp = r.bp;
    }
};

}  // namespace

TEST_CASE("h' and h'' match differences of h and h'") {
    Genus0 g;
    const GFunction G(g.bp, g.p);
    for (cplx z : {cplx(1.2, 0.6), cplx(-0.9, 1.6), cplx(0.2, -1.9)}) {
        const double e = 1e-5;
        const cplx d1 = (G.h(XPt(z + e)) - G.h(XPt(z - e))) / (2 * e);
        const cplx d2 = (G.h_prime(XPt(z + e)) - G.h_prime(XPt(z - e))) / (2 * e);
        CHECK(std::abs(G.h_prime(XPt(z)) - d1) < 1e-7);
        CHECK(std::abs(G.h_second(XPt(z)) - d2) < 1e-7);
    }
}

TEST_CASE("Im h is odd under conjugation") {
    Genus2 g;
    const GFunction G(g.bp, g.p);
    for (cplx z : {cplx(0.9, 0.5), cplx(-1.1, 1.3), cplx(0.05, 2.0)})
        CHECK(std::abs(G.im_h(XPt(z)) + G.im_h(XPt(std::conj(z)))) < 1e-10);
}

TEST_CASE("h_+ + h_- tends to zero across the main arc at first order") {
    Genus0 g;
    const GFunction G(g.bp, g.p);
    const cplx a = 0.5, b = g.bp.alpha0.value(), m = 0.5 * (a + b), n = I * (b - a) / std::abs(b - a);
    double d[2];
    int k = 0;
    for (double delta : {1e-3, 1e-4}) d[k++] = std::abs(G.h(XPt(m + delta * n)) + G.h(XPt(m - delta * n)));
    CHECK(d[1] < 1e-3);
    CHECK(d[0] / d[1] > 5);
    CHECK(d[0] / d[1] < 20);
}

TEST_CASE("B vanishes at the solved branch points") {
    Genus2 g;
    const GFunction G(g.bp, g.p);
    const SystemValues sv = evaluate_genus2_system(g.bp, g.p);
    for (cplx b : sv.B) CHECK(std::abs(b) < 1e-8);
    CHECK(std::abs(G.arc_constants().W - sv.arc.W) < 1e-10);
    CHECK(std::abs(G.arc_constants().Omega - sv.arc.Omega) < 1e-10);
}

TEST_CASE("Im h(T) agrees between the class and the free function") {
    Genus2 g;
    const GFunction G(g.bp, g.p);
    CHECK(std::abs(G.im_h_at_T() - eval_im_h_at_T(g.bp, g.p)) < 1e-10);
}

TEST_CASE("g' = (h' + f')/2 approaches ln z/2 - ln(z+mu/2)/2 + mu/(4z) along the imaginary axis") {
    Genus2 g;
    const GFunction G(g.bp, g.p);
    double prev = 0;
    for (double y : {10.0, 100.0, 1000.0}) {
        const cplx z(0.0, y);
        const cplx gp = 0.5 * (G.h_prime(XPt(z)) + eval_f_prime(XPt(z), g.p));
        const double r = std::abs(z * z * (gp - 0.5 * std::log(z) + 0.5 * std::log(z + 0.5) - 0.25 / z));
        if (prev > 0) CHECK(r < 3 * prev);
        prev = r;
    }
}

TEST_CASE("reduced g' is consistent with the reduced h'") {
    const Params p = make_params(1.0, 100.0, 1.0);
    const SolveReport r = solve_alpha2_LT(p, cplx(0.06, 0.05));
    REQUIRE(r.converged);
    const cplx z(0.3, 1.5);
    const cplx hp = eval_h_prime_reduced(XPt(z), r.alpha2, p), gp = eval_g_prime_reduced(XPt(z), r.alpha2, p);
    CHECK(std::abs(hp - (2.0 * gp - eval_f_prime(XPt(z), p))) < 1e-9);
}
