#pragma once

#include <array>
#include <vector>

#include "nlsg/contours.hpp"
#include "nlsg/core.hpp"

namespace nlsg {

struct ArcConstants {
    double W = 0;
    double Omega = 0;
    double imag_residue = 0;  // max |Im| of the complex solution
    double solve_residual = 0;
};

// Everything the branch-point solver needs from one quadrature pass.
struct SystemValues {
    std::array<cplx, 3> B;        // B(alpha0), B(alpha2), B(alpha4)
    std::array<cplx, 4> moments;  // closed-loop integrals of xi^j f'/R
    ArcConstants arc;
    long n_evals = 0;
};

SystemValues evaluate_genus2_system(const BranchPoints& bp, const Params& p, double quad_tol = 1e-12);

// Genus 0: the two moment integrals of f'/R and xi f'/R
std::array<cplx, 2> genus0_moments(const BranchPoints& bp, const Params& p, double quad_tol = 1e-12,
                                   const std::vector<cplx>& left_of_cut = {});

ArcConstants solve_W_Omega(const BranchPoints& bp, const Params& p, double quad_tol = 1e-12);

// The g-function of a (solved) set of branch points, with its loops fixed at
// construction. z arguments must avoid the loops; containment in each loop is
// detected by winding number.
class GFunction {
public:
    GFunction(const BranchPoints& bp, const Params& p, double quad_tol = 1e-12,
              const std::vector<cplx>& left_of_cut = {});

    const BranchPoints& branch_points() const { return bp_; }
    const Params& params() const { return p_; }
    const LoopSet& loops() const { return loops_; }
    const ArcConstants& arc_constants() const { return arc_; }
    Sheet sheet() const { return loops_.sheet; }

    // f-loop integral of f/((xi-z)R) plus the W and Omega loop terms
    cplx B(const XPt& z) const;
    cplx two_g(const XPt& z) const;
    cplx h(const XPt& z) const;
    cplx h_prime(const XPt& z) const;
    cplx h_second(const XPt& z) const;
    double im_h(const XPt& z) const { return h(z).imag(); }
    // Im(2 g(T) - f(T)), f taken from the upper half plane
    double im_h_at_T() const;
    // distance from z to the nearest loop node sample, used to size Cauchy circles
    double loop_distance(cplx z) const;

private:
    int inside(const Contour& c, const XPt& z) const;
    cplx B_tol(const XPt& z, double tol) const;

    BranchPoints bp_;
    Params p_;
    double tol_;
    LoopSet loops_;
    ArcConstants arc_;
};

// B(z) for arbitrary (unsolved) genus-2 branch points
cplx eval_B(const XPt& z, const BranchPoints& bp, const Params& p, const ArcConstants& ac, double quad_tol = 1e-12);
cplx eval_h_prime(const XPt& z, const BranchPoints& bp, const Params& p, double quad_tol = 1e-12);
cplx eval_h_second(const XPt& z, const BranchPoints& bp, const Params& p, double quad_tol = 1e-12);
double eval_im_h(const XPt& z, const BranchPoints& bp, const Params& p, double quad_tol = 1e-12);
double eval_im_h_at_T(const BranchPoints& bp, const Params& p, double quad_tol = 1e-12);

// Long-time reduced objects: only alpha2 survives, radical R_LT, loop around
// [-mu/2, alpha2] and its mirror.
struct ReducedLoop {
    Contour loop;
    Sheet sheet;
};
ReducedLoop build_reduced_loops(cplx alpha2, const Params& p);

std::array<cplx, 2> reduced_moments(cplx alpha2, const Params& p, double quad_tol = 1e-13);
cplx eval_g_prime_reduced(const XPt& z, cplx alpha2, const Params& p, double quad_tol = 1e-12);
cplx eval_h_prime_reduced(const XPt& z, cplx alpha2, const Params& p, double quad_tol = 1e-12);
long reduced_h_prime_cost(cplx alpha2, const Params& p, cplx z, double quad_tol = 1e-12);
// Im h(T) = 2 Im of the integral of g' from the real anchor mu/2 + 2 to T, minus Im f(T)
double eval_im_h_at_T_reduced(cplx alpha2, const Params& p, double quad_tol = 1e-12);

}  // namespace nlsg
