#pragma once

#include <string>
#include <utility>
#include <vector>

#include "nlsg/core.hpp"
#include "nlsg/gfun.hpp"

namespace nlsg {

struct SolveReport {
    bool converged = false;
    int iterations = 0;
    double final_residual = 0;
    BranchPoints bp;   // full and genus-0 solves
    cplx alpha2;       // reduced solve
    cplx z0;           // first break: critical point
    double t0 = 0;     // first break / obstruction: time
    double x = 0;      // obstruction solved for x
    double param = 0;  // sweep parameter
    std::string message;
};

// Damped Newton on Re/Im B(alpha_j) = 0, j = 0,2,4. alpha0 and alpha4 are
// iterated as log-modulus and argument of their offsets from +-mu/2, alpha2 in
// Cartesian coordinates; finite-difference Jacobian.
SolveReport solve_branch_points_full(const Params& p, const BranchPoints& guess, const Tolerances& tol = {});

// Damped Newton on the two reduced moment conditions; real parts vanish by
// symmetry, so the imaginary parts form the 2x2 real system.
SolveReport solve_alpha2_LT(const Params& p, cplx guess, const Tolerances& tol = {});

// Genus 0: alpha0 from the two moment conditions. Points in `left_of_cut` are
// kept left of the ln(z-T) cut.
SolveReport solve_genus0(const Params& p, cplx guess, const Tolerances& tol = {},
                         const std::vector<cplx>& left_of_cut = {});

// Alternating scheme: Newton in z for h'(z0) = 0, then a secant step in t on
// Im[h - h'^2/(2h'')](z0) = 0, until both residuals are small.
SolveReport solve_first_break(double x, double mu, cplx guess_z, double guess_t, const Tolerances& tol = {},
                              cplx guess_alpha0 = cplx(0.0, 0.0));

enum class SolveMode { Full, Reduced, Auto };

// Solver state carried along continuation sweeps
struct Warm {
    bool have_full = false;
    BranchPoints bp;
    bool have_lt = false;
    cplx alpha2;
    double t = 0;
    double x = 0;
};

// Im h(T) at (x,t) with branch points solved in the requested mode (Auto: full
// below t_switch). `warm` seeds and receives the branch points.
double im_h_at_T_solved(double x, double t, double mu, SolveMode mode, Warm& warm, const Tolerances& tol = {},
                        double t_switch = 10.0);

// Larger root in t of Im h(T, x, t) = 0 within the bracket: geometric scan for
// the last sign change, then bisection with secant polish.
SolveReport solve_obstruction_time(double x, double mu, std::pair<double, double> t_bracket,
                                   SolveMode mode = SolveMode::Auto, const Tolerances& tol = {}, int scan_points = 24);

// Root in x of Im h(T, x, t) = 0 at fixed t by secant from `x_seed`
SolveReport solve_obstruction_x(double t, double mu, double x_seed, SolveMode mode = SolveMode::Reduced,
                                const Tolerances& tol = {}, Warm* warm = nullptr);

// Seeds for the full solver from the long-time picture: alpha2 from the reduced
// solve, alpha0 and alpha4 at +-mu/2 + i*eps.
BranchPoints long_time_seed(const Params& p, double eps = 1e-2);

enum class CurveKind { BranchPointsInT, BranchPointsInX, BranchPointsInMu, Alpha2LTInT };

// Warm-started continuation over a monotone grid. Failed steps are bisected
// up to three levels before the point is reported as failed.
std::vector<SolveReport> sweep_continuation(CurveKind kind, std::pair<double, double> range, int n, const Params& p0,
                                            const BranchPoints& start, const Tolerances& tol = {});

}  // namespace nlsg
