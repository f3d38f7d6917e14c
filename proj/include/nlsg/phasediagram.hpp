#pragma once

#include <string>
#include <utility>
#include <vector>

#include "nlsg/core.hpp"
#include "nlsg/solvers.hpp"

namespace nlsg {

struct Region {
    double re_min = -1.2, re_max = 1.2;
    double im_min = -1.2, im_max = 1.2;
};

// Im h on a uniform grid; node (i, j) sits at re_min + i dx + i (im_min + j dy)
struct HField {
    Region region;
    int nx = 0, ny = 0;
    std::vector<double> values;       // j * nx + i
    std::vector<unsigned char> mask;  // 1: on a cut or arc, or the evaluation failed

    double re(int i) const { return region.re_min + (region.re_max - region.re_min) * i / (nx - 1); }
    double im(int j) const { return region.im_min + (region.im_max - region.im_min) * j / (ny - 1); }
    double at(int i, int j) const { return values[std::size_t(j) * nx + i]; }
    bool masked(int i, int j) const { return mask[std::size_t(j) * nx + i] != 0; }
    double masked_fraction() const;
};

// jobs <= 0 uses all hardware threads. Failures are masked, never thrown.
HField sample_im_h(const Region& region, int nx, int ny, const Params& p, const BranchPoints& bp, int jobs = 0,
                   double quad_tol = 1e-10);

using Polyline = std::vector<cplx>;

// Marching squares on Im h = 0 with linear interpolation along cell edges.
// Cells touching a masked node are skipped; saddles are resolved by the mean
// of the four corners.
std::vector<Polyline> trace_zero_level(const HField& field);

enum class CurveTag { FirstBreak, Obstruction, ObstructionLT, Asymptote };
std::string to_string(CurveTag tag);

struct PointDiagnostics {
    bool converged = false;
    int iterations = 0;
    double residual = 0;
    std::string message;
};

struct CurveSample {
    CurveTag kind = CurveTag::Asymptote;
    std::vector<std::pair<double, double>> points;  // (parameter, value); failed points are left out
    std::vector<double> failed;                     // parameters that did not converge
    std::vector<PointDiagnostics> diagnostics;      // one per attempted parameter, in grid order
};

// x_c(t) for each t: secant in x seeded from the asymptote (previous point for t <= 1)
CurveSample build_obstruction_curve(double mu, const std::vector<double>& t_grid, SolveMode mode = SolveMode::Reduced,
                                    const Tolerances& tol = {});

// ln 2 + c2 ln t/t + c3/t on the grid (t > 1)
CurveSample build_asymptote_curve(double mu, const std::vector<double>& t_grid);

// Seed for the first-break solve at x: time from the small-x law, alpha0 from
// the genus-0 continuation, z0 from a coarse scan of |h'| in the upper half plane.
struct FirstBreakSeed {
    cplx z0;
    double t0 = 0;
    cplx alpha0;
};
FirstBreakSeed first_break_seed(double x, double mu, const Tolerances& tol = {});

// t0(x) by continuation along x_grid, each point warm-started from the last
CurveSample build_first_break_curve(double mu, const std::vector<double>& x_grid, const Tolerances& tol = {});

}  // namespace nlsg
