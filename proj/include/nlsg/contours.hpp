#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "nlsg/core.hpp"
#include "nlsg/scattering.hpp"

namespace nlsg {

class GeometryError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A smooth piece z(s) = anchor + offset(s), s in [0,1]. The anchor is the end
// nearest to a singular point, so panels can shrink geometrically towards s = 0
// without losing the offset in rounding. sign = -1 means the piece is traversed
// from s = 1 to s = 0.
struct Segment {
    enum class Kind { Line, Arc } kind = Kind::Line;
    XPt anchor;
    cplx d0, d1;                             // Line: offset = d0 + s (d1 - d0)
    double r = 0, th0 = 0, th1 = 0;          // Arc: offset = r exp(i (th0 + s (th1 - th0)))
    double sign = 1.0;

    XPt at(double s) const;
    cplx tangent(double s) const;  // d z / d s, without the sign
    XPt start() const { return at(sign > 0 ? 0.0 : 1.0); }
    XPt end() const { return at(sign > 0 ? 1.0 : 0.0); }
};

struct Contour {
    std::vector<Segment> segments;
    bool closed = true;
    double clearance = 0.0;
    std::vector<XPt> singular_points;

    void append(const Contour& other);
    Contour mirrored() const;  // conjugate path; orientation reversed so clockwise stays clockwise
    std::vector<cplx> sample(int per_segment) const;
    double length() const;
};

// Straight piece from a to b, split in two halves anchored at the two ends
Contour make_line(const XPt& a, const XPt& b);
// Arc around centre from angle th0 to th1 (th1 < th0 is clockwise)
Contour make_arc(const XPt& centre, double r, double th0, double th1);

// Clockwise loop around the segment [a,b]; end caps of radius ra and rb and
// straight sides joining the caps.
Contour stadium(const XPt& a, const XPt& b, double ra, double rb);
// Clockwise loop that leaves from and returns to `through`, enclosing the
// segment [through, a], with a cap of radius r around a.
Contour pinched_lobe(const XPt& through, const XPt& a, double r);

// Generic builder: two points -> stadium; one point plus through_point ->
// pinched lobe. The clearance shrinks down to 1e-4 of the separation before a
// GeometryError is raised.
Contour build_loop(const std::vector<cplx>& enclosed, std::optional<cplx> through, double clearance);

// Clockwise loop around [-mu/2, alpha2] and its mirror, pinched at -mu/2
Contour build_reduced_loop(cplx alpha2, const Params& p, double clearance = 0.5);

// Loops for the g-function. Genus 2: f_loop = lobe around [mu/2,alpha0] plus
// stadium around [alpha2,alpha4] (with mirrors); m_loop = the stadium only;
// c_loop = stadium around [alpha0,alpha2] (with mirror). Genus 0: f_loop only.
struct LoopSet {
    Contour f_loop;
    Contour m_loop;
    Contour c_loop;
    Sheet sheet;
    double cut_clearance = 0;  // distance of the ln(z-T) cut from the f-loop
};

// `left_of_cut` lists extra points that must stay left of the ln(z-T) cut foot.
LoopSet build_loops(const BranchPoints& bp, const Params& p, const std::vector<cplx>& left_of_cut = {});

// The open deformed contour (mu/2,a0) u (a0,alpha0) u (alpha2,a2) u (a2,a4) u
// (a4,alpha4) plus mirrored pieces. Real pieces are lifted by `lift` into the
// upper half plane so f' takes its upper limit there.
Contour build_deformed_Cd(const BranchPoints& bp, const Params& p, double lift = 0.0);

int winding_number(const Contour& c, const XPt& z0, int per_segment = 400);
// min distance from sampled contour nodes to the declared singular points
double measured_clearance(const Contour& c, int per_segment = 200);

struct QuadResult {
    cplx value;
    double est_error = 0;
    long n_evals = 0;
};

struct QuadResultN {
    std::vector<cplx> values;
    double est_error = 0;
    long n_evals = 0;
};

// Integrand writes m values for the node z.
using VecIntegrand = std::function<void(const XPt& z, cplx* out)>;

// Adaptive Gauss-Kronrod (7,15) panels, bisected until the Kronrod-Gauss gap of
// every component is below abs_tol or at round-off level.
QuadResultN integrate_n(const Contour& c, int m, const VecIntegrand& fn, double abs_tol = 1e-10,
                        long max_panels = 400000);
QuadResult integrate(const Contour& c, const std::function<cplx(const XPt&)>& fn, double abs_tol = 1e-10);

// Nodes and weights (including dz) of the panels that resolve `density` to
// abs_tol. Cauchy sums over them are accurate for targets a few panel widths away.
struct WeightedNode {
    XPt z;
    cplx w;
};
std::vector<WeightedNode> quadrature_nodes(const Contour& c, const std::function<cplx(const XPt&)>& density,
                                           double abs_tol = 1e-12);

// Foot of the ln(z-T) cut strictly between the `left` and `right` point clouds,
// maximising the distance from the cut segment [T, foot] to both. Returns
// (foot, distance).
std::pair<double, double> choose_cut_foot(const Params& p, const std::vector<cplx>& left,
                                          const std::vector<cplx>& right);

}  // namespace nlsg
