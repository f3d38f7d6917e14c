#include "nlsg/gfun.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "nlsg/geometry.hpp"
#include "nlsg/scattering.hpp"

namespace nlsg {

namespace {

struct LoopIntegrals {
    std::vector<cplx> f, m, c;
    long n = 0;
};

// Solve [[m0, c0], [m1, c1]] (W, Omega) = -(f0, f1)
ArcConstants arc_from(const LoopIntegrals& L, cplx& W, cplx& Om) {
    const cplx det = L.m[0] * L.c[1] - L.c[0] * L.m[1];
    if (std::abs(det) < 1e-300) throw ConvergenceError("W/Omega system is singular");
    W = (-L.f[0] * L.c[1] + L.c[0] * L.f[1]) / det;
    Om = (-L.m[0] * L.f[1] + L.f[0] * L.m[1]) / det;
    ArcConstants ac;
    ac.W = W.real();
    ac.Omega = Om.real();
    ac.imag_residue = std::max(std::abs(W.imag()), std::abs(Om.imag()));
    const cplx r0 = L.m[0] * W + L.c[0] * Om + L.f[0];
    const cplx r1 = L.m[1] * W + L.c[1] * Om + L.f[1];
    ac.solve_residual = std::max(std::abs(r0), std::abs(r1));
    return ac;
}

// f-loop: f/R, xi f/R, then Cauchy kernels (f - f(a_k))/((xi - pts_k) R) (a_k =
// shift_k, NaN for no subtraction), then
// the moments; m-loop: 1/R, xi/R; c-loop: 1/R_c, xi/R_c, each followed by
// Cauchy kernels at the points `pts`.
LoopIntegrals loop_integrals(const BranchPoints& bp, const Params& p, const LoopSet& L, const std::vector<XPt>& pts,
                             bool with_moments, double tol, const std::vector<double>& shift = {}) {
    const int np = int(pts.size());
    const int mf = 2 + np + (with_moments ? 4 : 0);
    LoopIntegrals out;
    auto rf = integrate_n(
        L.f_loop, mf,
        [&](const XPt& z, cplx* o) {
            const cplx R = eval_R(z, bp, p);
            const cplx fz = detail::f_nocheck(z, p, L.sheet);
            const cplx fv = fz / R;
            const cplx xi = z.value();
            o[0] = fv;
            o[1] = xi * fv;
            for (int k = 0; k < np; ++k) {
                const cplx num = shift.empty() || std::isnan(shift[k]) ? fz : detail::f_minus_at(z, shift[k], p, L.sheet);
                o[2 + k] = num / (R * (z - pts[k]));
            }
            if (with_moments) {
                const cplx d = detail::fp_nocheck(z, p, L.sheet) / R;
                o[2 + np] = d;
                o[3 + np] = xi * d;
                o[4 + np] = xi * xi * d;
                o[5 + np] = xi * xi * xi * d;
            }
        },
        tol);
    auto kern = [&](const Contour& c, bool comp) {
        return integrate_n(
            c, 2 + np,
            [&](const XPt& z, cplx* o) {
                const cplx inv = 1.0 / (comp ? eval_R_comp(z, bp) : eval_R(z, bp, p));
                o[0] = inv;
                o[1] = z.value() * inv;
                for (int k = 0; k < np; ++k) o[2 + k] = inv / (z - pts[k]);
            },
            tol);
    };
    auto rm = kern(L.m_loop, false);
    auto rc = kern(L.c_loop, true);
    out.f = rf.values;
    out.m = rm.values;
    out.c = rc.values;
    out.n = rf.n_evals + rm.n_evals + rc.n_evals;
    return out;
}

// Clockwise circle integral of 1/((xi - z) K(xi))
cplx circle_kernel(const XPt& centre, double r, const XPt& z, const std::function<cplx(const XPt&)>& radical,
                   double tol, long& n) {
    const Contour c = make_arc(centre, r, PI, -PI);
    auto q = integrate(c, [&](const XPt& x) { return 1.0 / ((x - z) * radical(x)); }, tol);
    n += q.n_evals;
    return q.value;
}

}  // namespace

// alpha0 and alpha4 sit exponentially close to +-mu/2, where each loop that hugs
// them carries O(1/eps) pieces cancelling down to O(ln eps). f is real at
// +-mu/2 and the f-loop encloses every cut of R, so f(+-mu/2) can be subtracted
// exactly from the f-loop kernels at alpha0 and alpha4. The m-loop kernel at
// alpha4 and the c-loop kernel at alpha0 are traded for clockwise circles around
// the cuts those loops leave out (kernel ~ xi^-4, so the loops sum to zero).
SystemValues evaluate_genus2_system(const BranchPoints& bp, const Params& p, double quad_tol) {
    if (bp.genus != 2) throw DomainError("genus-2 system needs genus-2 branch points");
    const LoopSet L = build_loops(bp, p);
    const std::vector<XPt> pts{bp.alpha0, bp.alpha2, bp.alpha4};
    const double h = 0.5 * p.mu;
    const std::vector<double> shift{h, std::nan(""), -h};
    LoopIntegrals I = loop_integrals(bp, p, L, pts, true, quad_tol, shift);
    // circle around [alpha0bar, mu/2, alpha0] avoiding [alpha2, alpha4]
    const XPt c0(h, 0.0);
    const double r0 = 0.5 * dist_to_segment(0.0, bp.alpha2 - c0, bp.alpha4 - c0);
    I.m[4] = -circle_kernel(c0, r0, bp.alpha4, [&](const XPt& x) { return eval_R(x, bp, p); }, quad_tol, I.n);
    // circle around [alpha4, alpha4bar] avoiding [alpha0, alpha2]
    const XPt c4(-h, bp.alpha4.off.real());
    const double r4 = 0.5 * dist_to_segment(0.0, bp.alpha0 - c4, bp.alpha2 - c4);
    I.c[2] = -circle_kernel(c4, r4, bp.alpha0, [&](const XPt& x) { return eval_R_comp(x, bp); }, quad_tol, I.n);
    SystemValues sv;
    cplx W, Om;
    sv.arc = arc_from(I, W, Om);
    for (int k = 0; k < 3; ++k) sv.B[k] = I.f[2 + k] + W * I.m[2 + k] + Om * I.c[2 + k];
    for (int j = 0; j < 4; ++j) sv.moments[j] = I.f[5 + j];
    sv.n_evals = I.n;
    return sv;
}

std::array<cplx, 2> genus0_moments(const BranchPoints& bp, const Params& p, double quad_tol,
                                   const std::vector<cplx>& left_of_cut) {
    const LoopSet L = build_loops(bp, p, left_of_cut);
    auto r = integrate_n(
        L.f_loop, 2,
        [&](const XPt& z, cplx* o) {
            const cplx d = detail::fp_nocheck(z, p, L.sheet) / eval_R(z, bp, p);
            o[0] = d;
            o[1] = z.value() * d;
        },
        quad_tol);
    return {r.values[0], r.values[1]};
}

ArcConstants solve_W_Omega(const BranchPoints& bp, const Params& p, double quad_tol) {
    const LoopSet L = build_loops(bp, p);
    const LoopIntegrals I = loop_integrals(bp, p, L, {}, false, quad_tol);
    cplx W, Om;
    return arc_from(I, W, Om);
}

GFunction::GFunction(const BranchPoints& bp, const Params& p, double quad_tol, const std::vector<cplx>& left_of_cut)
    : bp_(bp), p_(p), tol_(quad_tol), loops_(build_loops(bp, p, left_of_cut)) {
    if (bp.genus == 2) {
        const LoopIntegrals I = loop_integrals(bp_, p_, loops_, {}, false, tol_);
        cplx W, Om;
        arc_ = arc_from(I, W, Om);
    }
}

int GFunction::inside(const Contour& c, const XPt& z) const {
    if (c.segments.empty()) return 0;
    return -winding_number(c, z, 200);
}

double GFunction::loop_distance(cplx z) const {
    double d = std::numeric_limits<double>::infinity();
    for (const Contour* c : {&loops_.f_loop, &loops_.m_loop, &loops_.c_loop})
        for (cplx q : c->sample(64)) d = std::min(d, std::abs(q - z));
    return d;
}

cplx GFunction::B(const XPt& z) const { return B_tol(z, tol_); }

cplx GFunction::B_tol(const XPt& z, double tol) const {
    auto rf = integrate_n(
        loops_.f_loop, 1,
        [&](const XPt& x, cplx* o) { o[0] = detail::f_nocheck(x, p_, loops_.sheet) / ((x - z) * eval_R(x, bp_, p_)); },
        tol);
    cplx b = rf.values[0];
    if (bp_.genus == 2) {
        auto rm = integrate(loops_.m_loop, [&](const XPt& x) { return 1.0 / ((x - z) * eval_R(x, bp_, p_)); }, tol);
        auto rc = integrate(loops_.c_loop, [&](const XPt& x) { return 1.0 / ((x - z) * eval_R_comp(x, bp_)); }, tol);
        b += arc_.W * rm.value + arc_.Omega * rc.value;
    }
    return b;
}

cplx GFunction::two_g(const XPt& z) const {
    const cplx R = eval_R(z, bp_, p_);
    // the loop integrals are multiplied by R, which grows like z^3
    cplx g = R * B_tol(z, tol_ / std::max(1.0, std::abs(R))) / (2.0 * PI * I);
    if (inside(loops_.f_loop, z)) g += detail::f_nocheck(z, p_, loops_.sheet);
    if (bp_.genus == 2) {
        if (inside(loops_.m_loop, z)) g += arc_.W;
        if (inside(loops_.c_loop, z)) g += arc_.Omega * R / eval_R_comp(z, bp_);
    }
    return g;
}

cplx GFunction::h(const XPt& z) const { return two_g(z) - eval_f(z, p_, loops_.sheet); }

cplx GFunction::h_prime(const XPt& z) const {
    const cplx R = eval_R(z, bp_, p_);
    auto r = integrate(
        loops_.f_loop,
        [&](const XPt& x) { return detail::fp_nocheck(x, p_, loops_.sheet) / ((x - z) * eval_R(x, bp_, p_)); },
        tol_ / std::max(1.0, std::abs(R)));
    cplx hp = R * r.value / (2.0 * PI * I);
    if (!inside(loops_.f_loop, z)) hp -= eval_f_prime(z, p_, loops_.sheet);
    return hp;
}

cplx GFunction::h_second(const XPt& z) const {
    const cplx v = z.value();
    double rho = std::min({0.05, 0.5 * loop_distance(v), 0.5 * std::abs(v.imag()),
                           0.5 * std::abs(v - p_.T), 0.5 * std::abs(v - std::conj(p_.T)),
                           0.5 * dist_to_segment(v.imag() > 0 ? v : std::conj(v), p_.T, loops_.sheet.cut_foot)});
    if (!(rho > 0)) throw GeometryError("no room for a Cauchy circle around z");
    const int n = 24;
    cplx acc = 0;
    for (int k = 0; k < n; ++k) {
        const cplx e = std::exp(I * (2 * PI * k / n));
        acc += h_prime(XPt(z.base, z.off + rho * e)) / e;
    }
    return acc / (double(n) * rho);
}

double GFunction::im_h_at_T() const {
    const XPt T(p_.T);
    return two_g(T).imag() - im_f_at_T(p_);
}

cplx eval_B(const XPt& z, const BranchPoints& bp, const Params& p, const ArcConstants& ac, double quad_tol) {
    const LoopSet L = build_loops(bp, p);
    auto rf = integrate(
        L.f_loop, [&](const XPt& x) { return detail::f_nocheck(x, p, L.sheet) / ((x - z) * eval_R(x, bp, p)); },
        quad_tol);
    cplx b = rf.value;
    if (bp.genus == 2) {
        b += ac.W * integrate(L.m_loop, [&](const XPt& x) { return 1.0 / ((x - z) * eval_R(x, bp, p)); }, quad_tol).value;
        b += ac.Omega * integrate(L.c_loop, [&](const XPt& x) { return 1.0 / ((x - z) * eval_R_comp(x, bp)); }, quad_tol).value;
    }
    return b;
}

cplx eval_h_prime(const XPt& z, const BranchPoints& bp, const Params& p, double quad_tol) {
    return GFunction(bp, p, quad_tol).h_prime(z);
}

cplx eval_h_second(const XPt& z, const BranchPoints& bp, const Params& p, double quad_tol) {
    return GFunction(bp, p, quad_tol).h_second(z);
}

double eval_im_h(const XPt& z, const BranchPoints& bp, const Params& p, double quad_tol) {
    return GFunction(bp, p, quad_tol).im_h(z);
}

double eval_im_h_at_T(const BranchPoints& bp, const Params& p, double quad_tol) {
    return GFunction(bp, p, quad_tol).im_h_at_T();
}

ReducedLoop build_reduced_loops(cplx alpha2, const Params& p) {
    ReducedLoop L;
    L.loop = build_reduced_loop(alpha2, p, 0.5);
    std::vector<cplx> left = L.loop.sample(64);
    auto [c, d] = choose_cut_foot(p, left, {cplx(0.5 * p.mu, 0.0)});
    L.sheet.cut_foot = c;
    return L;
}

std::array<cplx, 2> reduced_moments(cplx alpha2, const Params& p, double quad_tol) {
    const ReducedLoop L = build_reduced_loops(alpha2, p);
    auto r = integrate_n(
        L.loop, 2,
        [&](const XPt& z, cplx* o) {
            const cplx d = detail::fp_nocheck(z, p, L.sheet) / eval_R_reduced(z, alpha2, p);
            o[0] = d;
            o[1] = z.value() * d;
        },
        quad_tol);
    return {r.values[0], r.values[1]};
}

namespace {

struct ReducedCauchy {
    cplx phi;
    bool inside;
    long n;
};

ReducedCauchy reduced_cauchy(const ReducedLoop& L, const XPt& z, cplx alpha2, const Params& p, double tol) {
    auto r = integrate(
        L.loop,
        [&](const XPt& x) { return detail::fp_nocheck(x, p, L.sheet) / ((x - z) * eval_R_reduced(x, alpha2, p)); },
        tol);
    return {r.value, winding_number(L.loop, z, 200) != 0, r.n_evals};
}

}  // namespace

cplx eval_g_prime_reduced(const XPt& z, cplx alpha2, const Params& p, double quad_tol) {
    const ReducedLoop L = build_reduced_loops(alpha2, p);
    const auto c = reduced_cauchy(L, z, alpha2, p, quad_tol);
    cplx two_gp = eval_R_reduced(z, alpha2, p) * c.phi / (2.0 * PI * I);
    if (c.inside) two_gp += eval_f_prime(z, p, L.sheet);
    return 0.5 * two_gp;
}

cplx eval_h_prime_reduced(const XPt& z, cplx alpha2, const Params& p, double quad_tol) {
    const ReducedLoop L = build_reduced_loops(alpha2, p);
    const auto c = reduced_cauchy(L, z, alpha2, p, quad_tol);
    cplx hp = eval_R_reduced(z, alpha2, p) * c.phi / (2.0 * PI * I);
    if (!c.inside) hp -= eval_f_prime(z, p, L.sheet);
    return hp;
}

long reduced_h_prime_cost(cplx alpha2, const Params& p, cplx z, double quad_tol) {
    const ReducedLoop L = build_reduced_loops(alpha2, p);
    return reduced_cauchy(L, XPt(z), alpha2, p, quad_tol).n;
}

double eval_im_h_at_T_reduced(cplx alpha2, const Params& p, double quad_tol) {
    const ReducedLoop L = build_reduced_loops(alpha2, p);
    const auto nodes = quadrature_nodes(
        L.loop, [&](const XPt& x) { return detail::fp_nocheck(x, p, L.sheet) / eval_R_reduced(x, alpha2, p); },
        quad_tol);
    std::vector<std::pair<XPt, cplx>> dens;
    dens.reserve(nodes.size());
    for (const auto& nd : nodes)
        dens.emplace_back(nd.z, nd.w * detail::fp_nocheck(nd.z, p, L.sheet) / eval_R_reduced(nd.z, alpha2, p));
    // g'(s) = R_LT(s)/(4 pi i) * sum F_k / (xi_k - s) along the straight path r0 -> T
    const XPt r0(0.5 * p.mu + 2.0);
    const Contour path = make_line(r0, XPt(p.T));
    auto r = integrate(
        path,
        [&](const XPt& s) {
            cplx acc = 0;
            for (const auto& [x, F] : dens) acc += F / (x - s);
            return eval_R_reduced(s, alpha2, p) * acc / (4.0 * PI * I);
        },
        quad_tol);
    return 2.0 * r.value.imag() - im_f_at_T(p);
}

}  // namespace nlsg
