#include "nlsg/contours.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "nlsg/geometry.hpp"

namespace nlsg {

XPt Segment::at(double s) const {
    if (kind == Kind::Line) return {anchor.base, anchor.off + (d0 + s * (d1 - d0))};
    return {anchor.base, anchor.off + r * std::exp(I * (th0 + s * (th1 - th0)))};
}

cplx Segment::tangent(double s) const {
    if (kind == Kind::Line) return d1 - d0;
    return I * r * (th1 - th0) * std::exp(I * (th0 + s * (th1 - th0)));
}

void Contour::append(const Contour& other) {
    segments.insert(segments.end(), other.segments.begin(), other.segments.end());
    singular_points.insert(singular_points.end(), other.singular_points.begin(), other.singular_points.end());
    if (clearance == 0 || (other.clearance > 0 && other.clearance < clearance)) clearance = other.clearance;
}

Contour Contour::mirrored() const {
    Contour m = *this;
    m.segments.clear();
    for (auto it = segments.rbegin(); it != segments.rend(); ++it) {
        Segment s = *it;
        s.anchor = s.anchor.conj();
        s.d0 = std::conj(s.d0);
        s.d1 = std::conj(s.d1);
        s.th0 = -s.th0;
        s.th1 = -s.th1;
        s.sign = -s.sign;
        m.segments.push_back(s);
    }
    for (auto& q : m.singular_points) q = q.conj();
    return m;
}

std::vector<cplx> Contour::sample(int per_segment) const {
    std::vector<cplx> out;
    out.reserve(segments.size() * per_segment);
    for (const auto& s : segments)
        for (int k = 0; k < per_segment; ++k) out.push_back(s.at((k + 0.5) / per_segment).value());
    return out;
}

double Contour::length() const {
    double L = 0;
    for (const auto& s : segments)
        L += s.kind == Segment::Kind::Line ? std::abs(s.d1 - s.d0) : s.r * std::abs(s.th1 - s.th0);
    return L;
}

Contour make_line(const XPt& a, const XPt& b) {
    const cplx d = b - a;
    Contour c;
    c.closed = false;
    Segment s1;
    s1.anchor = a;
    s1.d0 = 0.0;
    s1.d1 = 0.5 * d;
    Segment s2;
    s2.anchor = b;
    s2.d0 = 0.0;
    s2.d1 = -0.5 * d;
    s2.sign = -1.0;
    c.segments = {s1, s2};
    return c;
}

Contour make_arc(const XPt& centre, double r, double th0, double th1) {
    Segment s;
    s.kind = Segment::Kind::Arc;
    s.anchor = centre;
    s.r = r;
    s.th0 = th0;
    s.th1 = th1;
    Contour c;
    c.closed = false;
    c.segments = {s};
    return c;
}

namespace {

XPt shifted(const XPt& a, cplx d) { return {a.base, a.off + d}; }

}  // namespace

Contour stadium(const XPt& a, const XPt& b, double ra, double rb) {
    const cplx d = b - a;
    const double th = std::arg(d);
    const cplx n = std::exp(I * (th + PI / 2));
    Contour c;
    c.append(make_line(shifted(a, ra * n), shifted(b, rb * n)));
    c.append(make_arc(b, rb, th + PI / 2, th - PI / 2));
    c.append(make_line(shifted(b, -rb * n), shifted(a, -ra * n)));
    c.append(make_arc(a, ra, th - PI / 2, th - 3 * PI / 2));
    c.closed = true;
    c.clearance = std::min(ra, rb);
    c.singular_points = {a, b};
    return c;
}

Contour pinched_lobe(const XPt& through, const XPt& a, double r) {
    const cplx d = a - through;
    const double th = std::arg(d);
    const cplx n = std::exp(I * (th + PI / 2));
    Contour c;
    c.append(make_line(through, shifted(a, r * n)));
    c.append(make_arc(a, r, th + PI / 2, th - PI / 2));
    c.append(make_line(shifted(a, -r * n), through));
    c.closed = true;
    c.clearance = r;
    c.singular_points = {a};
    return c;
}

Contour build_loop(const std::vector<cplx>& enclosed, std::optional<cplx> through, double clearance) {
    if (!(clearance > 0)) throw GeometryError("clearance must be positive");
    if (through && enclosed.size() == 1) {
        const double sep = std::abs(enclosed[0] - *through);
        if (sep == 0) throw GeometryError("enclosed point coincides with the pinch point");
        double r = clearance;
        while (r >= 0.5 * sep && r > 1e-4 * sep) r *= 0.5;
        if (r >= 0.5 * sep) throw GeometryError("clearance too large for the lobe");
        return pinched_lobe(XPt(*through), XPt(enclosed[0]), r);
    }
    if (!through && enclosed.size() == 2) {
        const double sep = std::abs(enclosed[1] - enclosed[0]);
        if (sep == 0) throw GeometryError("enclosed points coincide");
        double r = clearance;
        while (2 * r >= sep && r > 1e-4 * sep) r *= 0.5;
        if (2 * r >= sep || r < 1e-4 * sep) throw GeometryError("enclosed points closer than the clearance floor allows");
        return stadium(XPt(enclosed[0]), XPt(enclosed[1]), r, r);
    }
    throw GeometryError("build_loop supports a segment (two points) or a pinched lobe (one point and a pinch)");
}

Contour build_reduced_loop(cplx alpha2, const Params& p, double clearance) {
    if (!(alpha2.imag() > 0)) throw DomainError("alpha2 must lie in the upper half plane");
    const XPt pinch(-0.5 * p.mu, 0.0);
    const XPt a(alpha2);
    const double r = clearance * std::min(alpha2.imag(), std::abs(a - pinch));
    Contour up = pinched_lobe(pinch, a, r);
    Contour c = up;
    c.append(up.mirrored());
    return c;
}

namespace {

double min_real(const std::vector<cplx>& v) {
    double m = std::numeric_limits<double>::infinity();
    for (auto z : v) m = std::min(m, z.real());
    return m;
}
double max_real(const std::vector<cplx>& v) {
    double m = -std::numeric_limits<double>::infinity();
    for (auto z : v) m = std::max(m, z.real());
    return m;
}

}  // namespace

std::pair<double, double> choose_cut_foot(const Params& p, const std::vector<cplx>& left,
                                          const std::vector<cplx>& right) {
    const double lo = left.empty() ? -10.0 : max_real(left);
    const double hi = min_real(right);
    if (!(lo < hi)) throw GeometryError("no room for the ln(z-T) cut between the left and right arcs");
    std::vector<cplx> all = left;
    all.insert(all.end(), right.begin(), right.end());
    double best = lo, best_d = -1;
    const int n = 200;
    for (int k = 1; k < n; ++k) {
        const double c = lo + (hi - lo) * k / n;
        double d = std::numeric_limits<double>::infinity();
        for (auto z : all)
            if (z.imag() > 0) d = std::min(d, dist_to_segment(z, p.T, cplx(c, 0.0)));
        if (d > best_d) {
            best_d = d;
            best = c;
        }
    }
    return {best, best_d};
}

LoopSet build_loops(const BranchPoints& bp, const Params& p, const std::vector<cplx>& left_of_cut) {
    const XPt half(0.5 * p.mu, 0.0);
    const XPt& a0 = bp.alpha0;
    if (!(a0.imag() > 0)) throw GeometryError("alpha0 must lie strictly above the real axis");
    LoopSet L;
    double r0 = 0.5 * std::min(a0.imag(), std::abs(a0 - half));
    // T and the points kept left of the cut stay outside the lobe
    r0 = std::min(r0, std::abs(a0.value() - p.T) / 3);
    for (auto z : left_of_cut) r0 = std::min(r0, std::abs(a0.value() - z) / 3);
    if (bp.genus == 2) {
        const XPt& a2 = bp.alpha2;
        const XPt& a4 = bp.alpha4;
        if (!(a2.imag() > 0 && a4.imag() > 0)) throw GeometryError("alpha2, alpha4 must lie strictly above the real axis");
        const double d24 = std::abs(a2 - a4);
        const double d02 = std::abs(a0 - a2);
        const double d04 = std::abs(a0 - a4);
        r0 = std::min({r0, d02 / 3, d04 / 3});
        // the ln(z-T) cut has to pass between the alpha2 cap and the lobe at mu/2
        const double dT2 = dist_to_segment(a2.value(), p.T, half.value());
        const double r2 = std::min({0.5 * a2.imag(), d24 / 3, dT2 / 3});
        const double r4 = std::min(0.5 * a4.imag(), d24 / 3);
        const double rc0 = std::min({0.5 * a0.imag(), d02 / 3, r0});
        const double rc2 = std::min({0.5 * a2.imag(), d02 / 3, d24 / 3});
        Contour lobe = pinched_lobe(half, a0, r0);
        Contour st = stadium(a2, a4, r2, r4);
        Contour cs = stadium(a0, a2, rc0, rc2);
        std::vector<cplx> left = st.sample(64);
        left.insert(left.end(), left_of_cut.begin(), left_of_cut.end());
        auto [c, dc] = choose_cut_foot(p, left, lobe.sample(64));
        L.sheet.cut_foot = c;
        L.cut_clearance = dc;
        L.f_loop = lobe;
        L.f_loop.append(lobe.mirrored());
        L.m_loop = st;
        L.m_loop.append(st.mirrored());
        L.f_loop.append(L.m_loop);
        L.c_loop = cs;
        L.c_loop.append(cs.mirrored());
    } else {
        Contour lobe = pinched_lobe(half, a0, r0);
        auto [c, dc] = choose_cut_foot(p, left_of_cut, lobe.sample(64));
        L.sheet.cut_foot = c;
        L.cut_clearance = dc;
        L.f_loop = lobe;
        L.f_loop.append(lobe.mirrored());
    }
    return L;
}

Contour build_deformed_Cd(const BranchPoints& bp, const Params& p, double lift) {
    if (bp.genus != 2) throw GeometryError("C_d is defined for genus 2");
    const double a0 = bp.alpha0.value().real(), a2 = bp.alpha2.value().real(), a4 = bp.alpha4.value().real();
    const XPt half(0.5 * p.mu, 0.0);
    const cplx up(0.0, lift);
    // real points carry the same base as the nearby branch point
    const XPt A0(half.base, (a0 - 0.5 * p.mu) + up);
    const XPt A4(-0.5 * p.mu, (a4 + 0.5 * p.mu) + up);
    const XPt A2(0.0, cplx(a2, 0.0) + up);
    Contour upper;
    upper.append(make_line(XPt(half.base, up), A0));
    upper.append(make_line(A0, bp.alpha0));
    upper.append(make_line(bp.alpha2, A2));
    upper.append(make_line(A2, A4));
    upper.append(make_line(A4, bp.alpha4));
    Contour c = upper;
    c.append(upper.mirrored());
    c.closed = false;
    return c;
}

int winding_number(const Contour& c, const XPt& z0, int per_segment) {
    double total = 0;
    for (const auto& s : c.segments) {
        double prev = std::arg(s.start() - z0);
        for (int k = 1; k <= per_segment; ++k) {
            const double u = double(k) / per_segment;
            const double cur = std::arg(s.at(s.sign > 0 ? u : 1 - u) - z0);
            double d = cur - prev;
            if (d > PI) d -= 2 * PI;
            if (d < -PI) d += 2 * PI;
            total += d;
            prev = cur;
        }
    }
    return int(std::lround(total / (2 * PI)));
}

double measured_clearance(const Contour& c, int per_segment) {
    double m = std::numeric_limits<double>::infinity();
    for (const auto& s : c.segments)
        for (int k = 0; k <= per_segment; ++k) {
            const XPt z = s.at(double(k) / per_segment);
            for (const auto& q : c.singular_points) m = std::min(m, std::abs(z - q));
        }
    return m;
}

namespace {

// Gauss-Kronrod 7-15 on [-1,1]
constexpr std::array<double, 8> kXK = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                                       0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                                       0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                                       0.207784955007898467600689403773245, 0.0};
constexpr std::array<double, 8> kWK = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                                       0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                                       0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                                       0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWG = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                                       0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
    double a, b;
};

}  // namespace

QuadResultN integrate_n(const Contour& c, int m, const VecIntegrand& fn, double abs_tol, long max_panels) {
    QuadResultN res;
    res.values.assign(m, 0.0);
    std::vector<cplx> fv(15 * m), kr(m), ga(m);
    std::vector<double> l1(m);
    long panels = 0;
    const double panel_tol = 0.1 * abs_tol;
    for (const auto& seg : c.segments) {
        std::vector<Panel> stack{{0.0, 1.0}};
        while (!stack.empty()) {
            const Panel pn = stack.back();
            stack.pop_back();
            if (++panels > max_panels) throw ConvergenceError("quadrature exceeded the panel budget");
            const double mid = 0.5 * (pn.a + pn.b), half = 0.5 * (pn.b - pn.a);
            for (int k = 0; k < 15; ++k) {
                const double x = k < 7 ? -kXK[k] : (k == 7 ? 0.0 : kXK[14 - k]);
                const double s = mid + half * x;
                const cplx w = seg.tangent(s) * (half * seg.sign);
                fn(seg.at(s), &fv[k * m]);
                for (int j = 0; j < m; ++j) fv[k * m + j] *= w;
            }
            res.n_evals += 15;
            double worst = 0;
            bool ok = true;
            for (int j = 0; j < m; ++j) {
                cplx K = 0, G = 0;
                double A = 0;
                for (int k = 0; k < 15; ++k) {
                    const int kk = k < 8 ? k : 14 - k;
                    const cplx v = fv[k * m + j];
                    K += kWK[kk] * v;
                    A += kWK[kk] * std::abs(v);
                    if (kk % 2 == 1) G += kWG[kk / 2] * v;
                }
                kr[j] = K;
                l1[j] = A;
                const double e = std::abs(K - G);
                if (!std::isfinite(e)) throw ConvergenceError("integrand is not finite on the contour");
                worst = std::max(worst, e);
                if (e > std::max(panel_tol, 1e-12 * A)) ok = false;
            }
            if (ok || half < 1e-22) {
                for (int j = 0; j < m; ++j) res.values[j] += kr[j];
                res.est_error += worst;
            } else {
                stack.push_back({pn.a, mid});
                stack.push_back({mid, pn.b});
            }
        }
    }
    return res;
}

std::vector<WeightedNode> quadrature_nodes(const Contour& c, const std::function<cplx(const XPt&)>& density,
                                           double abs_tol) {
    std::vector<WeightedNode> nodes;
    const double panel_tol = 0.1 * abs_tol;
    for (const auto& seg : c.segments) {
        std::vector<Panel> stack{{0.0, 1.0}};
        while (!stack.empty()) {
            const Panel pn = stack.back();
            stack.pop_back();
            const double mid = 0.5 * (pn.a + pn.b), half = 0.5 * (pn.b - pn.a);
            std::array<WeightedNode, 15> loc;
            cplx K = 0, G = 0;
            double A = 0;
            for (int k = 0; k < 15; ++k) {
                const int kk = k < 8 ? k : 14 - k;
                const double x = k < 7 ? -kXK[k] : (k == 7 ? 0.0 : kXK[14 - k]);
                const double s = mid + half * x;
                loc[k].z = seg.at(s);
                loc[k].w = seg.tangent(s) * (half * seg.sign) * kWK[kk];
                const cplx v = density(loc[k].z) * seg.tangent(s) * (half * seg.sign);
                K += kWK[kk] * v;
                A += kWK[kk] * std::abs(v);
                if (kk % 2 == 1) G += kWG[kk / 2] * v;
            }
            const double e = std::abs(K - G);
            if (!std::isfinite(e)) throw ConvergenceError("density is not finite on the contour");
            if (e <= std::max(panel_tol, 1e-12 * A) || half < 1e-22) {
                nodes.insert(nodes.end(), loc.begin(), loc.end());
            } else {
                if (nodes.size() > 6000000) throw ConvergenceError("node budget exceeded");
                stack.push_back({pn.a, mid});
                stack.push_back({mid, pn.b});
            }
        }
    }
    return nodes;
}

QuadResult integrate(const Contour& c, const std::function<cplx(const XPt&)>& fn, double abs_tol) {
    auto r = integrate_n(c, 1, [&](const XPt& z, cplx* out) { out[0] = fn(z); }, abs_tol);
    return {r.values[0], r.est_error, r.n_evals};
}

}  // namespace nlsg
