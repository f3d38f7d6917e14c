#include "nlsg/phasediagram.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <map>
#include <thread>

#include "nlsg/asymptotics.hpp"
#include "nlsg/geometry.hpp"
#include "nlsg/gfun.hpp"

namespace nlsg {

double HField::masked_fraction() const {
    if (mask.empty()) return 0;
    return double(std::count(mask.begin(), mask.end(), 1)) / double(mask.size());
}

HField sample_im_h(const Region& region, int nx, int ny, const Params& p, const BranchPoints& bp, int jobs,
                   double quad_tol) {
    if (nx < 2 || ny < 2) throw DomainError("grid needs at least 2x2 nodes");
    if (!(region.re_max > region.re_min && region.im_max > region.im_min)) throw DomainError("empty region");
    HField F;
    F.region = region;
    F.nx = nx;
    F.ny = ny;
    F.values.assign(std::size_t(nx) * ny, std::numeric_limits<double>::quiet_NaN());
    F.mask.assign(std::size_t(nx) * ny, 1);

    const GFunction G(bp, p, quad_tol);
    std::vector<std::pair<cplx, cplx>> arcs{{cplx(0.5 * p.mu, 0.0), bp.alpha0.value()},
                                            {p.T, cplx(G.sheet().cut_foot, 0.0)}};
    if (bp.genus == 2) arcs.push_back({bp.alpha2.value(), bp.alpha4.value()});
    const std::size_t n_up = arcs.size();
    for (std::size_t k = 0; k < n_up; ++k) arcs.push_back({std::conj(arcs[k].first), std::conj(arcs[k].second)});
    const double dx = (region.re_max - region.re_min) / (nx - 1), dy = (region.im_max - region.im_min) / (ny - 1);
    const double near = 0.5 * std::max(dx, dy);

    auto node = [&](int i, int j) {
        const cplx z(F.re(i), F.im(j));
        if (std::abs(z.imag()) < 1e-12) return;  // Im h jumps across the real axis
        for (const auto& [a, b] : arcs)
            if (dist_to_segment(z, a, b) < near) return;
        try {
            const double v = G.im_h(XPt(z));
            if (std::isfinite(v)) {
                F.values[std::size_t(j) * nx + i] = v;
                F.mask[std::size_t(j) * nx + i] = 0;
            }
        } catch (const std::exception&) {
        }
    };

    int n_threads = jobs > 0 ? jobs : int(std::max(1u, std::thread::hardware_concurrency()));
    n_threads = std::min(n_threads, ny);
    std::atomic<int> next_row{0};
    auto worker = [&] {
        for (int j = next_row++; j < ny; j = next_row++)
            for (int i = 0; i < nx; ++i) node(i, j);
    };
    std::vector<std::thread> pool;
    for (int k = 1; k < n_threads; ++k) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
    return F;
}

namespace {

// Edge ids: horizontal edge from node (i,j) to (i+1,j) is 2(j nx + i), vertical
// edge from (i,j) to (i,j+1) is 2(j nx + i) + 1.
struct Tracer {
    const HField& F;
    std::map<long, cplx> point;
    std::map<long, std::vector<long>> adj;

    long hid(int i, int j) const { return 2L * (long(j) * F.nx + i); }
    long vid(int i, int j) const { return 2L * (long(j) * F.nx + i) + 1; }

    cplx crossing(long id) const {
        const long n = id / 2;
        const int i = int(n % F.nx), j = int(n / F.nx);
        const int i2 = (id % 2 == 0) ? i + 1 : i, j2 = (id % 2 == 0) ? j : j + 1;
        const double a = F.at(i, j), b = F.at(i2, j2);
        const double s = a / (a - b);
        return cplx(F.re(i) + s * (F.re(i2) - F.re(i)), F.im(j) + s * (F.im(j2) - F.im(j)));
    }

    void link(long e1, long e2) {
        point.emplace(e1, crossing(e1));
        point.emplace(e2, crossing(e2));
        adj[e1].push_back(e2);
        adj[e2].push_back(e1);
    }

    void cell(int i, int j) {
        if (F.masked(i, j) || F.masked(i + 1, j) || F.masked(i, j + 1) || F.masked(i + 1, j + 1)) return;
        const double v00 = F.at(i, j), v10 = F.at(i + 1, j), v01 = F.at(i, j + 1), v11 = F.at(i + 1, j + 1);
        // zero counts as positive so every crossing is strict
        const int c = (v00 >= 0) | (v10 >= 0) << 1 | (v11 >= 0) << 2 | (v01 >= 0) << 3;
        const long bottom = hid(i, j), top = hid(i, j + 1), left = vid(i, j), right = vid(i + 1, j);
        switch (c) {
            case 0: case 15: return;
            case 1: case 14: link(left, bottom); return;
            case 2: case 13: link(bottom, right); return;
            case 3: case 12: link(left, right); return;
            case 4: case 11: link(right, top); return;
            case 6: case 9: link(bottom, top); return;
            case 7: case 8: link(left, top); return;
            case 5: case 10: {
                const bool centre_pos = 0.25 * (v00 + v10 + v01 + v11) >= 0;
                // corners 00 and 11 share a sign; the centre decides whether they connect
                if ((c == 5) == centre_pos) {
                    link(left, top);
                    link(bottom, right);
                } else {
                    link(left, bottom);
                    link(right, top);
                }
                return;
            }
        }
    }
};

}  // namespace

std::vector<Polyline> trace_zero_level(const HField& F) {
    Tracer tr{F, {}, {}};
    for (int j = 0; j + 1 < F.ny; ++j)
        for (int i = 0; i + 1 < F.nx; ++i) tr.cell(i, j);

    std::vector<Polyline> out;
    std::map<long, bool> used;
    auto walk = [&](long start) {
        Polyline line{tr.point[start]};
        used[start] = true;
        long cur = start;
        while (true) {
            long nxt = -1;
            for (long e : tr.adj[cur])
                if (!used[e]) {
                    nxt = e;
                    break;
                }
            if (nxt < 0) {
                // closed loop back to the start
                for (long e : tr.adj[cur])
                    if (e == start && line.size() > 2) line.push_back(tr.point[start]);
                break;
            }
            used[nxt] = true;
            line.push_back(tr.point[nxt]);
            cur = nxt;
        }
        out.push_back(std::move(line));
    };
    // open chains start at edges with a single neighbour, then the remaining loops
    for (const auto& [e, nb] : tr.adj)
        if (nb.size() == 1 && !used[e]) walk(e);
    for (const auto& [e, nb] : tr.adj)
        if (!used[e]) walk(e);
    return out;
}

std::string to_string(CurveTag tag) {
    switch (tag) {
        case CurveTag::FirstBreak: return "first_break";
        case CurveTag::Obstruction: return "obstruction";
        case CurveTag::ObstructionLT: return "obstruction_LT";
        case CurveTag::Asymptote: return "asymptote";
    }
    return "?";
}

namespace {

void check_monotone(const std::vector<double>& g, const char* what) {
    if (g.empty()) throw DomainError(std::string(what) + " grid is empty");
    const bool up = g.size() < 2 || g[1] > g[0];
    for (std::size_t k = 1; k < g.size(); ++k)
        if (up ? !(g[k] > g[k - 1]) : !(g[k] < g[k - 1]))
            throw DomainError(std::string(what) + " grid must be strictly monotone");
}

PointDiagnostics summary(const SolveReport& r) { return {r.converged, r.iterations, r.final_residual, r.message}; }

}  // namespace

CurveSample build_obstruction_curve(double mu, const std::vector<double>& t_grid, SolveMode mode,
                                    const Tolerances& tol) {
    check_monotone(t_grid, "t");
    CurveSample c;
    c.kind = mode == SolveMode::Reduced ? CurveTag::ObstructionLT : CurveTag::Obstruction;
    Warm warm;
    double prev = std::log(2.0);
    bool have_prev = false;
    for (double t : t_grid) {
        const double seed = t > 1 ? obstruction_asymptote(t, mu) : (have_prev ? prev : std::log(2.0));
        SolveReport r;
        try {
            r = solve_obstruction_x(t, mu, seed, mode, tol, &warm);
        } catch (const std::exception& e) {
            r.converged = false;
            r.message = e.what();
            warm = Warm{};
        }
        c.diagnostics.push_back(summary(r));
        if (r.converged) {
            c.points.push_back({t, r.x});
            prev = r.x;
            have_prev = true;
        } else {
            c.failed.push_back(t);
        }
    }
    return c;
}

CurveSample build_asymptote_curve(double mu, const std::vector<double>& t_grid) {
    check_monotone(t_grid, "t");
    CurveSample c;
    c.kind = CurveTag::Asymptote;
    for (double t : t_grid) {
        PointDiagnostics d;
        if (t > 1) {
            c.points.push_back({t, obstruction_asymptote(t, mu)});
            d.converged = true;
        } else {
            c.failed.push_back(t);
            d.message = "asymptote needs t > 1";
        }
        c.diagnostics.push_back(d);
    }
    return c;
}

FirstBreakSeed first_break_seed(double x, double mu, const Tolerances& tol) {
    FirstBreakSeed s;
    s.t0 = std::max(0.02, first_break_small_x(std::max(x, 0.0), mu));
    cplx a(0.5 * mu * std::tanh(x), 1 / std::cosh(x));
    const int n = std::max(1, int(std::ceil(s.t0 / 0.01)));
    for (int k = 1; k <= n; ++k) {
        const SolveReport r = solve_genus0(make_params(x, s.t0 * k / n, mu), a, tol);
        if (!r.converged) throw ConvergenceError("genus-0 continuation failed while seeding the first break");
        a = r.bp.alpha0.value();
    }
    s.alpha0 = a;
    // the critical point sits left of alpha0, above T
    const Params p = make_params(x, s.t0, mu);
    const GFunction G(BranchPoints::genus0(mu, a), p, 1e-8);
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 16; ++i)
        for (int j = 0; j < 16; ++j) {
            const cplx z(-1.5 + (a.real() + 1.5) * (i + 0.5) / 16, p.absT() + 0.05 + 1.6 * (j + 0.5) / 16);
            if (G.loop_distance(z) < 0.05) continue;
            try {
                const double v = std::abs(G.h_prime(XPt(z)));
                if (v < best) {
                    best = v;
                    s.z0 = z;
                }
            } catch (const std::exception&) {
            }
        }
    if (!std::isfinite(best)) throw ConvergenceError("no critical-point seed found");
    return s;
}

CurveSample build_first_break_curve(double mu, const std::vector<double>& x_grid, const Tolerances& tol) {
    check_monotone(x_grid, "x");
    CurveSample c;
    c.kind = CurveTag::FirstBreak;
    bool have = false;
    cplx z, a0;
    double t = 0;
    for (double x : x_grid) {
        SolveReport r;
        try {
            if (!have) {
                const FirstBreakSeed s = first_break_seed(x, mu, tol);
                z = s.z0, t = s.t0, a0 = s.alpha0;
            }
            r = solve_first_break(x, mu, z, t, tol, a0);
        } catch (const std::exception& e) {
            r.converged = false;
            r.message = e.what();
        }
        c.diagnostics.push_back(summary(r));
        if (r.converged) {
            c.points.push_back({x, r.t0});
            z = r.z0, t = r.t0, a0 = r.bp.alpha0.value();
            have = true;
        } else {
            c.failed.push_back(x);
            have = false;
        }
    }
    return c;
}

}  // namespace nlsg
