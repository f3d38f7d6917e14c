#include <cmath>
#include <limits>

#include "checks.hpp"
#include "cli.hpp"
#include "nlsg/asymptotics.hpp"
#include "nlsg/gfun.hpp"
#include "nlsg/solvers.hpp"

namespace nlsg::cli {

namespace {

const double NaN = std::numeric_limits<double>::quiet_NaN();

std::vector<double> grid(const std::optional<std::string>& range, const std::optional<double>& single,
                         const std::string& name) {
    if (range) return parse_range(*range, name + "_range");
    if (single) return {*single};
    throw ConfigError("field '" + name + "' or '" + name + "_range' is required");
}

double need(const std::optional<double>& v, const std::string& name) {
    if (!v) throw ConfigError("field '" + name + "' is required");
    return *v;
}

SolveReport failed_report(const std::string& msg) {
    SolveReport r;
    r.message = msg;
    return r;
}

// Genus 0: continuation in t from the WKB point, steps of at most 0.01
SolveReport reach_genus0(double x, double t, double mu, const Tolerances& tol) {
    cplx a(0.5 * mu * std::tanh(x), 1 / std::cosh(x));
    const int n = std::max(1, int(std::ceil(t / 0.01)));
    SolveReport r;
    for (int k = 1; k <= n; ++k) {
        r = solve_genus0(make_params(x, t * k / n, mu), a, tol);
        if (!r.converged) return r;
        a = r.bp.alpha0.value();
    }
    return r;
}

// Genus 2: long-time seed at t >= 4, then geometric steps down in t; if that
// fails, the same at x = 1 followed by steps in x.
SolveReport reach_genus2(double x, double t, double mu, const Tolerances& tol) {
    Tolerances loose = tol;
    loose.newton_res = std::max(tol.newton_res, 1e-6);
    const double t_hi = std::max(t, 4.0);
    auto descend = [&](double xs, BranchPoints bp, SolveReport& r) {
        for (double tk = t_hi;; tk = std::max(t, 0.75 * tk)) {
            r = solve_branch_points_full(make_params(xs, tk, mu), bp, tk == t ? tol : loose);
            if (!r.converged) return false;
            bp = r.bp;
            if (tk == t) return true;
        }
    };
    SolveReport r;
    try {
        if (descend(x, long_time_seed(make_params(x, t_hi, mu)), r)) return r;
    } catch (const std::exception& e) {
        r = failed_report(e.what());
    }
    try {
        if (x == 1.0 || !descend(1.0, long_time_seed(make_params(1.0, t_hi, mu)), r)) return r;
        BranchPoints bp = r.bp;
        const int n = std::max(1, int(std::ceil(std::abs(x - 1.0) / 0.2)));
        for (int k = 1; k <= n; ++k) {
            r = solve_branch_points_full(make_params(1.0 + (x - 1.0) * k / n, t, mu), bp, k == n ? tol : loose);
            if (!r.converged) return r;
            bp = r.bp;
        }
    } catch (const std::exception& e) {
        r = failed_report(e.what());
    }
    return r;
}

SolveReport reach(int genus, double x, double t, double mu, const Tolerances& tol) {
    return genus == 0 ? reach_genus0(x, t, mu, tol) : reach_genus2(x, t, mu, tol);
}

Outcome branch_points(const RunConfig& c) {
    if (c.x_range && c.t_range) throw ConfigError("field 'x_range'/'t_range': sweep one parameter at a time");
    const bool in_t = !c.x_range;
    const std::vector<double> g = in_t ? grid(c.t_range, c.t, "t") : grid(c.x_range, c.x, "x");
    const double fixed = in_t ? need(c.x, "x") : need(c.t, "t");
    Outcome o;
    o.table.columns = {"x", "t", "mu", "re_alpha0", "im_alpha0"};
    if (c.genus == 2)
        for (const char* s : {"re_alpha2", "im_alpha2", "re_alpha4", "im_alpha4", "re_d0", "im_d0", "re_d4", "im_d4",
                              "W", "Omega"})
            o.table.columns.push_back(s);
    o.table.columns.push_back("iterations");
    o.table.columns.push_back("residual");
    bool have = false;
    BranchPoints prev;
    for (double v : g) {
        const double x = in_t ? fixed : v, t = in_t ? v : fixed;
        SolveReport r;
        try {
            const Params p = make_params(x, t, c.mu);
            if (have) r = c.genus == 0 ? solve_genus0(p, prev.alpha0.value(), c.tol) : solve_branch_points_full(p, prev, c.tol);
            if (!r.converged) r = reach(c.genus, x, t, c.mu, c.tol);
        } catch (const std::exception& e) {
            r = failed_report(e.what());
        }
        ++o.n_points;
        std::vector<ojson> row{x, t, c.mu};
        if (r.converged) {
            prev = r.bp;
            have = true;
            const cplx a0 = r.bp.alpha0.value();
            row.insert(row.end(), {a0.real(), a0.imag()});
            if (c.genus == 2) {
                const cplx a2 = r.bp.alpha2.value(), a4 = r.bp.alpha4.value();
                const ArcConstants ac = solve_W_Omega(r.bp, make_params(x, t, c.mu));
                row.insert(row.end(), {a2.real(), a2.imag(), a4.real(), a4.imag(), r.bp.alpha0.off.real(),
                                       r.bp.alpha0.off.imag(), r.bp.alpha4.off.real(), r.bp.alpha4.off.imag(), ac.W,
                                       ac.Omega});
            }
        } else {
            have = false;
            o.failed.push_back(v);
            o.notes[format_number(v)] = r.message;
            while (row.size() + 2 < o.table.columns.size()) row.push_back(NaN);
        }
        row.push_back(r.iterations);
        row.push_back(r.final_residual);
        o.table.rows.push_back(std::move(row));
    }
    return o;
}

Outcome alpha2_lt(const RunConfig& c) {
    const double x = need(c.x, "x");
    const std::vector<double> ts = grid(c.t_range, c.t, "t");
    Outcome o;
    o.table.columns = {"t", "re_alpha2", "im_alpha2", "re_alpha2_asym", "im_alpha2_asym", "gap", "iterations",
                       "residual"};
    std::optional<cplx> prev;
    for (double t : ts) {
        ++o.n_points;
        const cplx as = t > 1 ? alpha2_asymptotic(x, t, c.mu) : cplx(NaN, NaN);
        SolveReport r;
        try {
            if (prev) r = solve_alpha2_LT(make_params(x, t, c.mu), *prev, c.tol);
            if (!r.converged && t > 1) r = solve_alpha2_LT(make_params(x, t, c.mu), as, c.tol);
            if (!r.converged && r.message.empty()) r.message = "no starting guess below t = 1";
        } catch (const std::exception& e) {
            r = failed_report(e.what());
        }
        if (r.converged) {
            prev = r.alpha2;
        } else {
            prev.reset();
            o.failed.push_back(t);
            o.notes[format_number(t)] = r.message;
            r.alpha2 = cplx(NaN, NaN);
        }
        o.table.rows.push_back({t, r.alpha2.real(), r.alpha2.imag(), as.real(), as.imag(), std::abs(r.alpha2 - as),
                                r.iterations, r.final_residual});
    }
    return o;
}

Outcome first_break_curve(const RunConfig& c) {
    const std::vector<double> xs = grid(c.x_range, c.x, "x");
    Outcome o;
    o.table.columns = {"x", "t0", "t0_small_x", "re_z0", "im_z0", "iterations", "residual"};
    bool have = false;
    cplx z, a0;
    double t = 0;
    for (double x : xs) {
        ++o.n_points;
        SolveReport r;
        try {
            if (!have) {
                const FirstBreakSeed s = first_break_seed(x, c.mu, c.tol);
                z = s.z0, t = s.t0, a0 = s.alpha0;
            }
            r = solve_first_break(x, c.mu, z, t, c.tol, a0);
        } catch (const std::exception& e) {
            r = failed_report(e.what());
        }
        if (r.converged) {
            z = r.z0, t = r.t0, a0 = r.bp.alpha0.value();
            have = true;
        } else {
            have = false;
            o.failed.push_back(x);
            o.notes[format_number(x)] = r.message;
            r.t0 = NaN;
            r.z0 = cplx(NaN, NaN);
        }
        o.table.rows.push_back({x, r.t0, first_break_small_x(x, c.mu), r.z0.real(), r.z0.imag(), r.iterations,
                                r.final_residual});
    }
    return o;
}

Outcome obstruction_curve(const RunConfig& c) {
    const std::vector<double> ts = grid(c.t_range, c.t, "t");
    const CurveSample s = build_obstruction_curve(c.mu, ts, c.mode, c.tol);
    Outcome o;
    o.table.columns = {"t", "x_c", "x_asymptote", "gap", "iterations", "residual"};
    std::size_t next = 0;
    for (std::size_t k = 0; k < ts.size(); ++k) {
        ++o.n_points;
        const PointDiagnostics& d = s.diagnostics[k];
        double xc = NaN;
        if (d.converged) xc = s.points[next++].second;
        else {
            o.failed.push_back(ts[k]);
            o.notes[format_number(ts[k])] = d.message;
        }
        const double xa = ts[k] > 1 ? obstruction_asymptote(ts[k], c.mu) : NaN;
        o.table.rows.push_back({ts[k], xc, xa, std::abs(xc - xa), d.iterations, d.residual});
    }
    o.notes["kind"] = to_string(s.kind);
    return o;
}

Outcome im_h_grid(const RunConfig& c) {
    const double x = need(c.x, "x"), t = need(c.t, "t");
    const SolveReport r = reach(c.genus, x, t, c.mu, c.tol);
    if (!r.converged) throw ConvergenceError("branch points at x=" + format_number(x) + " t=" + format_number(t) +
                                             " did not converge: " + r.message);
    const HField F = sample_im_h(c.region, c.nx, c.ny, make_params(x, t, c.mu), r.bp, c.jobs);
    Outcome o;
    o.table.columns = {"re", "im", "im_h", "masked"};
    for (int j = 0; j < F.ny; ++j)
        for (int i = 0; i < F.nx; ++i)
            o.table.rows.push_back({F.re(i), F.im(j), F.masked(i, j) ? NaN : F.at(i, j), int(F.masked(i, j))});
    o.n_points = F.nx * F.ny;
    ojson lines = ojson::array();
    for (const Polyline& L : trace_zero_level(F)) {
        ojson pl = ojson::array();
        for (cplx z : L) pl.push_back({z.real(), z.imag()});
        lines.push_back(std::move(pl));
    }
    o.table.extra["zero_level"] = std::move(lines);
    ojson bp = {{"alpha0", {r.bp.alpha0.value().real(), r.bp.alpha0.value().imag()}}};
    if (c.genus == 2) {
        bp["alpha2"] = {r.bp.alpha2.value().real(), r.bp.alpha2.value().imag()};
        bp["alpha4"] = {r.bp.alpha4.value().real(), r.bp.alpha4.value().imag()};
    }
    o.table.extra["branch_points"] = bp;
    o.notes["masked_fraction"] = F.masked_fraction();
    return o;
}

Outcome integral_table(const RunConfig& c) {
    const double x = c.x.value_or(1.0);
    const std::vector<double> ts = grid(c.t_range, c.t, "t");
    Outcome o;
    o.table.columns = {"t", "tag", "re_numeric", "im_numeric", "re_asymptotic", "im_asymptotic", "gap"};
    const IntegralTag tags[] = {IntegralTag::I1, IntegralTag::I2, IntegralTag::I3, IntegralTag::I4,
                                IntegralTag::I5, IntegralTag::I6, IntegralTag::H2};
    for (double t : ts) {
        ++o.n_points;
        try {
            if (!(t > 1)) throw DomainError("integral table needs t > 1");
            const Params p = make_params(x, t, c.mu);
            const SolveReport r = solve_alpha2_LT(p, alpha2_asymptotic(x, t, c.mu), c.tol);
            if (!r.converged) throw ConvergenceError("reduced solve failed: " + r.message);
            std::vector<std::vector<ojson>> rows;
            for (IntegralTag tag : tags) {
                const IntegralCheck ic = verify_integral_table(tag, c.z, p, r.alpha2);
                rows.push_back({t, to_string(tag), ic.numeric.real(), ic.numeric.imag(), ic.asymptotic.real(),
                                ic.asymptotic.imag(), ic.gap});
            }
            for (auto& row : rows) o.table.rows.push_back(std::move(row));
        } catch (const std::exception& e) {
            o.failed.push_back(t);
            o.notes[format_number(t)] = e.what();
        }
    }
    return o;
}

Outcome verify_asymptotics(const RunConfig& c) {
    std::vector<int> ids = c.criteria;
    if (ids.empty())
        for (int k = 1; k <= checks::kCount; ++k) ids.push_back(k);
    Outcome o;
    o.table.columns = {"id", "title", "pass", "seconds", "time_limit", "note"};
    ojson values = ojson::object();
    for (int id : ids) {
        ++o.n_points;
        const checks::Result r = checks::run(id);
        o.table.rows.push_back({r.id, r.title, r.pass, r.seconds, r.time_limit, r.note});
        ojson v = ojson::object();
        for (const auto& [k, x] : r.values) v[k] = x;
        values[std::to_string(id)] = std::move(v);
        if (!r.pass) o.failed.push_back(id);
    }
    o.table.extra["values"] = std::move(values);
    return o;
}

}  // namespace

Outcome execute(const RunConfig& c) {
    if (c.command == "branch-points") return branch_points(c);
    if (c.command == "alpha2-lt") return alpha2_lt(c);
    if (c.command == "first-break-curve") return first_break_curve(c);
    if (c.command == "obstruction-curve") return obstruction_curve(c);
    if (c.command == "im-h-grid") return im_h_grid(c);
    if (c.command == "integral-table") return integral_table(c);
    if (c.command == "verify-asymptotics") return verify_asymptotics(c);
    throw ConfigError("field 'command': unknown command '" + c.command + "'");
}

}  // namespace nlsg::cli
