#include "nlsg/solvers.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "nlsg/asymptotics.hpp"
#include "nlsg/contours.hpp"
#include "nlsg/scattering.hpp"

namespace nlsg {

namespace {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

const double INF = std::numeric_limits<double>::infinity();

struct NewtonResult {
    Vec u;
    double res = INF;
    int iterations = 0;
    bool converged = false;
    std::string message;
};

// Residual function; throws on inadmissible points (treated as infinite residual)
using ResidualFn = std::function<Vec(const Vec&)>;

bool try_eval(const ResidualFn& F, const Vec& u, Vec& out) {
    try {
        out = F(u);
        return out.allFinite();
    } catch (const std::exception&) {
        return false;
    }
}

// Damped Newton with forward-difference Jacobian (relative step 1e-7) and
// Armijo backtracking on the max-norm of the residual.
NewtonResult damped_newton(const ResidualFn& F, Vec u, double res_tol, int max_iter,
                           const std::function<std::string(const Vec&)>& stop = {}) {
    NewtonResult nr;
    Vec Fu;
    if (!try_eval(F, u, Fu)) {
        nr.u = u;
        nr.message = "residual not evaluable at the initial guess";
        return nr;
    }
    const int n = int(u.size());
    for (int it = 0; it < max_iter; ++it) {
        nr.res = Fu.cwiseAbs().maxCoeff();
        nr.u = u;
        nr.iterations = it;
        if (nr.res <= res_tol) {
            nr.converged = true;
            return nr;
        }
        Mat J(Fu.size(), n);
        for (int j = 0; j < n; ++j) {
            const double h = 1e-7 * std::max(std::abs(u[j]), 1e-2);
            Vec up = u, Fp;
            up[j] += h;
            if (!try_eval(F, up, Fp)) {
                up[j] = u[j] - h;
                if (!try_eval(F, up, Fp)) {
                    nr.message = "Jacobian column not evaluable";
                    return nr;
                }
                J.col(j) = (Fu - Fp) / h;
            } else {
                J.col(j) = (Fp - Fu) / h;
            }
        }
        const Vec d = J.colPivHouseholderQr().solve(-Fu);
        if (!d.allFinite()) {
            nr.message = "singular Jacobian";
            return nr;
        }
        double lam = 1.0;
        bool accepted = false;
        Vec un, Fn;
        for (int k = 0; k < 12; ++k, lam *= 0.5) {
            un = u + lam * d;
            if (try_eval(F, un, Fn) && Fn.cwiseAbs().maxCoeff() <= (1 - 1e-4 * lam) * nr.res) {
                accepted = true;
                break;
            }
        }
        if (!accepted) {
            nr.message = "line search failed; residual stalled at " + std::to_string(nr.res);
            return nr;
        }
        u = un;
        Fu = Fn;
        if (stop) {
            const std::string why = stop(u);
            if (!why.empty()) {
                nr.u = u;
                nr.res = Fu.cwiseAbs().maxCoeff();
                nr.iterations = it + 1;
                nr.message = why;
                return nr;
            }
        }
    }
    nr.u = u;
    nr.res = Fu.cwiseAbs().maxCoeff();
    nr.iterations = max_iter;
    nr.converged = nr.res <= res_tol;
    if (!nr.converged) nr.message = "iteration limit reached";
    return nr;
}

double inner_quad_tol(const Tolerances& tol) { return std::min(tol.quad_abs, 1e-2 * tol.newton_res); }

// alpha0 and alpha4 as log-modulus and argument of their offsets
BranchPoints unpack_full(const Vec& u, double mu) {
    const cplx d0 = std::polar(std::exp(u[0]), u[1]);
    const cplx d4 = std::polar(std::exp(u[4]), u[5]);
    return BranchPoints::genus2_offsets(mu, d0, cplx(u[2], u[3]), d4);
}

Vec pack_full(const BranchPoints& bp) {
    Vec u(6);
    u << std::log(std::abs(bp.alpha0.off)), std::arg(bp.alpha0.off), bp.alpha2.off.real(), bp.alpha2.off.imag(),
        std::log(std::abs(bp.alpha4.off)), std::arg(bp.alpha4.off);
    return u;
}

}  // namespace

SolveReport solve_branch_points_full(const Params& p, const BranchPoints& guess, const Tolerances& tol) {
    tol.validate();
    if (guess.genus != 2) throw DomainError("full solve needs a genus-2 guess");
    if (!(guess.alpha0.imag() > 0 && guess.alpha2.imag() > 0 && guess.alpha4.imag() > 0))
        throw DomainError("branch-point guess must lie in the open upper half plane");
    const double qt = inner_quad_tol(tol);
    auto F = [&](const Vec& u) {
        if (!(u[1] > 0 && u[1] < PI && u[3] > 0 && u[5] > 0 && u[5] < PI)) throw DomainError("left upper half plane");
        const SystemValues sv = evaluate_genus2_system(unpack_full(u, p.mu), p, qt);
        Vec r(6);
        for (int k = 0; k < 3; ++k) {
            r[2 * k] = sv.B[k].real();
            r[2 * k + 1] = sv.B[k].imag();
        }
        return r;
    };
    auto collision = [&](const Vec& u) -> std::string {
        const BranchPoints bp = unpack_full(u, p.mu);
        if (std::abs(bp.alpha2 - bp.alpha4) < 1e-4) return "collision of alpha2 and alpha4 (first-break degeneracy)";
        return {};
    };
    const NewtonResult nr = damped_newton(F, pack_full(guess), tol.newton_res, tol.newton_max_iter, collision);
    SolveReport rep;
    rep.converged = nr.converged;
    rep.iterations = nr.iterations;
    rep.final_residual = nr.res;
    rep.bp = unpack_full(nr.u, p.mu);
    rep.alpha2 = rep.bp.alpha2.value();
    rep.t0 = p.t;
    rep.x = p.x;
    rep.message = nr.message;
    if (rep.converged && std::abs(rep.bp.alpha2 - rep.bp.alpha4) < 1e-4) {
        rep.converged = false;
        rep.message = "collision of alpha2 and alpha4 (first-break degeneracy)";
    }
    return rep;
}

SolveReport solve_alpha2_LT(const Params& p, cplx guess, const Tolerances& tol) {
    tol.validate();
    if (!(guess.imag() > 0)) throw DomainError("alpha2 guess must lie above the real axis");
    const double qt = inner_quad_tol(tol);
    auto F = [&](const Vec& u) {
        if (!(u[1] > 0)) throw DomainError("left upper half plane");
        const auto m = reduced_moments(cplx(u[0], u[1]), p, qt);
        Vec r(2);
        r << m[0].imag(), m[1].imag();
        return r;
    };
    Vec u0(2);
    u0 << guess.real(), guess.imag();
    const NewtonResult nr = damped_newton(F, u0, tol.newton_res, tol.newton_max_iter);
    SolveReport rep;
    rep.converged = nr.converged;
    rep.iterations = nr.iterations;
    rep.final_residual = nr.res;
    rep.alpha2 = cplx(nr.u[0], nr.u[1]);
    rep.t0 = p.t;
    rep.x = p.x;
    rep.message = nr.message;
    return rep;
}

SolveReport solve_genus0(const Params& p, cplx guess, const Tolerances& tol, const std::vector<cplx>& left_of_cut) {
    tol.validate();
    if (!(guess.imag() > 0)) throw DomainError("alpha0 guess must lie above the real axis");
    const double qt = inner_quad_tol(tol);
    auto F = [&](const Vec& u) {
        if (!(u[1] > 0)) throw DomainError("left upper half plane");
        const auto m = genus0_moments(BranchPoints::genus0(p.mu, cplx(u[0], u[1])), p, qt, left_of_cut);
        Vec r(2);
        r << m[0].imag(), m[1].imag();
        return r;
    };
    Vec u0(2);
    u0 << guess.real(), guess.imag();
    const NewtonResult nr = damped_newton(F, u0, tol.newton_res, tol.newton_max_iter);
    SolveReport rep;
    rep.converged = nr.converged;
    rep.iterations = nr.iterations;
    rep.final_residual = nr.res;
    rep.bp = BranchPoints::genus0(p.mu, cplx(nr.u[0], nr.u[1]));
    rep.t0 = p.t;
    rep.x = p.x;
    rep.message = nr.message;
    return rep;
}

namespace {

// Genus-0 alpha0 at small t sits near the WKB point (mu/2) tanh x + i sech x;
// continue from there up to t.
cplx genus0_seed(double x, double t, double mu, const Tolerances& tol, const std::vector<cplx>& left) {
    cplx a(0.5 * mu * std::tanh(x), 1 / std::cosh(x));
    const int n = std::max(1, int(std::ceil(t / 0.01)));
    for (int k = 1; k <= n; ++k) {
        const SolveReport r = solve_genus0(make_params(x, t * k / n, mu), a, tol, k == n ? left : std::vector<cplx>{});
        if (!r.converged) throw ConvergenceError("genus-0 seed continuation failed at t=" + std::to_string(t * k / n));
        a = r.bp.alpha0.value();
    }
    return a;
}

struct BreakState {
    cplx alpha0;
    cplx z;
    cplx hp;
    double F = 0;
};

// Genus-0 solve at t, then complex Newton on h'(z) = 0; returns Im[h - h'^2/(2h'')].
void break_residual(double x, double t, double mu, const Tolerances& tol, BreakState& s) {
    const Params p = make_params(x, t, mu);
    const SolveReport r = solve_genus0(p, s.alpha0, tol, {s.z});
    if (!r.converged) throw ConvergenceError("genus-0 solve failed at t=" + std::to_string(t) + ": " + r.message);
    s.alpha0 = r.bp.alpha0.value();
    const GFunction G(r.bp, p, inner_quad_tol(tol), {s.z});
    cplx hp = G.h_prime(s.z), hpp = G.h_second(s.z);
    for (int it = 0; it < tol.newton_max_iter && std::abs(hp) > 0.1 * tol.newton_res; ++it) {
        if (std::abs(hpp) < 1e-8) throw ConvergenceError("h'' vanishes at z0: quadratic model invalid");
        cplx step = -hp / hpp;
        if (std::abs(step) > 0.1) step *= 0.1 / std::abs(step);
        s.z += step;
        if (!(s.z.imag() > 0)) throw ConvergenceError("critical point left the upper half plane");
        hp = G.h_prime(s.z);
        hpp = G.h_second(s.z);
        if (std::abs(step) < 1e-14 * std::abs(s.z)) break;
    }
    if (std::abs(hpp) < 1e-8) throw ConvergenceError("h'' vanishes at z0: quadratic model invalid");
    s.hp = hp;
    s.F = (G.h(s.z) - hp * hp / (2.0 * hpp)).imag();
}

}  // namespace

SolveReport solve_first_break(double x, double mu, cplx guess_z, double guess_t, const Tolerances& tol,
                              cplx guess_alpha0) {
    tol.validate();
    if (!(guess_t > 0)) throw DomainError("first-break time guess must be positive");
    if (!(guess_z.imag() > 0)) throw DomainError("critical point guess must lie above the real axis");
    BreakState s;
    s.z = guess_z;
    s.alpha0 = guess_alpha0 != cplx(0.0, 0.0) ? guess_alpha0 : genus0_seed(x, guess_t, mu, tol, {guess_z});
    // secant in t, with z0 and alpha0 carried between evaluations
    double t0 = guess_t;
    break_residual(x, t0, mu, tol, s);
    double F0 = s.F;
    double t1 = guess_t * (1 + 1e-3);
    BreakState s1 = s;
    break_residual(x, t1, mu, tol, s1);
    double F1 = s1.F;
    SolveReport rep;
    rep.x = x;
    int it = 0;
    for (; it < tol.newton_max_iter; ++it) {
        if (std::abs(F1) <= tol.newton_res && std::abs(s1.hp) <= tol.newton_res) break;
        if (F1 == F0) break;
        double t2 = t1 - F1 * (t1 - t0) / (F1 - F0);
        // keep the step modest; the genus-0 solve is warm-started
        const double cap = 0.2 * t1;
        if (std::abs(t2 - t1) > cap) t2 = t1 + (t2 > t1 ? cap : -cap);
        if (!(t2 > 0)) t2 = 0.5 * t1;
        t0 = t1, F0 = F1;
        t1 = t2;
        break_residual(x, t1, mu, tol, s1);
        F1 = s1.F;
    }
    rep.t0 = t1;
    rep.z0 = s1.z;
    rep.bp = BranchPoints::genus0(mu, s1.alpha0);
    rep.iterations = it;
    rep.final_residual = std::max(std::abs(F1), std::abs(s1.hp));
    rep.converged = rep.final_residual <= tol.newton_res;
    if (!rep.converged) rep.message = "alternating scheme stalled";
    return rep;
}

BranchPoints long_time_seed(const Params& p, double eps) {
    const double t_eff = std::max(p.t, 1.5);
    cplx a2 = alpha2_asymptotic(p.x, t_eff, p.mu);
    try {
        const SolveReport r = solve_alpha2_LT(p, a2);
        if (r.converged) a2 = r.alpha2;
    } catch (const std::exception&) {
    }
    return BranchPoints::genus2(p.mu, cplx(0.5 * p.mu, eps), a2, cplx(-0.5 * p.mu, eps));
}

namespace {

// Full solve at (x1, t1) warm-started from a solution at (x0, t0), halving the
// parameter step up to three times when a direct jump fails.
SolveReport continue_full(const BranchPoints& from, double x0, double t0, double x1, double t1, double mu,
                          const Tolerances& tol) {
    SolveReport r = solve_branch_points_full(make_params(x1, t1, mu), from, tol);
    if (r.converged) return r;
    for (int level = 1; level <= 3; ++level) {
        const int n = 1 << level;
        BranchPoints bp = from;
        bool ok = true;
        for (int k = 1; k <= n && ok; ++k) {
            const double s = double(k) / n;
            r = solve_branch_points_full(make_params(x0 + s * (x1 - x0), t0 + s * (t1 - t0), mu), bp, tol);
            ok = r.converged;
            if (ok) bp = r.bp;
        }
        if (ok) return r;
    }
    return r;
}

}  // namespace

double im_h_at_T_solved(double x, double t, double mu, SolveMode mode, Warm& warm, const Tolerances& tol,
                        double t_switch) {
    const Params p = make_params(x, t, mu);
    const bool full = mode == SolveMode::Full || (mode == SolveMode::Auto && t < t_switch);
    if (!full) {
        const cplx seed = warm.have_lt ? warm.alpha2 : alpha2_asymptotic(x, std::max(t, 1.5), mu);
        const SolveReport r = solve_alpha2_LT(p, seed, tol);
        if (!r.converged) throw ConvergenceError("reduced solve failed at t=" + std::to_string(t) + ": " + r.message);
        warm.have_lt = true;
        warm.alpha2 = r.alpha2;
        warm.t = t;
        warm.x = x;
        return eval_im_h_at_T_reduced(r.alpha2, p, inner_quad_tol(tol));
    }
    SolveReport r;
    if (warm.have_full) {
        r = continue_full(warm.bp, warm.x, warm.t, x, t, mu, tol);
    } else {
        r = solve_branch_points_full(p, long_time_seed(p), tol);
        if (!r.converged && t < t_switch) {
            // come down from the long-time regime, where the seed is reliable
            const double ts = std::max(t_switch, 5.0);
            SolveReport top = solve_branch_points_full(make_params(x, ts, mu), long_time_seed(make_params(x, ts, mu)), tol);
            if (top.converged) {
                BranchPoints bp = top.bp;
                double tc = ts;
                const int steps = std::max(4, int(std::ceil((ts - t) / 0.5)));
                for (int k = 1; k <= steps; ++k) {
                    const double tn = ts + (t - ts) * k / steps;
                    r = continue_full(bp, x, tc, x, tn, mu, tol);
                    if (!r.converged) break;
                    bp = r.bp;
                    tc = tn;
                }
            }
        }
    }
    if (!r.converged) throw ConvergenceError("full solve failed at t=" + std::to_string(t) + ": " + r.message);
    warm.have_full = true;
    warm.bp = r.bp;
    warm.t = t;
    warm.x = x;
    return GFunction(r.bp, p, inner_quad_tol(tol)).im_h_at_T();
}

SolveReport solve_obstruction_time(double x, double mu, std::pair<double, double> t_bracket, SolveMode mode,
                                   const Tolerances& tol, int scan_points) {
    auto [lo, hi] = t_bracket;
    if (!(lo > 0 && hi > lo)) throw DomainError("obstruction bracket must satisfy 0 < lo < hi");
    if (scan_points < 2) throw DomainError("need at least two scan points");
    SolveReport rep;
    rep.x = x;
    // descend from the top so warm starts come from the long-time side; the first
    // sign change met is the larger root
    Warm warm;
    const double q = std::pow(lo / hi, 1.0 / (scan_points - 1));
    double t_prev = hi, F_prev = im_h_at_T_solved(x, hi, mu, mode, warm, tol);
    Warm warm_prev = warm;
    int evals = 1;
    double a = 0, b = 0, Fa = 0, Fb = 0;
    Warm warm_a;
    bool found = false;
    std::string stop;
    for (int k = 1; k < scan_points && !found; ++k) {
        const double target = k == scan_points - 1 ? lo : hi * std::pow(q, k);
        // a failed solve shortens the step towards the last good point
        double tk = target;
        int cuts = 0;
        while (true) {
            Warm trial = warm_prev;
            try {
                const double Fk = im_h_at_T_solved(x, tk, mu, mode, trial, tol);
                ++evals;
                warm = trial;
                if ((Fk < 0) != (F_prev < 0)) {
                    a = tk, Fa = Fk, b = t_prev, Fb = F_prev;
                    warm_a = warm;
                    found = true;
                    break;
                }
                t_prev = tk, F_prev = Fk;
                warm_prev = warm;
                if (tk == target) break;
                tk = target;
                cuts = 0;
            } catch (const ConvergenceError& e) {
                ++evals;
                if (++cuts > 4) {
                    stop = e.what();
                    break;
                }
                tk = std::sqrt(tk * t_prev);
            }
        }
        if (!stop.empty()) break;
    }
    if (!found) {
        rep.iterations = evals;
        rep.message = stop.empty() ? "no sign change of Im h(T) in the bracket: no obstruction at this x"
                                   : "scan stopped above t=" + std::to_string(t_prev) + ": " + stop;
        return rep;
    }
    // Illinois regula falsi, warm-started from the lower end
    Warm w = warm_a;
    int side = 0;
    double t = a, F = Fa;
    for (int it = 0; it < 100; ++it) {
        t = (a * Fb - b * Fa) / (Fb - Fa);
        if (!(t > a && t < b)) t = 0.5 * (a + b);
        F = im_h_at_T_solved(x, t, mu, mode, w, tol);
        ++evals;
        if (std::abs(F) <= 1e-2 * tol.newton_res || b - a <= 1e-13 * b) break;
        if ((F < 0) == (Fa < 0)) {
            a = t, Fa = F;
            if (side == -1) Fb *= 0.5;
            side = -1;
        } else {
            b = t, Fb = F;
            if (side == 1) Fa *= 0.5;
            side = 1;
        }
    }
    rep.t0 = t;
    rep.final_residual = std::abs(F);
    rep.iterations = evals;
    rep.converged = rep.final_residual <= tol.newton_res;
    if (w.have_full) rep.bp = w.bp;
    if (w.have_lt) rep.alpha2 = w.alpha2;
    if (!rep.converged) rep.message = "root polish stalled";
    return rep;
}

SolveReport solve_obstruction_x(double t, double mu, double x_seed, SolveMode mode, const Tolerances& tol,
                                Warm* warm) {
    Warm local;
    Warm& w = warm ? *warm : local;
    SolveReport rep;
    rep.t0 = t;
    double x0 = x_seed, F0 = im_h_at_T_solved(x0, t, mu, mode, w, tol);
    double x1 = x_seed + 1e-3, F1 = im_h_at_T_solved(x1, t, mu, mode, w, tol);
    int it = 0;
    for (; it < tol.newton_max_iter; ++it) {
        if (std::abs(F1) <= tol.newton_res) break;
        if (F1 == F0) break;
        const double x2 = x1 - F1 * (x1 - x0) / (F1 - F0);
        x0 = x1, F0 = F1;
        x1 = x2;
        F1 = im_h_at_T_solved(x1, t, mu, mode, w, tol);
        if (std::abs(x1 - x0) <= 1e-15 * std::max(1.0, std::abs(x1))) break;
    }
    rep.x = x1;
    rep.iterations = it + 2;
    rep.final_residual = std::abs(F1);
    rep.converged = rep.final_residual <= tol.newton_res;
    if (w.have_full) rep.bp = w.bp;
    if (w.have_lt) rep.alpha2 = w.alpha2;
    if (!rep.converged) rep.message = "secant in x did not reach the residual tolerance";
    return rep;
}

std::vector<SolveReport> sweep_continuation(CurveKind kind, std::pair<double, double> range, int n, const Params& p0,
                                            const BranchPoints& start, const Tolerances& tol) {
    if (n < 1) throw DomainError("sweep needs at least one point");
    auto params_at = [&](double v) {
        switch (kind) {
            case CurveKind::BranchPointsInT:
            case CurveKind::Alpha2LTInT: return make_params(p0.x, v, p0.mu);
            case CurveKind::BranchPointsInX: return make_params(v, p0.t, p0.mu);
            case CurveKind::BranchPointsInMu: return make_params(p0.x, p0.t, v);
        }
        return p0;
    };
    auto solve_at = [&](double v, const BranchPoints& seed) {
        const Params p = params_at(v);
        // mu moves the anchors of alpha0 and alpha4; keep their offsets
        BranchPoints s = seed;
        if (kind == CurveKind::BranchPointsInMu)
            s = BranchPoints::genus2_offsets(p.mu, seed.alpha0.off, seed.alpha2.value(), seed.alpha4.off);
        SolveReport r;
        if (kind == CurveKind::Alpha2LTInT) {
            r = solve_alpha2_LT(p, seed.alpha2.value(), tol);
            r.bp = seed;
            r.bp.alpha2 = XPt(r.alpha2);
        } else {
            r = solve_branch_points_full(p, s, tol);
        }
        r.param = v;
        return r;
    };
    std::vector<SolveReport> out;
    BranchPoints cur = start;
    double v_prev = range.first;
    for (int i = 0; i < n; ++i) {
        const double v = n == 1 ? range.first : range.first + (range.second - range.first) * i / (n - 1);
        SolveReport r = solve_at(v, cur);
        for (int level = 1; level <= 3 && !r.converged && i > 0 && r.message.find("collision") == std::string::npos;
             ++level) {
            const int m = 1 << level;
            BranchPoints bp = cur;
            for (int k = 1; k <= m; ++k) {
                r = solve_at(v_prev + (v - v_prev) * k / m, bp);
                if (!r.converged) break;
                bp = r.bp;
            }
        }
        out.push_back(r);
        if (!r.converged) {
            out.back().message += "; continuation stalled, last good parameter " + std::to_string(v_prev);
            break;
        }
        cur = r.bp;
        v_prev = v;
    }
    return out;
}

}  // namespace nlsg
