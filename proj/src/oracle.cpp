#include "wptmec/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "wptmec/dual.hpp"
#include "wptmec/model.hpp"
#include "wptmec/subproblems.hpp"

namespace wptmec {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Point {
    double a = 1.0;
    double t = 0.0;  // offload time; 0 only together with a = 1
};

struct Window {
    double a_lo, a_hi;
    double t_lo, t_hi;  // log-spaced grid range for T_off
};

// Per-user candidate points for one refinement window.
std::vector<Point> make_points(const Window& win, const GridSpec& spec,
                               double a_cap) {
    std::vector<Point> pts;
    const std::size_t na = std::max<std::size_t>(spec.a_points, 2);
    const std::size_t nt = std::max<std::size_t>(spec.t_points, 2);
    pts.reserve(na * nt + 1);
    for (std::size_t ia = 0; ia < na; ++ia) {
        const double a =
            win.a_lo + (win.a_hi - win.a_lo) * static_cast<double>(ia) /
                           static_cast<double>(na - 1);
        if (a >= 1.0) continue;  // the all-local corner is added separately
        const double lr = std::log(win.t_lo);
        const double ur = std::log(win.t_hi);
        for (std::size_t it = 0; it < nt; ++it) {
            const double t = std::exp(
                lr + (ur - lr) * static_cast<double>(it) /
                         static_cast<double>(nt - 1));
            pts.push_back({a, t});
        }
    }
    if (a_cap >= 1.0 && win.a_hi >= 1.0) pts.push_back({1.0, 0.0});
    return pts;
}

struct Evaluator {
    const SystemConfig& cfg;
    const std::vector<UserParams>& users;
    double window;

    // AP objective for joint points, +inf when infeasible.
    double operator()(const std::vector<Point>& p) const {
        double e_wpt = 0.0, e_comp = 0.0, p_comp = 0.0;
        double f_s_sum = 0.0, P_b_sum = 0.0;
        for (std::size_t i = 0; i < users.size(); ++i) {
            const auto& u = users[i];
            const double bits = (1.0 - p[i].a) * u.R;
            double f_s = 0.0;
            if (bits > 0.0) {
                if (p[i].t <= 0.0 || p[i].t >= window) return kInf;
                f_s = bits * u.B / (window - p[i].t);
            }
            const double P_b = causality_tight_power(p[i].a, p[i].t, cfg, u);
            if (!std::isfinite(P_b)) return kInf;
            f_s_sum += f_s;
            P_b_sum += P_b;
            e_wpt += cfg.phi * cfg.T * P_b;
            e_comp += bits * u.B * cfg.delta * f_s * f_s;
            p_comp += cfg.delta * f_s * f_s * f_s;
        }
        if (f_s_sum > cfg.f_s_max * (1.0 + 1e-12)) return kInf;
        if (P_b_sum > cfg.P_b_max * (1.0 + 1e-12)) return kInf;
        return e_wpt + e_comp + cooling_power(p_comp, cfg) * window;
    }
};

Window initial_window(const SystemConfig& cfg, double a_cap) {
    const double window = cfg.latency_window();
    return {0.0, std::fmin(1.0, a_cap), window * 1e-4, window * (1.0 - 1e-6)};
}

Window refine_window(const Window& win, const Point& best, const GridSpec& spec,
                     double a_cap, const SystemConfig& cfg) {
    const double da = (win.a_hi - win.a_lo) /
                      static_cast<double>(std::max<std::size_t>(spec.a_points, 2) - 1);
    Window out;
    out.a_lo = std::fmax(0.0, best.a - 2.0 * da);
    out.a_hi = std::fmin(std::fmin(1.0, a_cap), best.a + 2.0 * da);
    if (best.t > 0.0) {
        const double ratio = std::pow(win.t_hi / win.t_lo,
                                      2.0 / static_cast<double>(
                                                std::max<std::size_t>(spec.t_points, 2) -
                                                1));
        out.t_lo = std::fmax(best.t / ratio, win.t_lo);
        out.t_hi = std::fmin(best.t * ratio, win.t_hi);
    } else {
        out.t_lo = win.t_lo;
        out.t_hi = win.t_hi;
    }
    return out;
}

}  // namespace

Solution grid_search(const SystemConfig& cfg, const std::vector<UserParams>& users,
                     const GridSpec& spec) {
    cfg.validate();
    for (const auto& u : users) u.validate();
    const std::size_t n = users.size();
    if (n > 3) throw ValidationError("grid_search supports at most 3 users");

    const double window = cfg.latency_window();
    const Evaluator eval{cfg, users, window};

    std::vector<double> a_cap(n);
    std::vector<Window> wins(n);
    for (std::size_t i = 0; i < n; ++i) {
        a_cap[i] = users[i].R > 0.0
                       ? std::fmin(1.0, users[i].f_u_max * window /
                                            (users[i].R * users[i].B))
                       : 1.0;
        wins[i] = initial_window(cfg, a_cap[i]);
    }

    double best_obj = kInf;
    std::vector<Point> best(n);

    for (std::size_t level = 0; level <= spec.refinement_levels; ++level) {
        std::vector<std::vector<Point>> pts(n);
        double evals = 1.0;
        for (std::size_t i = 0; i < n; ++i) {
            pts[i] = make_points(wins[i], spec, a_cap[i]);
            evals *= static_cast<double>(pts[i].size());
        }
        if (n <= 2) {
            if (evals > static_cast<double>(spec.max_evals)) {
                throw ValidationError("grid_search evaluation cap exceeded");
            }
            std::vector<Point> p(n);
            if (n == 1) {
                for (const auto& c0 : pts[0]) {
                    p[0] = c0;
                    const double v = eval(p);
                    if (v < best_obj) {
                        best_obj = v;
                        best = p;
                    }
                }
            } else {
                for (const auto& c0 : pts[0]) {
                    for (const auto& c1 : pts[1]) {
                        p[0] = c0;
                        p[1] = c1;
                        const double v = eval(p);
                        if (v < best_obj) {
                            best_obj = v;
                            best = p;
                        }
                    }
                }
            }
        } else {
            // Coordinate refinement: sweep one user's grid with the others
            // fixed, starting from the all-local corner.
            std::vector<Point> cur(n);
            if (std::isfinite(best_obj)) {
                cur = best;
            } else {
                for (std::size_t i = 0; i < n; ++i) {
                    cur[i] = {std::fmin(1.0, a_cap[i]),
                              a_cap[i] >= 1.0 ? 0.0 : window * 0.5};
                }
            }
            double cur_obj = eval(cur);
            for (std::size_t sweep = 0; sweep < 20; ++sweep) {
                bool improved = false;
                for (std::size_t i = 0; i < n; ++i) {
                    std::vector<Point> p = cur;
                    for (const auto& c : pts[i]) {
                        p[i] = c;
                        const double v = eval(p);
                        if (v < cur_obj) {
                            cur_obj = v;
                            cur[i] = c;
                            improved = true;
                        }
                    }
                }
                if (!improved) break;
            }
            if (cur_obj < best_obj) {
                best_obj = cur_obj;
                best = cur;
            }
        }
        if (!std::isfinite(best_obj)) break;
        for (std::size_t i = 0; i < n; ++i) {
            wins[i] = refine_window(wins[i], best[i], spec, a_cap[i], cfg);
        }
    }

    if (!std::isfinite(best_obj)) {
        throw Infeasible("grid_search found no feasible point");
    }

    Solution sol;
    sol.scheme = Scheme::oracle;
    sol.allocation.users.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        auto& x = sol.allocation[i];
        const auto& u = users[i];
        x.a = best[i].a;
        x.T_off = best[i].t;
        x.f_u = best[i].a * u.R * u.B / window;
        const double bits = (1.0 - best[i].a) * u.R;
        x.f_s = bits > 0.0 ? bits * u.B / (window - best[i].t) : 0.0;
        x.P_b = causality_tight_power(best[i].a, best[i].t, cfg, u);
    }
    sol.report = total_ap_energy(sol.allocation, cfg, users);
    sol.dual = DualVars(n);
    sol.iterations = spec.refinement_levels + 1;
    sol.converged = true;
    return sol;
}

KktReport kkt_residuals(const Solution& sol, const SystemConfig& cfg,
                        const std::vector<UserParams>& users) {
    const std::size_t n = users.size();
    KktReport rep;
    rep.slack_lambda.resize(n, 0.0);
    rep.slack_mu.resize(n, 0.0);
    rep.stationarity.resize(n, 0.0);

    std::vector<double> a(n);
    for (std::size_t i = 0; i < n; ++i) a[i] = sol.allocation[i].a;
    const auto g = subgradients(sol.allocation, a, cfg, users);
    const double e_ref = std::fmax(std::fabs(sol.report.E_total), 1e-9);
    for (std::size_t i = 0; i < n; ++i) {
        rep.slack_lambda[i] = std::fabs(sol.dual.lambda[i] * g[i]) / e_ref;
        rep.slack_mu[i] = std::fabs(sol.dual.mu[i] * g[n + i]) / e_ref;
    }
    rep.slack_nu = std::fabs(sol.dual.nu * g[2 * n]) / e_ref;
    rep.slack_pi = std::fabs(sol.dual.pi * g[2 * n + 1]) / e_ref;

    const double w = cfg.per_user_bandwidth();
    for (std::size_t i = 0; i < n; ++i) {
        const auto& x = sol.allocation[i];
        const double mu = sol.dual.mu[i];
        const double bits = (1.0 - x.a) * users[i].R;
        if (x.T_off > 0.0 && bits > 0.0 && mu > 0.0) {
            const double xr = bits / (x.T_off * w);
            const double d = sol.dual.lambda[i] * cfg.sigma2 / users[i].g *
                                 (std::expm1(xr) - xr * std::exp(xr)) +
                             mu;
            rep.stationarity[i] = std::fabs(d) / mu;
        }
    }

    rep.primal = check_feasibility(sol.allocation, cfg, users, 1e-9);
    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        m = std::fmax(m, rep.slack_lambda[i]);
        m = std::fmax(m, rep.slack_mu[i]);
        m = std::fmax(m, rep.stationarity[i]);
    }
    m = std::fmax(m, rep.slack_nu);
    m = std::fmax(m, rep.slack_pi);
    for (const auto& v : rep.primal) m = std::fmax(m, v.residual);
    rep.max_residual = m;
    return rep;
}

}  // namespace wptmec
