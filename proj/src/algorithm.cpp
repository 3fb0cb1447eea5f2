#include "wptmec/algorithm.hpp"

#include <cmath>
#include <limits>

#include "wptmec/load.hpp"
#include "wptmec/model.hpp"
#include "wptmec/subproblems.hpp"

namespace wptmec {

namespace {

// All-tasks-done check helpers operate on the fixed-a inner problem.
bool caps_ok(double f_s_sum, double P_b_sum, const SystemConfig& cfg) {
    return f_s_sum <= cfg.f_s_max * (1.0 + 1e-12) &&
           P_b_sum <= cfg.P_b_max * (1.0 + 1e-12);
}

// Candidate point at a common time-split parameter t in (0, 1): every
// offloading user spends t of the window offloading, the rest computing.
bool probe_at(double t, const std::vector<double>& a, const SystemConfig& cfg,
              const std::vector<UserParams>& users, double base_P_b) {
    const double window = cfg.latency_window();
    double f_s_sum = 0.0, P_b_sum = base_P_b;
    for (std::size_t i = 0; i < users.size(); ++i) {
        const double bits = (1.0 - a[i]) * users[i].R;
        if (bits == 0.0) continue;
        const double t_off = t * window;
        f_s_sum += bits * users[i].B / (window - t_off);
        const double p = causality_tight_power(a[i], t_off, cfg, users[i]);
        if (!std::isfinite(p)) return false;
        P_b_sum += p;
    }
    return caps_ok(f_s_sum, P_b_sum, cfg);
}

}  // namespace

std::string scheme_name(Scheme s) {
    switch (s) {
        case Scheme::proposed: return "proposed";
        case Scheme::local: return "local";
        case Scheme::full: return "full";
        case Scheme::half: return "half";
        case Scheme::oracle: return "oracle";
    }
    return "?";
}

bool inner_feasible(const std::vector<double>& a, const SystemConfig& cfg,
                    const std::vector<UserParams>& users) {
    const double window = cfg.latency_window();
    double base_P_b = 0.0;
    bool any_offload = false;
    for (std::size_t i = 0; i < users.size(); ++i) {
        const auto& u = users[i];
        if (a[i] * u.R * u.B > u.f_u_max * window * (1.0 + 1e-12)) return false;
        if ((1.0 - a[i]) * u.R > 0.0) {
            any_offload = true;
        } else {
            base_P_b += causality_tight_power(a[i], 0.0, cfg, u);
        }
    }
    if (!any_offload) return base_P_b <= cfg.P_b_max * (1.0 + 1e-12);
    // Sum P_b falls and sum f_s rises with t; scan a log-spaced set of
    // time splits and accept if any works.
    for (int k = 1; k <= 60; ++k) {
        const double t = 1.0 - std::pow(0.75, k);
        if (probe_at(t, a, cfg, users, base_P_b)) return true;
    }
    return false;
}

namespace {

Solution solve_inner(const std::vector<double>& a, const SystemConfig& cfg,
                     const std::vector<UserParams>& users, const DualOptions& dopts,
                     Scheme scheme) {
    Solution sol;
    sol.scheme = scheme;
    DualResult dr = solve_dual(a, cfg, users, dopts);
    sol.dual = dr.omega;
    sol.allocation = recover_primal(dr.omega, a, cfg, users);
    sol.report = total_ap_energy(sol.allocation, cfg, users);
    sol.converged = dr.trace.converged;
    sol.iterations = 1;
    sol.objective_history.push_back(sol.report.E_total);
    return sol;
}

}  // namespace

Solution run_joint(const SystemConfig& cfg, const std::vector<UserParams>& users,
                   const JointOptions& opts) {
    cfg.validate();
    for (const auto& u : users) u.validate();

    std::vector<double> a(users.size());
    bool all_empty = true;
    for (std::size_t i = 0; i < users.size(); ++i) {
        const LoadBounds b = load_bounds(cfg, users[i]);
        a[i] = std::fmin(0.5, b.a_max);
        if (users[i].R > 0.0) all_empty = false;
    }
    if (all_empty) {
        std::vector<double> ones(users.size(), 1.0);
        Solution sol = solve_inner(ones, cfg, users, opts.dual, Scheme::proposed);
        sol.converged = true;
        return sol;
    }
    if (!inner_feasible(a, cfg, users)) {
        // Interior start infeasible; full offloading is the fallback start.
        std::vector<double> zeros(users.size(), 0.0);
        if (!inner_feasible(zeros, cfg, users)) {
            throw Infeasible("no feasible load split found");
        }
        a = zeros;
    }

    LoadOptions lopts;
    lopts.couple_fs_in_a_step = opts.couple_fs_in_a_step;

    Solution sol;
    Solution best;
    double best_obj = std::numeric_limits<double>::infinity();
    double prev_obj = std::numeric_limits<double>::infinity();
    std::vector<double> history;
    for (std::size_t j = 0; j < opts.outer_cap; ++j) {
        sol = solve_inner(a, cfg, users, opts.dual, Scheme::proposed);
        const double obj = sol.report.E_total;
        // the dual subsolve is inexact, so keep the incumbent best iterate
        if (obj < best_obj) {
            best_obj = obj;
            best = sol;
        }
        history.push_back(best_obj);

        const std::vector<double> a_next =
            optimize_a(sol.allocation, sol.dual, cfg, users, lopts);
        double da = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) {
            da = std::fmax(da, std::fabs(a_next[i] - a[i]));
        }
        const double dobj = std::fabs(obj - prev_obj) /
                            std::fmax(std::fabs(obj), 1e-300);
        a = a_next;
        prev_obj = obj;
        if (da <= opts.a_tol && dobj <= opts.obj_tol) {
            best.iterations = j + 1;
            best.converged = true;
            best.objective_history = std::move(history);
            return best;
        }
    }
    best.iterations = opts.outer_cap;
    best.converged = false;
    best.objective_history = std::move(history);
    return best;
}

Solution run_baseline(const SystemConfig& cfg, const std::vector<UserParams>& users,
                      Scheme scheme, const JointOptions& opts) {
    cfg.validate();
    for (const auto& u : users) u.validate();

    double ratio = 0.0;
    switch (scheme) {
        case Scheme::local: ratio = 1.0; break;
        case Scheme::full: ratio = 0.0; break;
        case Scheme::half: ratio = 0.5; break;
        default: throw ValidationError("run_baseline: not a fixed-ratio scheme");
    }
    std::vector<double> a(users.size(), ratio);
    for (std::size_t i = 0; i < users.size(); ++i) {
        const LoadBounds b = load_bounds(cfg, users[i]);
        if (ratio > b.a_max * (1.0 + 1e-12)) {
            throw Infeasible("fixed local ratio exceeds the user CPU bound");
        }
    }
    if (!inner_feasible(a, cfg, users)) {
        throw Infeasible("fixed-ratio scheme admits no feasible inner solution");
    }
    return solve_inner(a, cfg, users, opts.dual, scheme);
}

}  // namespace wptmec
