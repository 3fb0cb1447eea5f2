#include "wptmec/dual.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "wptmec/lambertw.hpp"
#include "wptmec/model.hpp"
#include "wptmec/subproblems.hpp"

namespace wptmec {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double offload_bits(double a, const UserParams& u) { return (1.0 - a) * u.R; }

// Multiplier mu that makes the Lambert-W offload time equal t_target,
// obtained by running the rate stationarity condition forward.
double mu_for_offload_time(double lambda, double a, double t_target,
                           const SystemConfig& cfg, const UserParams& u) {
    const double r_over_w =
        offload_bits(a, u) / (t_target * cfg.per_user_bandwidth());
    const double wv = r_over_w - 1.0;
    const double x = wv * std::exp(wv);
    const double mu =
        (x + std::exp(-1.0)) * cfg.sigma2 * std::exp(1.0) * lambda / u.g;
    return std::fmax(mu, 1e-300);
}

struct Scales {
    std::vector<double> lambda;  // energy normalization per user
    double mu = 0.0;             // latency window
    double nu = 0.0;
    double pi = 0.0;
};

Scales make_scales(const SystemConfig& cfg, const std::vector<UserParams>& users) {
    Scales s;
    s.lambda.reserve(users.size());
    for (const auto& u : users) {
        s.lambda.push_back(cfg.phi * cfg.T * u.theta * u.H * cfg.P_b_max);
    }
    s.mu = cfg.latency_window();
    s.nu = cfg.f_s_max;
    s.pi = cfg.P_b_max;
    return s;
}

}  // namespace

std::pair<double, Allocation> dual_value(const DualVars& omega,
                                         const std::vector<double>& a,
                                         const SystemConfig& cfg,
                                         const std::vector<UserParams>& users) {
    const std::size_t n = users.size();
    const double window = cfg.latency_window();
    const double w = cfg.per_user_bandwidth();

    Allocation cand;
    cand.users.resize(n);
    double value = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const auto& u = users[i];
        auto& x = cand[i];
        x.a = a[i];
        x.f_u = a[i] * u.R * u.B / window;

        const double bits = offload_bits(a[i], u);
        const double lam = omega.lambda[i];
        double t = optimal_offload_time(lam, omega.mu[i], a[i], cfg, u);
        if (bits > 0.0 && lam > 0.0) {
            if (std::isinf(t)) {
                // Infimum as T -> infinity of the perspective term.
                value += lam * cfg.sigma2 * bits / (u.g * w);
                t = window;
            } else {
                value += lam * cfg.sigma2 / u.g * std::expm1(bits / (t * w)) * t +
                         omega.mu[i] * t;
            }
        } else {
            t = 0.0;
        }
        x.T_off = t;

        x.P_b = optimal_wpt_power(lam, omega.pi, a[i], t, cfg, u);
        value += wpt_power_coefficient(lam, omega.pi, cfg, u) * x.P_b;

        const double e_loc =
            a[i] * a[i] * a[i] * u.R * u.R * u.R * u.k * u.B * u.B * u.B /
            (window * window);
        value += lam * e_loc;
    }

    const auto f = solve_edge_frequencies(omega, a, cfg, users);
    value += edge_frequency_objective(f, omega, a, cfg, users);
    for (std::size_t i = 0; i < n; ++i) {
        cand[i].f_s = f[i];
        value -= omega.mu[i] * window;
    }
    value -= omega.nu * cfg.f_s_max + omega.pi * cfg.P_b_max;
    return {value, cand};
}

std::vector<double> subgradients(const Allocation& cand, const std::vector<double>& a,
                                 const SystemConfig& cfg,
                                 const std::vector<UserParams>& users) {
    const std::size_t n = users.size();
    const double window = cfg.latency_window();
    std::vector<double> g(2 * n + 2, 0.0);
    double f_s_sum = 0.0, P_b_sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const auto& u = users[i];
        const auto& x = cand[i];
        const double bits = offload_bits(a[i], u);
        const double e_loc =
            a[i] * a[i] * a[i] * u.R * u.R * u.R * u.k * u.B * u.B * u.B /
            (window * window);
        double e_off = 0.0;
        if (bits > 0.0) {
            e_off = x.T_off > 0.0
                        ? offload_tx_power(a[i], x.T_off, cfg, u) * x.T_off
                        : kInf;
        }
        g[i] = e_loc + e_off - harvested_energy(x.P_b, cfg, u);

        double t_exe = 0.0;
        const double cycles = bits * u.B;
        if (cycles > 0.0) t_exe = x.f_s > 0.0 ? cycles / x.f_s : kInf;
        g[n + i] = x.T_off + t_exe - window;

        f_s_sum += x.f_s;
        P_b_sum += x.P_b;
    }
    g[2 * n] = f_s_sum - cfg.f_s_max;
    g[2 * n + 1] = P_b_sum - cfg.P_b_max;
    return g;
}

Allocation recover_primal(const DualVars& omega, const std::vector<double>& a,
                          const SystemConfig& cfg,
                          const std::vector<UserParams>& users) {
    const std::size_t n = users.size();
    const double window = cfg.latency_window();
    Allocation out;
    out.users.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& u = users[i];
        auto& x = out[i];
        x.a = a[i];
        x.f_u = local_cpu_frequency(a[i], cfg, u);
        const double bits = offload_bits(a[i], u);
        if (bits == 0.0) {
            x.T_off = 0.0;
            x.f_s = 0.0;
            x.P_b = causality_tight_power(a[i], 0.0, cfg, u);
            continue;
        }
        const double t = optimal_offload_time(omega.lambda[i], omega.mu[i], a[i],
                                              cfg, u);
        if (!(t > 0.0) || t >= window) {
            throw LatencyExhausted("offload time leaves no edge execution time");
        }
        x.T_off = t;
        x.f_s = bits * u.B / (window - t);
        x.P_b = causality_tight_power(a[i], t, cfg, u);
    }
    return out;
}

DualResult solve_dual(const std::vector<double>& a, const SystemConfig& cfg,
                      const std::vector<UserParams>& users,
                      const DualOptions& opts) {
    const std::size_t n = users.size();
    if (a.size() != n || n != cfg.I) {
        throw ValidationError("solve_dual: dimension mismatch");
    }
    const double window = cfg.latency_window();
    for (std::size_t i = 0; i < n; ++i) {
        if (a[i] * users[i].R * users[i].B > users[i].f_u_max * window * (1 + 1e-12)) {
            throw Infeasible("local share exceeds the user CPU limit");
        }
    }

    const Scales sc = make_scales(cfg, users);
    DualVars omega(n);
    std::vector<double> mu_ref(n, 1.0);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& u = users[i];
        omega.lambda[i] = 1.0 / (u.theta * u.H);
        if (a[i] < 1.0 && u.R > 0.0) {
            omega.lambda[i] = std::fmax(omega.lambda[i], opts.lambda_floor);
            omega.mu[i] =
                mu_for_offload_time(omega.lambda[i], a[i], 0.5 * window, cfg, u);
            mu_ref[i] = omega.mu[i];
        }
    }
    const double nu_ref = cfg.phi * cfg.T * cfg.P_b_max / cfg.f_s_max;
    const double pi_ref = cfg.phi * cfg.T;

    DualResult res;
    res.trace.iterates.reserve(std::min<std::size_t>(opts.max_iter, 1 << 16));
    double best_D = -kInf;
    double best_P = kInf;
    DualVars best_omega = omega;
    bool have_primal = false;

    for (std::size_t it = 0; it < opts.max_iter; ++it) {
        auto [D, cand] = dual_value(omega, a, cfg, users);
        if (std::isfinite(D)) best_D = std::fmax(best_D, D);

        double residual = kInf;
        try {
            const Allocation prim = recover_primal(omega, a, cfg, users);
            double f_s_sum = 0.0, P_b_sum = 0.0, obj = 0.0;
            bool finite = true;
            {
                const EnergyReport rep = total_ap_energy(prim, cfg, users);
                obj = rep.E_total;
                finite = std::isfinite(obj);
                for (const auto& x : prim.users) {
                    f_s_sum += x.f_s;
                    P_b_sum += x.P_b;
                }
            }
            residual = std::fmax(f_s_sum / cfg.f_s_max - 1.0,
                                 P_b_sum / cfg.P_b_max - 1.0);
            residual = std::fmax(residual, 0.0);
            if (finite && residual <= opts.res_tol && obj < best_P) {
                best_P = obj;
                best_omega = omega;
                have_primal = true;
            }
        } catch (const LatencyExhausted&) {
        } catch (const DegenerateOffload&) {
        }

        const auto g = subgradients(cand, a, cfg, users);
        double gnorm = 0.0;
        auto hat = [&](double gv, double s) {
            double v = gv / s;
            v = std::clamp(v, -opts.g_max, opts.g_max);
            gnorm += v * v;
            return v;
        };
        std::vector<double> gl(n), gm(n);
        for (std::size_t i = 0; i < n; ++i) {
            gl[i] = hat(g[i], sc.lambda[i]);
            gm[i] = hat(g[n + i], sc.mu);
        }
        const double gn = hat(g[2 * n], sc.nu);
        const double gp = hat(g[2 * n + 1], sc.pi);
        gnorm = std::sqrt(gnorm);

        const double gap =
            have_primal ? (best_P - best_D) / std::fmax(std::fabs(best_P), 1e-12)
                        : kInf;
        res.trace.iterates.push_back({it, omega, D, gnorm});
        if (opts.trace_out) {
            (*opts.trace_out) << it << ' ' << D << ' ' << gap << ' ' << residual
                              << '\n';
        }
        res.trace.iterations = it + 1;
        if (have_primal && gap <= opts.gap_tol) {
            res.trace.converged = true;
            res.trace.final_gap = gap;
            res.omega = best_omega;
            return res;
        }

        const double eta = opts.eta0 / std::sqrt(static_cast<double>(it + 1));
        for (std::size_t i = 0; i < n; ++i) {
            double lam = omega.lambda[i] + eta * gl[i] / sc.lambda[i];
            const double floor =
                (a[i] < 1.0 && users[i].R > 0.0) ? opts.lambda_floor : 0.0;
            omega.lambda[i] = std::fmax(lam, floor);
            omega.mu[i] = std::fmax(omega.mu[i] + eta * gm[i] * mu_ref[i], 0.0);
        }
        omega.nu = std::fmax(omega.nu + eta * gn * nu_ref, 0.0);
        omega.pi = std::fmax(omega.pi + eta * gp * pi_ref, 0.0);
    }

    if (!have_primal) {
        throw NonConvergence("dual ascent recovered no feasible primal");
    }
    res.trace.converged = false;
    res.trace.final_gap = (best_P - best_D) / std::fmax(std::fabs(best_P), 1e-12);
    res.omega = best_omega;
    return res;
}

}  // namespace wptmec
