#include "wptmec/load.hpp"

#include <cmath>
#include <limits>

#include "wptmec/model.hpp"

namespace wptmec {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double coupled_fs(double a, const UserAllocation& fixed, const SystemConfig& cfg,
                  const UserParams& u) {
    const double slack = cfg.latency_window() - fixed.T_off;
    return (1.0 - a) * u.R * u.B / slack;
}

double user_terms(double a, const UserAllocation& fixed, double lambda, double mu,
                  const SystemConfig& cfg, const UserParams& u, bool couple,
                  double& p_comp) {
    const double window = cfg.latency_window();
    const double bits = (1.0 - a) * u.R;
    const double f_s = couple && bits >= 0.0 ? coupled_fs(a, fixed, cfg, u)
                                             : fixed.f_s;
    double v = bits * u.B * cfg.delta * f_s * f_s;
    p_comp += cfg.delta * f_s * f_s * f_s;

    const double e_loc = a * a * a * u.R * u.R * u.R * u.k * u.B * u.B * u.B /
                         (window * window);
    double e_off = 0.0;
    if (bits > 0.0) {
        if (fixed.T_off <= 0.0) {
            throw DegenerateOffload("a < 1 with zero fixed offload time");
        }
        e_off = cfg.sigma2 / u.g * fixed.T_off *
                std::expm1(bits / (fixed.T_off * cfg.per_user_bandwidth()));
    }
    v += lambda * (e_loc + e_off - fixed.P_b * cfg.phi * cfg.T * u.theta * u.H);

    double t_exe = 0.0;
    if (bits > 0.0) {
        const double cycles = bits * u.B;
        t_exe = f_s > 0.0 ? cycles / f_s : kInf;
    }
    v += mu * (fixed.T_off + t_exe - window);
    return v;
}

}  // namespace

LoadBounds load_bounds(const SystemConfig& cfg, const UserParams& u) {
    LoadBounds b;
    if (u.R > 0.0) {
        b.a_max = std::fmin(1.0, u.f_u_max * cfg.latency_window() / (u.R * u.B));
    }
    return b;
}

double lagrangian_a(const std::vector<double>& a, const Allocation& fixed,
                    const DualVars& omega, const SystemConfig& cfg,
                    const std::vector<UserParams>& users, const LoadOptions& opts) {
    double v = 0.0;
    double p_comp = 0.0;
    for (std::size_t i = 0; i < users.size(); ++i) {
        v += user_terms(a[i], fixed[i], omega.lambda[i], omega.mu[i], cfg,
                        users[i], opts.couple_fs_in_a_step, p_comp);
    }
    v += cooling_power(p_comp, cfg) * cfg.latency_window();
    return v;
}

double lagrangian_a_derivative(double a, const UserAllocation& fixed, double lambda,
                               double mu, const SystemConfig& cfg,
                               const UserParams& u) {
    const double window = cfg.latency_window();
    const double w = cfg.per_user_bandwidth();
    double d = -u.R * cfg.delta * u.B * fixed.f_s * fixed.f_s;
    d += lambda * (3.0 * a * a * u.R * u.R * u.R * u.k * u.B * u.B * u.B /
                       (window * window) -
                   cfg.sigma2 * u.R / (u.g * w) *
                       std::exp((1.0 - a) * u.R / (fixed.T_off * w)));
    d -= fixed.f_s > 0.0 ? mu * u.R * u.B / fixed.f_s : 0.0;
    return d;
}

std::vector<double> optimize_a(const Allocation& fixed, const DualVars& omega,
                               const SystemConfig& cfg,
                               const std::vector<UserParams>& users,
                               const LoadOptions& opts) {
    std::vector<double> out(users.size(), 1.0);
    for (std::size_t i = 0; i < users.size(); ++i) {
        const auto& u = users[i];
        if (u.R == 0.0) {
            out[i] = 1.0;  // empty task, any ratio works
            continue;
        }
        const LoadBounds b = load_bounds(cfg, u);
        if (fixed[i].T_off <= 0.0) {
            // Offloading is unavailable at this fixed point; a = 1 is the only
            // finite-objective choice.
            if (b.a_max < 1.0) {
                throw DegenerateOffload(
                    "zero fixed offload time with a capped local share");
            }
            out[i] = 1.0;
            continue;
        }
        if (opts.couple_fs_in_a_step) {
            // Derivative-free fallback for the coupled sensitivity mode.
            double lo = b.a_min, hi = b.a_max;
            double p_dummy;
            auto h = [&](double a) {
                p_dummy = 0.0;
                double v = user_terms(a, fixed[i], omega.lambda[i], omega.mu[i],
                                      cfg, u, true, p_dummy);
                return v + cooling_power(p_dummy, cfg) * cfg.latency_window();
            };
            constexpr double kInvPhi = 0.6180339887498949;
            double x1 = hi - kInvPhi * (hi - lo), x2 = lo + kInvPhi * (hi - lo);
            double f1 = h(x1), f2 = h(x2);
            while (hi - lo > opts.bisect_tol) {
                if (f1 <= f2) {
                    hi = x2; x2 = x1; f2 = f1;
                    x1 = hi - kInvPhi * (hi - lo); f1 = h(x1);
                } else {
                    lo = x1; x1 = x2; f1 = f2;
                    x2 = lo + kInvPhi * (hi - lo); f2 = h(x2);
                }
            }
            out[i] = 0.5 * (lo + hi);
            continue;
        }
        auto d = [&](double a) {
            return lagrangian_a_derivative(a, fixed[i], omega.lambda[i],
                                           omega.mu[i], cfg, u);
        };
        double lo = b.a_min, hi = b.a_max;
        if (d(lo) >= 0.0) {
            out[i] = lo;
            continue;
        }
        if (d(hi) <= 0.0) {
            out[i] = hi;
            continue;
        }
        while (hi - lo > opts.bisect_tol) {
            const double mid = 0.5 * (lo + hi);
            (d(mid) < 0.0 ? lo : hi) = mid;
        }
        out[i] = 0.5 * (lo + hi);
    }
    return out;
}

}  // namespace wptmec
