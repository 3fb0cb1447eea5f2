#include "wptmec/subproblems.hpp"

#include <cmath>
#include <limits>

#include "wptmec/lambertw.hpp"
#include "wptmec/model.hpp"

namespace wptmec {

namespace {

constexpr double kInvE = 0.36787944117144233;

// Golden-section minimization of a unimodal function on [lo, hi]. Endpoints
// are never evaluated, so a pole at lo is harmless.
template <class F>
double golden_min(F&& f, double lo, double hi, double tol) {
    constexpr double kInvPhi = 0.6180339887498949;
    double a = lo, b = hi;
    double x1 = b - kInvPhi * (b - a);
    double x2 = a + kInvPhi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    while (b - a > tol) {
        if (f1 <= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - kInvPhi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + kInvPhi * (b - a);
            f2 = f(x2);
        }
    }
    return 0.5 * (a + b);
}

}  // namespace

double optimal_offload_time(double lambda, double mu, double a,
                            const SystemConfig& cfg, const UserParams& u) {
    const double bits = (1.0 - a) * u.R;
    if (lambda <= 0.0 || bits == 0.0) return 0.0;
    const double w = cfg.per_user_bandwidth();
    const double arg = u.g * mu / (cfg.sigma2 * std::exp(1.0) * lambda) - kInvE;
    const double w0 = lambert_w0(arg).value;
    const double rate = w * (w0 + 1.0);
    if (rate <= 0.0) {
        // mu = 0 drives the rate to the branch point; no finite minimizer, the
        // infimum is at T -> infinity. Callers cap against the latency window.
        return std::numeric_limits<double>::infinity();
    }
    return bits / rate;
}

double causality_tight_power(double a, double T_off, const SystemConfig& cfg,
                             const UserParams& u) {
    const double window = cfg.latency_window();
    const double e_loc =
        a * a * a * u.R * u.R * u.R * u.k * u.B * u.B * u.B / (window * window);
    double e_off = 0.0;
    if ((1.0 - a) * u.R > 0.0) {
        e_off = offload_tx_power(a, T_off, cfg, u) * T_off;
    }
    return (e_loc + e_off) / (cfg.phi * cfg.T * u.theta * u.H);
}

double wpt_power_coefficient(double lambda, double pi, const SystemConfig& cfg,
                             const UserParams& u) {
    return cfg.phi * cfg.T * (1.0 - lambda * u.theta * u.H) + pi;
}

double optimal_wpt_power(double lambda, double pi, double a, double T_off,
                         const SystemConfig& cfg, const UserParams& u) {
    const double c = wpt_power_coefficient(lambda, pi, cfg, u);
    const double c_tol = 1e-12 * cfg.phi * cfg.T;
    if (c > c_tol) return 0.0;
    if (c < -c_tol) return cfg.P_b_max;
    return causality_tight_power(a, T_off, cfg, u);
}

double edge_frequency_objective(const std::vector<double>& f, const DualVars& omega,
                                const std::vector<double>& a,
                                const SystemConfig& cfg,
                                const std::vector<UserParams>& users) {
    double obj = 0.0;
    double p_comp = 0.0;
    for (std::size_t i = 0; i < users.size(); ++i) {
        const double cycles = (1.0 - a[i]) * users[i].R * users[i].B;
        if (cycles > 0.0) {
            obj += cycles * cfg.delta * f[i] * f[i];
            if (omega.mu[i] > 0.0) {
                obj += f[i] > 0.0 ? omega.mu[i] * cycles / f[i]
                                  : std::numeric_limits<double>::infinity();
            }
        }
        obj += omega.nu * f[i];
        p_comp += cfg.delta * f[i] * f[i] * f[i];
    }
    obj += cooling_power(p_comp, cfg) * cfg.latency_window();
    return obj;
}

std::vector<double> solve_edge_frequencies(const DualVars& omega,
                                           const std::vector<double>& a,
                                           const SystemConfig& cfg,
                                           const std::vector<UserParams>& users) {
    const std::size_t n = users.size();
    std::vector<double> f(n, 0.0);
    std::vector<std::size_t> active;
    for (std::size_t i = 0; i < n; ++i) {
        const double cycles = (1.0 - a[i]) * users[i].R * users[i].B;
        // Without a latency price the per-user terms are nondecreasing in f.
        if (cycles > 0.0 && omega.mu[i] > 0.0) active.push_back(i);
    }
    if (active.empty()) return f;

    const double window = cfg.latency_window();
    const double step_tol = 1e-6 * cfg.f_s_max;
    const std::size_t max_sweeps = 300;
    for (std::size_t sweep = 0; sweep < max_sweeps; ++sweep) {
        double max_change = 0.0;
        for (std::size_t i : active) {
            const double cycles = (1.0 - a[i]) * users[i].R * users[i].B;
            double p_other = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                if (j != i) p_other += cfg.delta * f[j] * f[j] * f[j];
            }
            auto h = [&](double fi) {
                double v = cycles * cfg.delta * fi * fi + omega.nu * fi;
                v += omega.mu[i] * cycles / fi;
                v += cooling_power(p_other + cfg.delta * fi * fi * fi, cfg) * window;
                return v;
            };
            const double fi = golden_min(h, 0.0, cfg.f_s_max, 1e-10 * cfg.f_s_max);
            max_change = std::fmax(max_change, std::fabs(fi - f[i]));
            f[i] = fi;
        }
        if (max_change < step_tol) return f;
        if (active.size() == 1) return f;  // single coordinate, one pass is exact
    }
    throw NonConvergence("edge-frequency coordinate descent hit the sweep cap");
}

}  // namespace wptmec
