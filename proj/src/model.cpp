#include "wptmec/model.hpp"

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>

namespace wptmec {

namespace {

constexpr std::size_t kAggregate = static_cast<std::size_t>(-1);

void require(bool ok, const std::string& what) {
    if (!ok) throw ValidationError(what);
}

}  // namespace

void SystemConfig::validate() const {
    require(T > 0, "T must be > 0");
    require(phi >= 0 && phi <= 1, "phi must be in [0, 1]");
    require(W > 0, "W must be > 0");
    require(I >= 1, "I must be >= 1");
    require(f_s_max > 0, "f_s_max must be > 0");
    require(P_b_max > 0, "P_b_max must be > 0");
    require(sigma2 > 0, "sigma2 must be > 0");
    require(delta > 0, "delta must be > 0");
    require(eps1 >= 0, "eps1 must be >= 0");
    require(eps2 >= 0, "eps2 must be >= 0");
    require(P_a_max >= 0, "P_a_max must be >= 0");
}

void UserParams::validate() const {
    require(R >= 0, "R must be >= 0");
    require(B > 0, "B must be > 0");
    require(k > 0, "k must be > 0");
    require(f_u_max > 0, "f_u_max must be > 0");
    require(theta > 0 && theta < 1, "theta must be in (0, 1)");
    require(H > 0, "H must be > 0");
    require(g > 0, "g must be > 0");
}

double harvested_energy(double P_b, const SystemConfig& cfg, const UserParams& u) {
    return P_b * cfg.phi * cfg.T * u.theta * u.H;
}

double local_cpu_frequency(double a, const SystemConfig& cfg, const UserParams& u) {
    if (a == 0.0) return 0.0;
    const double f = a * u.R * u.B / cfg.latency_window();
    if (f > u.f_u_max) {
        throw InfeasibleLocalLoad("local load needs " + std::to_string(f) +
                                  " Hz, above f_u_max");
    }
    return f;
}

std::pair<double, double> local_cost(double a, double f_u, const SystemConfig&,
                                     const UserParams& u) {
    if (a == 0.0 || u.R == 0.0) return {0.0, 0.0};
    const double cycles = a * u.R * u.B;
    return {cycles / f_u, cycles * u.k * f_u * f_u};
}

double offload_tx_power(double a, double T_off, const SystemConfig& cfg,
                        const UserParams& u) {
    const double bits = (1.0 - a) * u.R;
    if (bits == 0.0) return 0.0;
    if (T_off <= 0.0) {
        throw DegenerateOffload("nonzero offload share with zero offload time");
    }
    const double rate = bits / T_off;
    return cfg.sigma2 / u.g * std::expm1(rate / cfg.per_user_bandwidth());
}

std::pair<double, double> edge_cost(double a, double f_s, const SystemConfig& cfg,
                                    const UserParams& u) {
    const double cycles = (1.0 - a) * u.R * u.B;
    if (cycles == 0.0) return {0.0, 0.0};
    return {cycles / f_s, cycles * cfg.delta * f_s * f_s};
}

double cooling_threshold(const SystemConfig& cfg) {
    if (cfg.eps1 <= 0.0) return cfg.P_a_max;
    return std::fmin(cfg.P_a_max, std::sqrt(cfg.eps2 / (3.0 * cfg.eps1)));
}

double cooling_power(double P, const SystemConfig& cfg) {
    const double pth = cooling_threshold(cfg);
    if (P <= pth) return cfg.eps1 * P * P * P;
    return cfg.eps1 * pth * pth * pth + cfg.eps2 * (P - pth);
}

EnergyReport total_ap_energy(const Allocation& alloc, const SystemConfig& cfg,
                             const std::vector<UserParams>& users) {
    if (alloc.size() != users.size() || users.size() != cfg.I) {
        throw ValidationError("allocation dimension does not match user count");
    }
    EnergyReport rep;
    const std::size_t n = users.size();
    rep.E_h.resize(n);
    rep.E_loc.resize(n);
    rep.E_off.resize(n);
    rep.E_comp.resize(n);

    double comp_power = 0.0;
    double e_comp_sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const auto& x = alloc[i];
        const auto& u = users[i];
        rep.E_h[i] = harvested_energy(x.P_b, cfg, u);
        rep.E_loc[i] = local_cost(x.a, x.f_u, cfg, u).second;
        // T_off = 0 with an offload share pending is infeasible, not an energy
        // cost; check_feasibility flags it.
        rep.E_off[i] =
            x.T_off > 0.0 ? offload_tx_power(x.a, x.T_off, cfg, u) * x.T_off : 0.0;
        rep.E_comp[i] = edge_cost(x.a, x.f_s, cfg, u).second;
        e_comp_sum += rep.E_comp[i];
        comp_power += cfg.delta * x.f_s * x.f_s * x.f_s;
        rep.E_wpt += cfg.phi * cfg.T * x.P_b;
    }
    rep.E_cool = cooling_power(comp_power, cfg) * cfg.latency_window();
    rep.E_total = rep.E_wpt + e_comp_sum + rep.E_cool;
    rep.violations = check_feasibility(alloc, cfg, users, 1e-9);
    return rep;
}

std::vector<Violation> check_feasibility(const Allocation& alloc,
                                         const SystemConfig& cfg,
                                         const std::vector<UserParams>& users,
                                         double tol) {
    std::vector<Violation> out;
    const double window = cfg.latency_window();
    auto norm = [](double lhs, double rhs) {
        const double scale = rhs != 0.0 ? std::fabs(rhs) : 1.0;
        return (lhs - rhs) / scale;
    };
    auto push = [&](const char* id, std::size_t i, double r) {
        if (r > tol) out.push_back({id, i, r});
    };

    double f_s_sum = 0.0;
    double P_b_sum = 0.0;
    for (std::size_t i = 0; i < users.size(); ++i) {
        const auto& x = alloc[i];
        const auto& u = users[i];
        const double e_h = harvested_energy(x.P_b, cfg, u);
        const double e_loc = local_cost(x.a, x.f_u, cfg, u).second;
        double e_off = 0.0;
        if (x.T_off > 0.0) {
            e_off = offload_tx_power(x.a, x.T_off, cfg, u) * x.T_off;
        } else if (x.a < 1.0 && u.R > 0.0) {
            out.push_back({"degenerate_offload", i, 1.0});
        }
        push("energy_causality", i, norm(e_loc + e_off, e_h));
        const double t_exe = edge_cost(x.a, x.f_s, cfg, u).first;
        push("offload_latency", i, norm(x.T_off + t_exe, window));
        push("local_latency", i, norm(local_cost(x.a, x.f_u, cfg, u).first, window));
        push("f_u_cap", i, norm(x.f_u, u.f_u_max));
        f_s_sum += x.f_s;
        P_b_sum += x.P_b;
    }
    push("f_s_cap", kAggregate, norm(f_s_sum, cfg.f_s_max));
    push("P_b_cap", kAggregate, norm(P_b_sum, cfg.P_b_max));
    return out;
}

}  // namespace wptmec
