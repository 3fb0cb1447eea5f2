#pragma once

#include <utility>
#include <vector>

#include "wptmec/types.hpp"

namespace wptmec {

// Energy harvested by a user over the WPT phase: P_b * phi * T * theta * H.
double harvested_energy(double P_b, const SystemConfig& cfg, const UserParams& u);

// Latency-tight local CPU frequency a*R*B / ((1-phi)*T). Throws
// InfeasibleLocalLoad if it exceeds f_u_max.
double local_cpu_frequency(double a, const SystemConfig& cfg, const UserParams& u);

// (execution time, energy) of the locally computed task share.
std::pair<double, double> local_cost(double a, double f_u, const SystemConfig& cfg,
                                     const UserParams& u);

// Transmit power sustaining the offload rate (1-a)R / T_off on bandwidth W/I.
// Throws DegenerateOffload when a < 1 and T_off = 0.
double offload_tx_power(double a, double T_off, const SystemConfig& cfg,
                        const UserParams& u);

// (execution time, energy) of the offloaded share at the server.
std::pair<double, double> edge_cost(double a, double f_s, const SystemConfig& cfg,
                                    const UserParams& u);

// Minimum cooling power for a given total server computing power: outside-air
// cubic up to the threshold P_TH = min(P_a_max, sqrt(eps2 / (3 eps1))),
// chilled-water linear beyond it.
double cooling_power(double P_comp_total, const SystemConfig& cfg);

double cooling_threshold(const SystemConfig& cfg);

// Full AP-side energy decomposition plus user-side energies for constraint
// checks. E_total = E_wpt + sum E_comp + E_cool.
EnergyReport total_ap_energy(const Allocation& alloc, const SystemConfig& cfg,
                             const std::vector<UserParams>& users);

// Signed, RHS-normalized residuals of every constraint of the full problem.
// Empty iff the allocation is feasible within tol (relative).
std::vector<Violation> check_feasibility(const Allocation& alloc,
                                         const SystemConfig& cfg,
                                         const std::vector<UserParams>& users,
                                         double tol);

}  // namespace wptmec
