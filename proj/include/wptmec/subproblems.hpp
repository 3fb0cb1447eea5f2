#pragma once

#include <vector>

#include "wptmec/types.hpp"

namespace wptmec {

// Offloading-time subproblem: minimizes
//   lambda (sigma2/g) (e^{(1-a)R/(T w)} - 1) T + mu T
// over T >= 0. Zero when lambda = 0 or a = 1; otherwise inverts the rate
// stationarity condition through the Lambert W principal branch.
double optimal_offload_time(double lambda, double mu, double a,
                            const SystemConfig& cfg, const UserParams& u);

// WPT power subproblem: linear in P_b with coefficient
//   c = phi T - lambda phi T theta H + pi.
// Returns 0 for c > 0, P_b_max for c < 0, and the energy-causality-tight
// value for |c| within tolerance of 0.
double optimal_wpt_power(double lambda, double pi, double a, double T_off,
                         const SystemConfig& cfg, const UserParams& u);

// Energy-causality-tight WPT power at a given offloading time (the tie branch
// of the power subproblem, and the recovery formula).
double causality_tight_power(double a, double T_off, const SystemConfig& cfg,
                             const UserParams& u);

// Sign coefficient c of the power subproblem.
double wpt_power_coefficient(double lambda, double pi, const SystemConfig& cfg,
                             const UserParams& u);

// Edge-CPU-frequency subproblem: minimizes
//   sum_i [(1-a_i) R_i delta B_i f_i^2 + mu_i (1-a_i) R_i B_i / f_i + nu f_i]
//   + E_cool(f)
// over f >= 0 by per-user block-coordinate golden-section descent.
// Users with a_i = 1 get f_i = 0 exactly.
std::vector<double> solve_edge_frequencies(const DualVars& omega,
                                           const std::vector<double>& a,
                                           const SystemConfig& cfg,
                                           const std::vector<UserParams>& users);

// Value of the edge-frequency subproblem objective at f (used by tests and by
// the descent itself).
double edge_frequency_objective(const std::vector<double>& f, const DualVars& omega,
                                const std::vector<double>& a,
                                const SystemConfig& cfg,
                                const std::vector<UserParams>& users);

}  // namespace wptmec
