#pragma once

#include <vector>

#include "wptmec/types.hpp"

namespace wptmec {

struct LoadBounds {
    double a_min = 0.0;
    double a_max = 1.0;  // min(1, f_u_max (1-phi) T / (R B))
};

LoadBounds load_bounds(const SystemConfig& cfg, const UserParams& u);

struct LoadOptions {
    // Substitute the latency-tight f_s(a) into the compute and cooling terms
    // instead of holding f_s fixed (sensitivity studies only).
    bool couple_fs_in_a_step = false;
    double bisect_tol = 1e-8;
};

// Lagrangian of the load-management half-step at fixed {f_s, P_b, T_off} and
// multipliers. The cooling term is a constant at fixed f_s. Throws
// DegenerateOffload when some a_i < 1 while the fixed T_off,i = 0.
double lagrangian_a(const std::vector<double>& a, const Allocation& fixed,
                    const DualVars& omega, const SystemConfig& cfg,
                    const std::vector<UserParams>& users,
                    const LoadOptions& opts = {});

// Per-user derivative of the Lagrangian with respect to a_i (fixed-f_s form).
double lagrangian_a_derivative(double a, const UserAllocation& fixed, double lambda,
                               double mu, const SystemConfig& cfg,
                               const UserParams& u);

// Per-user 1-D convex minimization of the Lagrangian over the load bounds by
// bisection on the derivative. Users with fixed T_off = 0 keep a = 1.
std::vector<double> optimize_a(const Allocation& fixed, const DualVars& omega,
                               const SystemConfig& cfg,
                               const std::vector<UserParams>& users,
                               const LoadOptions& opts = {});

}  // namespace wptmec
