#pragma once

#include <string>
#include <vector>

#include "wptmec/dual.hpp"
#include "wptmec/types.hpp"

namespace wptmec {

enum class Scheme { proposed, local, full, half, oracle };

std::string scheme_name(Scheme s);

struct Solution {
    Allocation allocation;
    EnergyReport report;
    DualVars dual;
    std::size_t iterations = 0;  // outer iterations (1 for baselines)
    bool converged = false;
    Scheme scheme = Scheme::proposed;
    std::vector<double> objective_history;  // per outer iteration
};

struct JointOptions {
    DualOptions dual;
    double a_tol = 1e-4;
    double obj_tol = 1e-5;
    std::size_t outer_cap = 200;
    bool couple_fs_in_a_step = false;
};

// Feasibility probe for the inner problem at fixed a: exact for a_i = 1
// users, a monotone time-split scan for offloading users.
bool inner_feasible(const std::vector<double>& a, const SystemConfig& cfg,
                    const std::vector<UserParams>& users);

// Alternating outer loop: dual solve + primal recovery at fixed a, then the
// per-user load step at fixed primal, until both the a-change and the
// relative objective change fall below tolerance.
Solution run_joint(const SystemConfig& cfg, const std::vector<UserParams>& users,
                   const JointOptions& opts = {});

// Fixed-ratio baselines: a = 1 (local), 0 (full), 0.5 (half). Throws
// Infeasible when the fixed ratio admits no feasible inner solution.
Solution run_baseline(const SystemConfig& cfg, const std::vector<UserParams>& users,
                      Scheme scheme, const JointOptions& opts = {});

}  // namespace wptmec
