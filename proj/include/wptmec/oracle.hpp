#pragma once

#include <vector>

#include "wptmec/algorithm.hpp"
#include "wptmec/types.hpp"

namespace wptmec {

struct GridSpec {
    std::size_t a_points = 64;
    std::size_t t_points = 64;          // offload-time grid over (0, (1-phi)T)
    std::size_t refinement_levels = 2;  // shrink-around-incumbent rounds
    std::size_t max_evals = 10000000;
};

// Brute-force verification search. Exploits the optimality structure: given
// (a, T_off) the WPT power is energy-causality-tight and the edge frequency
// latency-tight, so the search space is two dimensions per user. Joint
// enumeration for up to two users, coordinate refinement for three.
Solution grid_search(const SystemConfig& cfg, const std::vector<UserParams>& users,
                     const GridSpec& spec);

struct KktReport {
    std::vector<double> slack_lambda;   // |lambda_i g_lambda_i|, normalized
    std::vector<double> slack_mu;       // |mu_i g_mu_i|, normalized
    double slack_nu = 0.0;
    double slack_pi = 0.0;
    std::vector<double> stationarity;   // offload-time first-order residual
    std::vector<Violation> primal;      // positive primal residuals
    double max_residual = 0.0;          // worst of everything above
};

// Complementary-slackness, stationarity, and primal residuals of a solution
// carrying dual variables.
KktReport kkt_residuals(const Solution& sol, const SystemConfig& cfg,
                        const std::vector<UserParams>& users);

}  // namespace wptmec
