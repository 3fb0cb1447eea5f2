#pragma once

#include <iosfwd>
#include <utility>
#include <vector>

#include "wptmec/types.hpp"

namespace wptmec {

struct DualOptions {
    double eta0 = 0.1;           // stepsize numerator, eta(n) = eta0 / sqrt(n+1)
    std::size_t max_iter = 20000;
    double gap_tol = 1e-3;       // relative duality gap at termination
    double res_tol = 1e-6;       // normalized primal residual at termination
    double g_max = 1e3;          // clamp on normalized subgradient components
    double lambda_floor = 1e-6;  // floor on lambda_i for users with a_i < 1
    std::ostream* trace_out = nullptr;  // optional per-iteration records
};

struct DualIterate {
    std::size_t n = 0;
    DualVars omega;
    double dual_value = 0.0;
    double grad_norm = 0.0;
};

struct DualTrace {
    std::vector<DualIterate> iterates;
    bool converged = false;
    double final_gap = 0.0;      // relative duality gap estimate
    std::size_t iterations = 0;
};

struct DualResult {
    DualVars omega;
    DualTrace trace;
};

// Dual function value D(omega) together with the subproblem minimizers
// packaged as a candidate allocation (f_u filled in from the latency-tight
// local frequency). The candidate's T_off is capped at the latency window
// when the offload-time subproblem has no finite minimizer.
std::pair<double, Allocation> dual_value(const DualVars& omega,
                                         const std::vector<double>& a,
                                         const SystemConfig& cfg,
                                         const std::vector<UserParams>& users);

// Subgradient of D at the multiplier point that produced `candidate`,
// ordered [g_lambda_0..I, g_mu_0..I, g_nu, g_pi].
std::vector<double> subgradients(const Allocation& candidate,
                                 const std::vector<double>& a,
                                 const SystemConfig& cfg,
                                 const std::vector<UserParams>& users);

// Projected subgradient ascent on the dual with diminishing stepsizes.
// Terminates once the recovered primal is feasible within res_tol and the
// relative duality gap is within gap_tol; otherwise runs to the cap and
// returns the best iterate with trace.converged = false. Throws
// NonConvergence only if no primal could be recovered at all.
DualResult solve_dual(const std::vector<double>& a, const SystemConfig& cfg,
                      const std::vector<UserParams>& users,
                      const DualOptions& opts = {});

// Primal recovery at converged multipliers: offload time from the Lambert-W
// form, WPT power energy-causality-tight, edge frequency latency-tight,
// local frequency latency-tight. Throws LatencyExhausted when the offload
// time leaves no room for edge execution.
Allocation recover_primal(const DualVars& omega, const std::vector<double>& a,
                          const SystemConfig& cfg,
                          const std::vector<UserParams>& users);

}  // namespace wptmec
