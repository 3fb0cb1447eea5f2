#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace wptmec {

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Latency-tight local CPU frequency exceeds the chip limit.
struct InfeasibleLocalLoad : Error {
    using Error::Error;
};

// Offloading a nonzero task share with zero offloading time.
struct DegenerateOffload : Error {
    using Error::Error;
};

// Argument outside a function's domain (e.g. Lambert W below the branch point).
struct DomainError : Error {
    using Error::Error;
};

// Iterative solver hit its cap without meeting tolerances.
struct NonConvergence : Error {
    using Error::Error;
};

// Recovered offloading time leaves no room for edge execution.
struct LatencyExhausted : Error {
    using Error::Error;
};

// No feasible allocation exists for the requested instance.
struct Infeasible : Error {
    using Error::Error;
};

struct ParseError : Error {
    using Error::Error;
};

struct ValidationError : Error {
    using Error::Error;
};

struct IoError : Error {
    using Error::Error;
};

// ---------------------------------------------------------------------------
// Domain types
// ---------------------------------------------------------------------------

// Global slot / band / AP / cooling parameters.
struct SystemConfig {
    double T = 0.2;          // slot duration (s)
    double phi = 0.4;        // WPT time-splitting ratio, in [0, 1]
    double W = 5e6;          // system bandwidth (Hz)
    std::size_t I = 5;       // user count
    double f_s_max = 2e9;    // server CPU capacity (Hz)
    double P_b_max = 20.0;   // AP max transmit power (W)
    double sigma2 = 1e-9;    // AP receiver noise power (W)
    double delta = 1e-26;    // server switched-capacitance coefficient
    double eps1 = 1e-3;      // OA cooling cubic coefficient (W^-2)
    double eps2 = 0.5;       // CW cooling linear coefficient
    double P_a_max = 10.0;   // OA cooling capacity (W)

    // Per-user uplink bandwidth: the system band is split equally.
    double per_user_bandwidth() const { return W / static_cast<double>(I); }

    // Duration of the offload+compute window (Phases II and III).
    double latency_window() const { return (1.0 - phi) * T; }

    void validate() const;
};

// Per-user task, chip, and channel parameters.
struct UserParams {
    double R = 1.5e3;        // task size (nats)
    double B = 1e3;          // CPU cycles per nat
    double k = 1e-26;        // user switched-capacitance coefficient
    double f_u_max = 1e9;    // user max CPU frequency (Hz)
    double theta = 0.3;      // energy conversion efficiency, in (0, 1)
    double H = 1e-3;         // downlink channel gain
    double g = 1e-7;         // effective uplink channel gain

    void validate() const;
};

// Per-user decision variables.
struct UserAllocation {
    double a = 0.0;          // local-computing ratio, in [0, 1]
    double f_u = 0.0;        // local CPU frequency (Hz)
    double f_s = 0.0;        // server CPU frequency share (Hz)
    double P_b = 0.0;        // WPT transmit power (W)
    double T_off = 0.0;      // offloading time (s)
};

struct Allocation {
    std::vector<UserAllocation> users;

    std::size_t size() const { return users.size(); }
    UserAllocation& operator[](std::size_t i) { return users[i]; }
    const UserAllocation& operator[](std::size_t i) const { return users[i]; }
};

// Lagrange multipliers of the reduced problem.
struct DualVars {
    std::vector<double> lambda;  // energy causality, per user
    std::vector<double> mu;      // offload+edge latency, per user
    double nu = 0.0;             // sum f_s <= f_s_max
    double pi = 0.0;             // sum P_b <= P_b_max

    explicit DualVars(std::size_t n = 0) : lambda(n, 0.0), mu(n, 0.0) {}
};

// One violated constraint: id and signed residual, normalized by the
// constraint's right-hand side (or 1 if the RHS is 0).
struct Violation {
    std::string constraint;
    std::size_t user;        // index, or SIZE_MAX for aggregate constraints
    double residual;
};

// Decomposed energies plus feasibility residuals.
struct EnergyReport {
    std::vector<double> E_h;     // harvested energy per user (J)
    std::vector<double> E_loc;   // local compute energy per user (J)
    std::vector<double> E_off;   // offload transmit energy per user (J)
    std::vector<double> E_comp;  // edge compute energy per user (J)
    double E_wpt = 0.0;          // AP WPT energy (J)
    double E_cool = 0.0;         // cooling energy (J)
    double E_total = 0.0;        // objective value (J)
    std::vector<Violation> violations;
};

}  // namespace wptmec
