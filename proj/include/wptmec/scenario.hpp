#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "wptmec/algorithm.hpp"
#include "wptmec/oracle.hpp"
#include "wptmec/types.hpp"

namespace wptmec {

// A scenario is a system configuration plus a user template (optionally with
// per-user overrides), solver options, and an optional one-parameter sweep.
struct Scenario {
    SystemConfig config;
    UserParams user_template;
    // keyed by (user index, field name); applied after replication
    std::map<std::pair<std::size_t, std::string>, double> user_overrides;
    JointOptions solver;
    GridSpec oracle;

    std::string sweep_param;      // empty = single point
    std::vector<double> sweep_values;

    std::vector<UserParams> materialize_users() const;
};

// Flat key = value text: system.*, user.*, userN.* (1-based overrides),
// cooling.*, solver.*, oracle.*, sweep.param, sweep.values. '#' comments.
// R values accept a "nats" or "Knats" suffix; everything else is SI.
Scenario load_scenario(const std::string& path);
Scenario parse_scenario(std::istream& in, const std::string& origin);

struct RunRecord {
    std::string sweep_param;  // empty when the scenario has no sweep
    double sweep_value = 0.0;
    std::string scheme;
    std::string status;   // "ok" | "infeasible" | "failed"
    std::string message;  // error detail for non-ok records
    double E_total = 0.0, E_wpt = 0.0, E_comp = 0.0, E_cool = 0.0;
    std::vector<UserAllocation> users;
    bool converged = false;
    std::size_t iterations = 0;
    double wall_ms = 0.0;  // informational; never emitted (determinism)
};

struct RunOptions {
    std::size_t jobs = 1;
    std::ostream* trace_out = nullptr;  // dual-iteration traces; forces jobs=1
};

// One record per sweep point x scheme, in deterministic sweep order. mode
// "all" runs proposed + the three fixed-ratio baselines. A failing record is
// captured in its status, never aborts the sweep.
std::vector<RunRecord> run(const Scenario& scenario, const std::string& mode,
                           const RunOptions& opts = {});

// CSV: fixed column order (sweep_param, sweep_value, scheme, status,
// E_total_J, E_wpt_J, E_comp_J, E_cool_J, per-user a,f_u_Hz,f_s_Hz,T_off_s,
// P_b_W groups, converged, iterations). JSON mirrors the record structure.
// Shortest round-trip decimals; byte-deterministic.
void emit(const std::vector<RunRecord>& results, const std::string& format,
          const std::string& path);
void emit_csv(const std::vector<RunRecord>& results, std::ostream& out);
void emit_json(const std::vector<RunRecord>& results, std::ostream& out);

std::vector<RunRecord> load_results_json(const std::string& path);

}  // namespace wptmec
