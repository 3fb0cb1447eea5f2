#include "wptmec/scenario.hpp"

#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

namespace wptmec {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_number(const std::string& raw, const std::string& where) {
    const std::string s = trim(raw);
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str() || *end != '\0') {
        throw ParseError(where + ": not a number: '" + s + "'");
    }
    return v;
}

// "1.5 Knats" / "1500 nats" / "1500" -> nats.
double parse_task_size(const std::string& raw, const std::string& where) {
    std::string s = trim(raw);
    double scale = 1.0;
    if (s.size() >= 5 && s.substr(s.size() - 5) == "Knats") {
        scale = 1e3;
        s = trim(s.substr(0, s.size() - 5));
    } else if (s.size() >= 4 && s.substr(s.size() - 4) == "nats") {
        s = trim(s.substr(0, s.size() - 4));
    }
    return parse_number(s, where) * scale;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

void set_user_field(UserParams& u, const std::string& field, double v,
                    const std::string& where) {
    if (field == "R") u.R = v;
    else if (field == "B") u.B = v;
    else if (field == "k") u.k = v;
    else if (field == "f_u_max") u.f_u_max = v;
    else if (field == "theta") u.theta = v;
    else if (field == "H") u.H = v;
    else if (field == "g") u.g = v;
    else throw ParseError(where + ": unknown user field '" + field + "'");
}

bool sweepable(const std::string& p) {
    return p == "R" || p == "T" || p == "W" || p == "I" || p == "phi" ||
           p == "H" || p == "theta" || p == "g";
}

void apply_sweep(Scenario& sc, double value) {
    const std::string& p = sc.sweep_param;
    if (p == "R") sc.user_template.R = value;
    else if (p == "T") sc.config.T = value;
    else if (p == "W") sc.config.W = value;
    else if (p == "phi") sc.config.phi = value;
    else if (p == "H") sc.user_template.H = value;
    else if (p == "theta") sc.user_template.theta = value;
    else if (p == "g") sc.user_template.g = value;
    else if (p == "I") {
        if (value <= 0.0 || value != std::floor(value)) {
            throw ValidationError("sweep over I requires positive integers");
        }
        sc.config.I = static_cast<std::size_t>(value);
    } else {
        throw ValidationError("unsupported sweep parameter '" + p + "'");
    }
}

std::string fmt(double v) {
    char buf[32];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

}  // namespace

std::vector<UserParams> Scenario::materialize_users() const {
    std::vector<UserParams> users(config.I, user_template);
    for (const auto& [key, v] : user_overrides) {
        if (key.first >= users.size()) {
            throw ValidationError("user override index " +
                                  std::to_string(key.first + 1) +
                                  " exceeds system.I");
        }
        set_user_field(users[key.first], key.second, v, "override");
    }
    return users;
}

Scenario parse_scenario(std::istream& in, const std::string& origin) {
    Scenario sc;
    std::string sweep_values_raw;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const std::string where =
            origin + ":" + std::to_string(lineno);
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ParseError(where + ": expected 'key = value'");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        const auto dot = key.find('.');
        if (dot == std::string::npos) {
            throw ParseError(where + ": key '" + key + "' has no section");
        }
        const std::string sect = key.substr(0, dot);
        const std::string field = key.substr(dot + 1);
        const std::string ctx = where + " (" + key + ")";

        if (sect == "system") {
            if (field == "T") sc.config.T = parse_number(val, ctx);
            else if (field == "phi") sc.config.phi = parse_number(val, ctx);
            else if (field == "W") sc.config.W = parse_number(val, ctx);
            else if (field == "I") {
                const double v = parse_number(val, ctx);
                if (v <= 0.0 || v != std::floor(v)) {
                    throw ValidationError(ctx + ": I must be a positive integer");
                }
                sc.config.I = static_cast<std::size_t>(v);
            }
            else if (field == "f_s_max") sc.config.f_s_max = parse_number(val, ctx);
            else if (field == "P_b_max") sc.config.P_b_max = parse_number(val, ctx);
            else if (field == "sigma2") sc.config.sigma2 = parse_number(val, ctx);
            else if (field == "delta") sc.config.delta = parse_number(val, ctx);
            else throw ParseError(ctx + ": unknown system field");
        } else if (sect == "cooling") {
            if (field == "eps1") sc.config.eps1 = parse_number(val, ctx);
            else if (field == "eps2") sc.config.eps2 = parse_number(val, ctx);
            else if (field == "P_a_max") sc.config.P_a_max = parse_number(val, ctx);
            else throw ParseError(ctx + ": unknown cooling field");
        } else if (sect == "user") {
            const double v = field == "R" ? parse_task_size(val, ctx)
                                          : parse_number(val, ctx);
            set_user_field(sc.user_template, field, v, ctx);
        } else if (sect.size() > 4 && sect.substr(0, 4) == "user") {
            const std::string idx = sect.substr(4);
            char* end = nullptr;
            const long n = std::strtol(idx.c_str(), &end, 10);
            if (*end != '\0' || n < 1) {
                throw ParseError(ctx + ": bad user index '" + idx + "'");
            }
            const double v = field == "R" ? parse_task_size(val, ctx)
                                          : parse_number(val, ctx);
            // validates the field name now, records the override for later
            UserParams probe;
            set_user_field(probe, field, v, ctx);
            sc.user_overrides[{static_cast<std::size_t>(n - 1), field}] = v;
        } else if (sect == "solver") {
            if (field == "eta0") sc.solver.dual.eta0 = parse_number(val, ctx);
            else if (field == "max_iter")
                sc.solver.dual.max_iter =
                    static_cast<std::size_t>(parse_number(val, ctx));
            else if (field == "gap_tol") sc.solver.dual.gap_tol = parse_number(val, ctx);
            else if (field == "res_tol") sc.solver.dual.res_tol = parse_number(val, ctx);
            else if (field == "a_tol") sc.solver.a_tol = parse_number(val, ctx);
            else if (field == "obj_tol") sc.solver.obj_tol = parse_number(val, ctx);
            else if (field == "outer_cap")
                sc.solver.outer_cap = static_cast<std::size_t>(parse_number(val, ctx));
            else throw ParseError(ctx + ": unknown solver field");
        } else if (sect == "oracle") {
            if (field == "a_points")
                sc.oracle.a_points = static_cast<std::size_t>(parse_number(val, ctx));
            else if (field == "t_points")
                sc.oracle.t_points = static_cast<std::size_t>(parse_number(val, ctx));
            else if (field == "refinement_levels")
                sc.oracle.refinement_levels =
                    static_cast<std::size_t>(parse_number(val, ctx));
            else if (field == "max_evals")
                sc.oracle.max_evals = static_cast<std::size_t>(parse_number(val, ctx));
            else throw ParseError(ctx + ": unknown oracle field");
        } else if (sect == "sweep") {
            if (field == "param") {
                if (!sweepable(val)) {
                    throw ParseError(ctx + ": unsupported sweep parameter '" + val +
                                     "'");
                }
                sc.sweep_param = val;
            } else if (field == "values") {
                sweep_values_raw = val;
            } else {
                throw ParseError(ctx + ": unknown sweep field");
            }
        } else {
            throw ParseError(ctx + ": unknown section '" + sect + "'");
        }
    }

    if (!sweep_values_raw.empty()) {
        if (sc.sweep_param.empty()) {
            throw ParseError(origin + ": sweep.values without sweep.param");
        }
        std::string s = trim(sweep_values_raw);
        double scale = 1.0;
        if (sc.sweep_param == "R") {
            if (s.size() >= 5 && s.substr(s.size() - 5) == "Knats") {
                scale = 1e3;
                s = trim(s.substr(0, s.size() - 5));
            } else if (s.size() >= 4 && s.substr(s.size() - 4) == "nats") {
                s = trim(s.substr(0, s.size() - 4));
            }
        }
        const std::string ctx = origin + " (sweep.values)";
        if (s.find(':') != std::string::npos) {
            const auto parts = split(s, ':');
            if (parts.size() != 3) {
                throw ParseError(ctx + ": range must be start:step:end");
            }
            const double start = parse_number(parts[0], ctx);
            const double step = parse_number(parts[1], ctx);
            const double end = parse_number(parts[2], ctx);
            if (step <= 0.0 || end < start) {
                throw ParseError(ctx + ": need step > 0 and end >= start");
            }
            for (double v = start; v <= end + 0.5 * step; v += step) {
                sc.sweep_values.push_back(v * scale);
            }
        } else {
            for (const auto& tok : split(s, ',')) {
                sc.sweep_values.push_back(parse_number(tok, ctx) * scale);
            }
        }
    }
    if (!sc.sweep_param.empty() && sc.sweep_values.empty()) {
        throw ParseError(origin + ": sweep.param without sweep.values");
    }

    // Every sweep value must yield a valid instance.
    {
        Scenario probe = sc;
        if (probe.sweep_param.empty()) {
            probe.config.validate();
            for (const auto& u : probe.materialize_users()) u.validate();
        } else {
            for (double v : sc.sweep_values) {
                Scenario pt = sc;
                apply_sweep(pt, v);
                pt.config.validate();
                for (const auto& u : pt.materialize_users()) u.validate();
            }
        }
    }
    return sc;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open scenario file '" + path + "'");
    return parse_scenario(in, path);
}

namespace {

std::vector<Scheme> mode_schemes(const std::string& mode) {
    if (mode == "proposed") return {Scheme::proposed};
    if (mode == "local") return {Scheme::local};
    if (mode == "full") return {Scheme::full};
    if (mode == "half") return {Scheme::half};
    if (mode == "oracle") return {Scheme::oracle};
    if (mode == "all") {
        return {Scheme::proposed, Scheme::local, Scheme::full, Scheme::half};
    }
    throw ValidationError("unknown mode '" + mode + "'");
}

void fill_record(RunRecord& rec, const Solution& sol) {
    rec.status = "ok";
    rec.E_total = sol.report.E_total;
    rec.E_wpt = sol.report.E_wpt;
    rec.E_cool = sol.report.E_cool;
    rec.E_comp = 0.0;
    for (double e : sol.report.E_comp) rec.E_comp += e;
    rec.users = sol.allocation.users;
    rec.converged = sol.converged;
    rec.iterations = sol.iterations;
}

}  // namespace

std::vector<RunRecord> run(const Scenario& scenario, const std::string& mode,
                           const RunOptions& opts) {
    const auto schemes = mode_schemes(mode);
    std::vector<double> points = scenario.sweep_values;
    const bool has_sweep = !scenario.sweep_param.empty();
    if (!has_sweep) points = {0.0};

    struct Task {
        double value;
        Scheme scheme;
    };
    std::vector<Task> tasks;
    for (double v : points) {
        for (Scheme s : schemes) tasks.push_back({v, s});
    }
    std::vector<RunRecord> records(tasks.size());

    auto run_one = [&](std::size_t ti) {
        RunRecord& rec = records[ti];
        rec.sweep_param = scenario.sweep_param;
        rec.sweep_value = tasks[ti].value;
        rec.scheme = scheme_name(tasks[ti].scheme);
        Scenario pt = scenario;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            if (has_sweep) apply_sweep(pt, tasks[ti].value);
            const auto users = pt.materialize_users();
            JointOptions jopts = pt.solver;
            if (opts.trace_out) {
                (*opts.trace_out) << "# record " << ti << ' ' << rec.scheme
                                  << '\n';
                jopts.dual.trace_out = opts.trace_out;
            }
            Solution sol;
            switch (tasks[ti].scheme) {
                case Scheme::proposed:
                    sol = run_joint(pt.config, users, jopts);
                    break;
                case Scheme::oracle:
                    sol = grid_search(pt.config, users, pt.oracle);
                    break;
                default:
                    sol = run_baseline(pt.config, users, tasks[ti].scheme, jopts);
            }
            fill_record(rec, sol);
        } catch (const Infeasible& e) {
            rec.status = "infeasible";
            rec.message = e.what();
        } catch (const std::exception& e) {
            rec.status = "failed";
            rec.message = e.what();
        }
        rec.wall_ms = std::chrono::duration<double, std::milli>(
                          std::chrono::steady_clock::now() - t0)
                          .count();
    };

    const std::size_t jobs =
        opts.trace_out ? 1 : std::max<std::size_t>(opts.jobs, 1);
    if (jobs <= 1 || tasks.size() <= 1) {
        for (std::size_t i = 0; i < tasks.size(); ++i) run_one(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        const std::size_t n = std::min(jobs, tasks.size());
        pool.reserve(n);
        for (std::size_t t = 0; t < n; ++t) {
            pool.emplace_back([&] {
                for (std::size_t i = next.fetch_add(1); i < tasks.size();
                     i = next.fetch_add(1)) {
                    run_one(i);
                }
            });
        }
        for (auto& th : pool) th.join();
    }
    return records;
}

void emit_csv(const std::vector<RunRecord>& results, std::ostream& out) {
    std::size_t max_users = 0;
    for (const auto& r : results) max_users = std::max(max_users, r.users.size());

    out << "sweep_param,sweep_value,scheme,status,E_total_J,E_wpt_J,E_comp_J,"
           "E_cool_J";
    for (std::size_t i = 1; i <= max_users; ++i) {
        out << ",a_" << i << ",f_u_Hz_" << i << ",f_s_Hz_" << i << ",T_off_s_"
            << i << ",P_b_W_" << i;
    }
    out << ",converged,iterations\n";

    for (const auto& r : results) {
        out << r.sweep_param << ',';
        if (!r.sweep_param.empty()) out << fmt(r.sweep_value);
        out << ',' << r.scheme << ',' << r.status << ',';
        if (r.status == "ok") {
            out << fmt(r.E_total) << ',' << fmt(r.E_wpt) << ',' << fmt(r.E_comp)
                << ',' << fmt(r.E_cool);
        } else {
            out << ",,,";
        }
        for (std::size_t i = 0; i < max_users; ++i) {
            if (i < r.users.size() && r.status == "ok") {
                const auto& u = r.users[i];
                out << ',' << fmt(u.a) << ',' << fmt(u.f_u) << ',' << fmt(u.f_s)
                    << ',' << fmt(u.T_off) << ',' << fmt(u.P_b);
            } else {
                out << ",,,,,";
            }
        }
        out << ',' << (r.converged ? 1 : 0) << ',' << r.iterations << '\n';
    }
}

void emit_json(const std::vector<RunRecord>& results, std::ostream& out) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& r : results) {
        nlohmann::ordered_json j;
        j["sweep_param"] = r.sweep_param;
        j["sweep_value"] = r.sweep_value;
        j["scheme"] = r.scheme;
        j["status"] = r.status;
        j["message"] = r.message;
        j["E_total_J"] = r.E_total;
        j["E_wpt_J"] = r.E_wpt;
        j["E_comp_J"] = r.E_comp;
        j["E_cool_J"] = r.E_cool;
        nlohmann::ordered_json users = nlohmann::ordered_json::array();
        for (const auto& u : r.users) {
            users.push_back({{"a", u.a},
                             {"f_u_Hz", u.f_u},
                             {"f_s_Hz", u.f_s},
                             {"T_off_s", u.T_off},
                             {"P_b_W", u.P_b}});
        }
        j["users"] = users;
        j["converged"] = r.converged;
        j["iterations"] = r.iterations;
        arr.push_back(j);
    }
    out << arr.dump(2) << '\n';
}

void emit(const std::vector<RunRecord>& results, const std::string& format,
          const std::string& path) {
    if (results.empty()) throw ValidationError("emit: empty result set");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open output file '" + path + "'");
    if (format == "csv") emit_csv(results, out);
    else if (format == "json") emit_json(results, out);
    else throw ValidationError("unknown format '" + format + "'");
    if (!out) throw IoError("write failed for '" + path + "'");
}

std::vector<RunRecord> load_results_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open results file '" + path + "'");
    nlohmann::json arr;
    try {
        in >> arr;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("bad results JSON: ") + e.what());
    }
    std::vector<RunRecord> out;
    for (const auto& j : arr) {
        RunRecord r;
        r.sweep_param = j.at("sweep_param").get<std::string>();
        r.sweep_value = j.at("sweep_value").get<double>();
        r.scheme = j.at("scheme").get<std::string>();
        r.status = j.at("status").get<std::string>();
        r.message = j.at("message").get<std::string>();
        r.E_total = j.at("E_total_J").get<double>();
        r.E_wpt = j.at("E_wpt_J").get<double>();
        r.E_comp = j.at("E_comp_J").get<double>();
        r.E_cool = j.at("E_cool_J").get<double>();
        for (const auto& ju : j.at("users")) {
            UserAllocation u;
            u.a = ju.at("a").get<double>();
            u.f_u = ju.at("f_u_Hz").get<double>();
            u.f_s = ju.at("f_s_Hz").get<double>();
            u.T_off = ju.at("T_off_s").get<double>();
            u.P_b = ju.at("P_b_W").get<double>();
            r.users.push_back(u);
        }
        r.converged = j.at("converged").get<bool>();
        r.iterations = j.at("iterations").get<std::size_t>();
        out.push_back(std::move(r));
    }
    return out;
}

}  // namespace wptmec
