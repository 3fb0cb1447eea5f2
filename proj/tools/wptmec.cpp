#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "wptmec/scenario.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Cooling-aware wireless-powered MEC energy minimization"};
    app.require_subcommand(1);

    auto* run_cmd = app.add_subcommand("run", "Run a scenario file");
    std::string scenario_path, mode = "proposed", out_path, format = "csv";
    bool trace = false;
    std::size_t jobs = 1;
    run_cmd->add_option("scenario", scenario_path, "Scenario file")->required();
    run_cmd->add_option("--mode", mode, "proposed|local|full|half|oracle|all")
        ->check(CLI::IsMember({"proposed", "local", "full", "half", "oracle",
                               "all"}));
    run_cmd->add_option("--out", out_path, "Output file (default: stdout)");
    run_cmd->add_option("--format", format, "csv|json")
        ->check(CLI::IsMember({"csv", "json"}));
    run_cmd->add_flag("--trace", trace, "Emit dual-iteration traces");
    run_cmd->add_option("--jobs", jobs, "Concurrent sweep records")
        ->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    try {
        const wptmec::Scenario sc = wptmec::load_scenario(scenario_path);

        wptmec::RunOptions opts;
        opts.jobs = jobs;
        std::ofstream trace_file;
        if (trace) {
            const std::string tp =
                (out_path.empty() ? scenario_path : out_path) + ".trace";
            trace_file.open(tp);
            if (!trace_file) {
                throw wptmec::IoError("cannot open trace file '" + tp + "'");
            }
            opts.trace_out = &trace_file;
        }

        const auto records = wptmec::run(sc, mode, opts);

        if (out_path.empty()) {
            if (format == "csv") wptmec::emit_csv(records, std::cout);
            else wptmec::emit_json(records, std::cout);
        } else {
            wptmec::emit(records, format, out_path);
        }

        for (const auto& r : records) {
            if (r.status != "ok") {
                std::cerr << "record " << r.scheme;
                if (!r.sweep_param.empty()) {
                    std::cerr << " @ " << r.sweep_param << "=" << r.sweep_value;
                }
                std::cerr << ": " << r.status << " (" << r.message << ")\n";
            }
        }
        for (const auto& r : records) {
            if (r.status != "ok") return 2;
        }
        return 0;
    } catch (const wptmec::ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const wptmec::IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
