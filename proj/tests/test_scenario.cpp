#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <doctest.h>

#include "wptmec/scenario.hpp"

using namespace wptmec;

namespace {

Scenario parse_str(const std::string& text) {
    std::istringstream in(text);
    return parse_scenario(in, "<test>");
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

struct TempFile {
    std::string path;
    explicit TempFile(const std::string& name) : path("/tmp/wptmec_test_" + name) {}
    ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("empty scenario carries the defaults") {
    const Scenario sc = parse_str("");
    CHECK(sc.config.T == 0.2);
    CHECK(sc.config.I == 5);
    CHECK(sc.config.phi == 0.4);
    CHECK(sc.user_template.R == 1.5e3);
    CHECK(sc.sweep_param.empty());
    CHECK(sc.materialize_users().size() == 5);
}

TEST_CASE("scenario parsing") {
    SUBCASE("values, comments, units") {
        const Scenario sc = parse_str(
            "# comment\n"
            "system.T = 0.3\n"
            "system.I = 2  # inline comment\n"
            "user.R = 2.5 Knats\n"
            "cooling.eps1 = 2e-3\n"
            "user2.g = 5e-7\n");
        CHECK(sc.config.T == 0.3);
        CHECK(sc.config.I == 2);
        CHECK(sc.user_template.R == 2.5e3);
        CHECK(sc.config.eps1 == 2e-3);
        const auto users = sc.materialize_users();
        CHECK(users[0].g == 1e-7);
        CHECK(users[1].g == 5e-7);
    }
    SUBCASE("invalid range rejected") {
        CHECK_THROWS_AS(parse_str("system.phi = 1.5\n"), ValidationError);
    }
    SUBCASE("parse diagnostics") {
        CHECK_THROWS_AS(parse_str("system.T 0.3\n"), ParseError);
        CHECK_THROWS_AS(parse_str("system.bogus = 1\n"), ParseError);
        CHECK_THROWS_AS(parse_str("noSection = 1\n"), ParseError);
        CHECK_THROWS_AS(parse_str("system.T = abc\n"), ParseError);
        CHECK_THROWS_AS(parse_str("sweep.values = 1,2\n"), ParseError);
        CHECK_THROWS_AS(parse_str("sweep.param = R\n"), ParseError);
        CHECK_THROWS_AS(parse_str("sweep.param = sigma2\n"), ParseError);
    }
    SUBCASE("override beyond I rejected") {
        CHECK_THROWS_AS(parse_str("system.I = 2\nuser3.R = 1 Knats\n")
                            .materialize_users(),
                        ValidationError);
    }
    SUBCASE("range sweep with unit") {
        const Scenario sc = parse_str(
            "sweep.param = R\n"
            "sweep.values = 0.5:0.5:4 Knats\n");
        REQUIRE(sc.sweep_values.size() == 8);
        CHECK(sc.sweep_values.front() == doctest::Approx(500.0));
        CHECK(sc.sweep_values.back() == doctest::Approx(4000.0));
    }
    SUBCASE("comma list sweep") {
        const Scenario sc = parse_str(
            "sweep.param = phi\n"
            "sweep.values = 0.3,0.5,0.7\n");
        CHECK(sc.sweep_values == std::vector<double>{0.3, 0.5, 0.7});
    }
    SUBCASE("sweep values must validate") {
        CHECK_THROWS_AS(parse_str("sweep.param = phi\nsweep.values = 0.5,1.5\n"),
                        ValidationError);
    }
}

TEST_CASE("run produces one record per point and scheme") {
    const Scenario sc = parse_str(
        "system.I = 1\n"
        "system.W = 1e6\n"
        "sweep.param = R\n"
        "sweep.values = 1:1:3 Knats\n");
    const auto recs = run(sc, "all");
    REQUIRE(recs.size() == 12);
    std::size_t idx = 0;
    for (double r : {1e3, 2e3, 3e3}) {
        for (const char* s : {"proposed", "local", "full", "half"}) {
            CHECK(recs[idx].sweep_value == r);
            CHECK(recs[idx].scheme == s);
            CHECK(recs[idx].status == "ok");
            CHECK(recs[idx].users.size() == 1);
            ++idx;
        }
    }
}

TEST_CASE("failing records are captured, not fatal") {
    const Scenario sc = parse_str(
        "system.phi = 0.7\n"
        "sweep.param = R\n"
        "sweep.values = 3900,4000\n");
    const auto recs = run(sc, "local");
    REQUIRE(recs.size() == 2);
    CHECK(recs[0].status == "ok");
    CHECK(recs[1].status == "infeasible");
    CHECK(!recs[1].message.empty());
}

TEST_CASE("oracle mode matches grid_search on a single point") {
    const Scenario sc = parse_str("system.I = 1\nsystem.W = 1e6\n");
    const auto recs = run(sc, "oracle");
    REQUIRE(recs.size() == 1);
    CHECK(recs[0].status == "ok");
    const auto direct =
        grid_search(sc.config, sc.materialize_users(), sc.oracle);
    CHECK(recs[0].E_total == direct.report.E_total);
}

TEST_CASE("parallel execution is deterministic") {
    const Scenario sc = parse_str(
        "sweep.param = R\n"
        "sweep.values = 0.5:0.5:3 Knats\n");
    const auto serial = run(sc, "all");
    RunOptions par;
    par.jobs = 4;
    const auto parallel = run(sc, "all", par);
    REQUIRE(serial.size() == parallel.size());
    for (std::size_t i = 0; i < serial.size(); ++i) {
        CHECK(serial[i].scheme == parallel[i].scheme);
        CHECK(serial[i].status == parallel[i].status);
        CHECK(serial[i].E_total == parallel[i].E_total);
    }
}

TEST_CASE("emit csv") {
    const Scenario sc = parse_str("system.I = 1\nsystem.W = 1e6\n");
    const auto recs = run(sc, "proposed");
    std::ostringstream out;
    emit_csv(recs, out);
    const std::string text = out.str();
    // header + 1 row
    CHECK(std::count(text.begin(), text.end(), '\n') == 2);
    CHECK(text.rfind("sweep_param,sweep_value,scheme,status,E_total_J,E_wpt_J,"
                     "E_comp_J,E_cool_J,a_1,f_u_Hz_1,f_s_Hz_1,T_off_s_1,P_b_W_1,"
                     "converged,iterations\n",
                     0) == 0);
    CHECK(text.find(",proposed,ok,") != std::string::npos);
}

TEST_CASE("emit determinism and json round trip") {
    const Scenario sc = parse_str(
        "system.I = 1\n"
        "system.W = 1e6\n"
        "sweep.param = R\n"
        "sweep.values = 1,2 Knats\n");
    const auto recs = run(sc, "all");

    TempFile f1("a.csv"), f2("b.csv"), j1("a.json");
    emit(recs, "csv", f1.path);
    emit(run(sc, "all"), "csv", f2.path);
    CHECK(slurp(f1.path) == slurp(f2.path));
    CHECK(!slurp(f1.path).empty());

    emit(recs, "json", j1.path);
    const auto back = load_results_json(j1.path);
    REQUIRE(back.size() == recs.size());
    for (std::size_t i = 0; i < recs.size(); ++i) {
        CHECK(back[i].sweep_param == recs[i].sweep_param);
        CHECK(back[i].sweep_value == recs[i].sweep_value);
        CHECK(back[i].scheme == recs[i].scheme);
        CHECK(back[i].status == recs[i].status);
        CHECK(back[i].E_total == recs[i].E_total);
        CHECK(back[i].iterations == recs[i].iterations);
        REQUIRE(back[i].users.size() == recs[i].users.size());
        for (std::size_t k = 0; k < recs[i].users.size(); ++k) {
            CHECK(back[i].users[k].a == recs[i].users[k].a);
            CHECK(back[i].users[k].P_b == recs[i].users[k].P_b);
        }
    }
}

TEST_CASE("emit rejects empty input and bad paths") {
    CHECK_THROWS_AS(emit({}, "csv", "/tmp/x.csv"), ValidationError);
    const Scenario sc = parse_str("system.I = 1\n");
    const auto recs = run(sc, "local");
    CHECK_THROWS_AS(emit(recs, "csv", "/no/such/dir/x.csv"), IoError);
    CHECK_THROWS_AS(emit(recs, "xml", "/tmp/x.xml"), ValidationError);
}

TEST_CASE("load_scenario io") {
    CHECK_THROWS_AS(load_scenario("/no/such/file.cfg"), IoError);
    TempFile f("scen.cfg");
    {
        std::ofstream out(f.path);
        out << "system.T = 0.25\n";
    }
    CHECK(load_scenario(f.path).config.T == 0.25);
}
