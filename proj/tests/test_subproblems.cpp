#include <cmath>
#include <random>

#include <doctest.h>

#include "wptmec/model.hpp"
#include "wptmec/subproblems.hpp"

using namespace wptmec;

namespace {
SystemConfig defaults() { return {}; }  // w = 1e6
UserParams user() { return {}; }
}  // namespace

TEST_CASE("optimal_offload_time cases") {
    SystemConfig cfg = defaults();
    UserParams u = user();

    CHECK(optimal_offload_time(0.0, 1.0, 0.0, cfg, u) == 0.0);
    CHECK(optimal_offload_time(5.0, 1.0, 1.0, cfg, u) == 0.0);

    // mu = sigma^2 lambda / g makes the W0 argument 0, so the rate equals w.
    const double lam = 2.0;
    const double mu0 = cfg.sigma2 * lam / u.g;
    CHECK(optimal_offload_time(lam, mu0, 0.0, cfg, u) ==
          doctest::Approx(1.5e-3).epsilon(1e-12));

    // argument of W0 equal to 1: rate = w (W0(1) + 1)
    const double mu1 = cfg.sigma2 * std::exp(1.0) * (1.0 + std::exp(-1.0)) / u.g;
    CHECK(optimal_offload_time(1.0, mu1, 0.0, cfg, u) ==
          doctest::Approx(1500.0 / (1e6 * 1.5671432904097838)).epsilon(1e-10));
    CHECK(optimal_offload_time(1.0, mu1, 0.0, cfg, u) ==
          doctest::Approx(9.57158e-4).epsilon(1e-5));

    // mu = 0 with lambda > 0: no finite minimizer
    CHECK(std::isinf(optimal_offload_time(1.0, 0.0, 0.0, cfg, u)));
}

TEST_CASE("optimal_offload_time satisfies its first-order condition") {
    SystemConfig cfg = defaults();
    UserParams u = user();
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> ul(-2.0, 6.0), um(-4.0, 2.0),
        ua(0.0, 0.95);
    const double w = cfg.per_user_bandwidth();
    for (int i = 0; i < 300; ++i) {
        const double lam = std::pow(10.0, ul(rng));
        const double mu = std::pow(10.0, um(rng)) * cfg.sigma2 * lam / u.g;
        const double a = ua(rng);
        const double t = optimal_offload_time(lam, mu, a, cfg, u);
        if (!std::isfinite(t) || t <= 0.0) continue;
        const double x = (1.0 - a) * u.R / (t * w);
        // d/dT [lam (s2/g)(e^{b/(Tw)}-1) T + mu T]
        const double d =
            lam * cfg.sigma2 / u.g * (std::expm1(x) - x * std::exp(x)) + mu;
        CHECK(std::fabs(d) <= 1e-8 * mu);
    }
}

TEST_CASE("optimal_offload_time monotonicity in mu and lambda") {
    SystemConfig cfg = defaults();
    UserParams u = user();
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> ul(-1.0, 4.0), um(-8.0, -2.0);
    for (int i = 0; i < 300; ++i) {
        const double lam = std::pow(10.0, ul(rng));
        double m1 = std::pow(10.0, um(rng)) * cfg.sigma2 * lam / u.g;
        double m2 = std::pow(10.0, um(rng)) * cfg.sigma2 * lam / u.g;
        if (m1 > m2) std::swap(m1, m2);
        const double t1 = optimal_offload_time(lam, m1, 0.3, cfg, u);
        const double t2 = optimal_offload_time(lam, m2, 0.3, cfg, u);
        CHECK(t1 >= t2 * (1.0 - 1e-12));  // nonincreasing in mu

        double l1 = std::pow(10.0, ul(rng)), l2 = std::pow(10.0, ul(rng));
        if (l1 > l2) std::swap(l1, l2);
        const double mu = 1e-4;
        const double ta = optimal_offload_time(l1, mu, 0.3, cfg, u);
        const double tb = optimal_offload_time(l2, mu, 0.3, cfg, u);
        if (std::isfinite(ta) && std::isfinite(tb)) {
            CHECK(tb >= ta * (1.0 - 1e-12));  // nondecreasing in lambda
        }
    }
}

TEST_CASE("optimal_wpt_power case split") {
    SystemConfig cfg = defaults();
    UserParams u = user();
    const double lam_tie = 1.0 / (u.theta * u.H);  // c = 0 at pi = 0

    CHECK(optimal_wpt_power(0.5 * lam_tie, 0.0, 1.0, 0.0, cfg, u) == 0.0);
    CHECK(optimal_wpt_power(2.0 * lam_tie, 0.0, 1.0, 0.0, cfg, u) == cfg.P_b_max);
    CHECK(optimal_wpt_power(lam_tie, 0.0, 1.0, 0.0, cfg, u) ==
          doctest::Approx(0.09765625).epsilon(1e-12));
    // pi > 0 shifts the tie point: c = phiT(1 - lam theta H) + pi = 0
    const double pi = 0.01;
    const double lam2 = (cfg.phi * cfg.T + pi) / (cfg.phi * cfg.T * u.theta * u.H);
    CHECK(optimal_wpt_power(lam2, pi, 1.0, 0.0, cfg, u) ==
          doctest::Approx(0.09765625).epsilon(1e-9));
}

TEST_CASE("tilde branch meets energy causality exactly") {
    SystemConfig cfg = defaults();
    UserParams u = user();
    std::mt19937 rng(9);
    std::uniform_real_distribution<double> ua(0.0, 1.0), ut(1e-3, 0.1);
    for (int i = 0; i < 200; ++i) {
        const double a = ua(rng);
        const double t = ut(rng);
        const double p = causality_tight_power(a, t, cfg, u);
        const double e_h = harvested_energy(p, cfg, u);
        const double f_u = a * u.R * u.B / cfg.latency_window();
        const double e_loc = local_cost(a, f_u, cfg, u).second;
        const double e_off =
            a < 1.0 ? offload_tx_power(a, t, cfg, u) * t : 0.0;
        CHECK(std::fabs(e_loc + e_off - e_h) <= 1e-10 * e_h);
    }
}

TEST_CASE("solve_edge_frequencies") {
    SystemConfig cfg = defaults();
    cfg.I = 1;
    UserParams u = user();

    SUBCASE("all users local") {
        cfg.I = 2;
        DualVars w(2);
        w.mu = {1.0, 2.0};
        const auto f = solve_edge_frequencies(w, {1.0, 1.0}, cfg, {u, u});
        CHECK(f == std::vector<double>{0.0, 0.0});
    }
    SUBCASE("single-user stationarity without cooling") {
        cfg.eps1 = cfg.eps2 = 0.0;
        DualVars w(1);
        w.mu = {1.0};
        const auto f = solve_edge_frequencies(w, {0.0}, cfg, {u});
        CHECK(f[0] == doctest::Approx(std::cbrt(5e25)).epsilon(1e-5));
        CHECK(f[0] == doctest::Approx(3.684e8).epsilon(1e-3));
    }
    SUBCASE("mu = 0 gives the f = 0 boundary") {
        cfg.eps1 = cfg.eps2 = 0.0;
        DualVars w(1);
        const auto f = solve_edge_frequencies(w, {0.0}, cfg, {u});
        CHECK(f[0] == 0.0);
    }
    SUBCASE("objective no worse than a fine grid scan, 2 users with cooling") {
        cfg.I = 2;
        UserParams u2 = user();
        u2.R = 3e3;
        DualVars w(2);
        w.mu = {2e-3, 8e-3};
        w.nu = 1e-12;
        const std::vector<double> a{0.2, 0.6};
        const std::vector<UserParams> users{u, u2};
        const auto f = solve_edge_frequencies(w, a, cfg, users);
        const double obj = edge_frequency_objective(f, w, a, cfg, users);
        double best = obj;
        for (int i = 1; i <= 400; ++i) {
            for (int j = 1; j <= 400; ++j) {
                const double cand = edge_frequency_objective(
                    {cfg.f_s_max * i / 400.0, cfg.f_s_max * j / 400.0}, w, a, cfg,
                    users);
                best = std::fmin(best, cand);
            }
        }
        CHECK(obj <= best * (1.0 + 1e-6));
    }
}
