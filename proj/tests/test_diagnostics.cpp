#include <doctest.h>

#include "bj/arima.hpp"
#include "bj/diagnostics.hpp"
#include "bj/stat_tests.hpp"

#include <cmath>
#include <random>

using namespace bj;

TEST_CASE("residual metrics") {
    const std::vector<double> pair{1.0, -1.0};
    const auto m = residual_metrics(pair);
    CHECK(m.me == 0.0);
    CHECK(m.rmse == 1.0);
    CHECK(m.mae == 1.0);

    const std::vector<double> zeros(5, 0.0);
    const auto z = residual_metrics(zeros);
    CHECK(z.me == 0.0);
    CHECK(z.rmse == 0.0);
    CHECK(z.mae == 0.0);
    CHECK(z.acf1_degenerate);
    CHECK(z.residual_acf1 == 0.0);

    CHECK_THROWS_AS((void)residual_metrics({}), Error);

    std::mt19937_64 rng(99);
    std::normal_distribution<double> normal(0.3, 2.0);
    int violations = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        std::vector<double> r(2 + trial % 50);
        for (double& v : r) v = normal(rng);
        const auto f = residual_metrics(r);
        if (f.rmse < f.mae || f.rmse < std::abs(f.me) || f.mae < 0.0) ++violations;
        CHECK(std::abs(f.residual_acf1) <= 1.0 + 1e-12);
    }
    CHECK(violations == 0);
}

TEST_CASE("histogram examples") {
    const std::vector<double> three{-1.0, 0.0, 1.0};
    const auto h = histogram(three, 2);
    CHECK(h.bin_edges == std::vector<double>{-1.0, 0.0, 1.0});
    CHECK(h.counts == std::vector<std::size_t>{1, 2});
    CHECK(h.mean_marker == 0.0);

    const std::vector<double> same(7, 2.5);
    const auto d = histogram(same, 3);
    CHECK(d.bin_edges.front() == 2.0);
    CHECK(d.bin_edges.back() == 3.0);
    std::size_t nonzero = 0;
    for (auto c : d.counts) nonzero += c > 0;
    CHECK(nonzero == 1);

    CHECK_THROWS_AS((void)histogram(three, 0), Error);
    CHECK_THROWS_AS((void)histogram({}, 3), Error);
}

TEST_CASE("histogram of normal draws matches bin masses") {
    NormalGenerator gen(2024);
    std::vector<double> x(10000);
    for (double& v : x) v = gen();
    const auto h = histogram(x, 20);
    std::size_t total = 0;
    for (std::size_t b = 0; b < 20; ++b) {
        total += h.counts[b];
        CHECK(h.bin_edges[b] < h.bin_edges[b + 1]);
        const double expected = norm_cdf(h.bin_edges[b + 1]) - norm_cdf(h.bin_edges[b]);
        CHECK(std::abs(h.counts[b] / 10000.0 - expected) <= 0.02);
    }
    CHECK(total == x.size());
}

TEST_CASE("generator follows the documented algorithm") {
    // std::mt19937_64's 10000th output for the default seed is fixed by the standard.
    std::mt19937_64 engine;
    engine.discard(9999);
    CHECK(engine() == 9981545732273789042ULL);

    NormalGenerator gen(7);
    std::mt19937_64 ref(7);
    const double u = gen.uniform();
    CHECK(u == static_cast<double>(ref() >> 11) * 0x1.0p-53);

    // Polar method by hand: both variates of an accepted pair, first one first.
    NormalGenerator a(123);
    std::mt19937_64 e(123);
    auto unif = [&] { return static_cast<double>(e() >> 11) * 0x1.0p-53; };
    double v1 = 0.0, v2 = 0.0, s = 0.0;
    do {
        v1 = 2.0 * unif() - 1.0;
        v2 = 2.0 * unif() - 1.0;
        s = v1 * v1 + v2 * v2;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    CHECK(a() == v1 * f);
    CHECK(a() == v2 * f);
}

TEST_CASE("simulator") {
    const std::vector<double> phi{0.5};
    const auto a = simulate_arima({1, 0, 0}, phi, {}, 3.0, 1.0, 100, 55);
    const auto b = simulate_arima({1, 0, 0}, phi, {}, 3.0, 1.0, 100, 55);
    CHECK(std::vector<double>(a.values().begin(), a.values().end()) ==
          std::vector<double>(b.values().begin(), b.values().end()));
    const auto c = simulate_arima({1, 0, 0}, phi, {}, 3.0, 1.0, 100, 56);
    CHECK(a[0] != c[0]);

    const auto still = simulate_arima({1, 0, 0}, phi, {}, 7.0, 0.0, 50, 1);
    for (double v : still.values()) CHECK(v == 7.0);

    const auto wn = simulate_arima({0, 0, 0}, {}, {}, 0.0, 2.0, 10000, 3);
    const double m = mean(wn.values());
    double ss = 0.0;
    for (double v : wn.values()) ss += (v - m) * (v - m);
    const double var = ss / (wn.size() - 1);
    CHECK(var >= 3.8);
    CHECK(var <= 4.2);

    const auto walk = simulate_arima({0, 1, 0}, {}, {}, 0.0, 1.0, 10, 4);
    CHECK(walk.size() == 10);

    const std::vector<double> explosive{1.1};
    CHECK_THROWS_AS((void)simulate_arima({1, 0, 0}, explosive, {}, 0.0, 1.0, 10, 1), Error);
    CHECK_THROWS_AS((void)simulate_arima({2, 0, 0}, phi, {}, 0.0, 1.0, 10, 1), Error);
    CHECK_THROWS_AS((void)simulate_arima({0, 0, 0}, {}, {}, 0.0, -1.0, 10, 1), Error);
    CHECK_THROWS_AS((void)simulate_arima({0, 0, 0}, {}, {}, 0.0, 1.0, 0, 1), Error);
}

TEST_CASE("well-specified fits leave uncorrelated residuals") {
    const std::vector<double> phi{0.6};
    int good = 0;
    const int seeds = 50;
    for (int seed = 0; seed < seeds; ++seed) {
        const auto s = simulate_arima({1, 0, 0}, phi, {}, 0.0, 1.0, 300, 12000 + seed);
        const auto m = fit(s, {1, 0, 0});
        const auto metrics = residual_metrics(m.residuals);
        if (std::abs(metrics.residual_acf1) <= 2.0 / std::sqrt(m.residuals.size())) ++good;
    }
    CHECK(good >= 0.9 * seeds);
}
