#include <doctest.h>

#include "bj/diagnostics.hpp"
#include "bj/error.hpp"
#include "bj/series.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <optional>
#include <random>

using namespace bj;

namespace {

Date ymd(int y, unsigned m, unsigned d) {
    return Date{std::chrono::year{y}, std::chrono::month{m}, std::chrono::day{d}};
}

void check_kind(ErrorKind kind, auto&& call) {
    try {
        call();
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.kind() == kind);
    }
}

}  // namespace

TEST_CASE("difference examples") {
    const std::vector<double> x{1, 2, 4, 7};
    CHECK(difference(x, 1) == std::vector<double>{1, 2, 3});
    CHECK(difference(x, 0) == x);
    CHECK(difference(x, 2) == std::vector<double>{1, 1});
    check_kind(ErrorKind::InsufficientData, [&] { (void)difference(x, 4); });
}

TEST_CASE("difference keeps trailing dates") {
    const auto s = TimeSeries::from_values({1, 2, 4, 7}, "s");
    const auto d = difference(s, 1);
    REQUIRE(d.size() == 3);
    CHECK(d.dates()[0] == ymd(2020, 1, 2));
    CHECK(d.name() == "s");
}

TEST_CASE("integrate examples") {
    const std::vector<double> diffs{1, 2, 3};
    const std::vector<double> pivot{1};
    CHECK(integrate(diffs, 1, pivot) == std::vector<double>{2, 4, 7});
    check_kind(ErrorKind::DimensionMismatch, [&] { (void)integrate(diffs, 2, pivot); });

    const std::vector<double> x{5, 3, 8, 1};
    const auto d2 = difference(x, 2);
    const auto back = integrate(d2, 2, std::span<const double>(x).first(2));
    CHECK(back == std::vector<double>{8, 1});
}

TEST_CASE("round trip for d in 0..3 over random series") {
    std::mt19937_64 rng(17);
    std::normal_distribution<double> normal(0.0, 10.0);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<double> x(40);
        for (double& v : x) v = normal(rng);
        for (std::size_t d = 0; d <= 3; ++d) {
            const auto dx = difference(x, d);
            CHECK(dx.size() == x.size() - d);
            const auto back = integrate(dx, d, std::span<const double>(x).first(d));
            for (std::size_t i = 0; i < back.size(); ++i) {
                CHECK(std::abs(back[i] - x[i + d]) < 1e-9);
            }
        }
    }
}

TEST_CASE("monthly mean imputation") {
    RawSeries april{{ymd(2020, 4, 1), ymd(2020, 4, 2), ymd(2020, 4, 3)}, {2.0, std::nullopt, 4.0},
                    "A"};
    const auto filled = impute_monthly_mean(april);
    CHECK(std::vector<double>(filled.values().begin(), filled.values().end()) ==
          std::vector<double>{2.0, 3.0, 4.0});

    RawSeries complete{{ymd(2020, 4, 1), ymd(2020, 4, 2)}, {1.5, 2.5}, "B"};
    const auto same = impute_monthly_mean(complete);
    CHECK(same[0] == 1.5);
    CHECK(same[1] == 2.5);

    RawSeries two_months{
        {ymd(2020, 4, 29), ymd(2020, 4, 30), ymd(2020, 5, 1), ymd(2020, 5, 2), ymd(2020, 5, 3)},
        {std::nullopt, 6.0, std::nullopt, 2.0, 4.0},
        "C"};
    const auto both = impute_monthly_mean(two_months);
    CHECK(std::vector<double>(both.values().begin(), both.values().end()) ==
          std::vector<double>{6.0, 6.0, 3.0, 2.0, 4.0});

    RawSeries again{{both.dates().begin(), both.dates().end()}, {}, "C"};
    for (double v : both.values()) again.values.emplace_back(v);
    const auto twice = impute_monthly_mean(again);
    CHECK(std::vector<double>(twice.values().begin(), twice.values().end()) ==
          std::vector<double>(both.values().begin(), both.values().end()));
}

TEST_CASE("imputation fails on an empty month and names it") {
    RawSeries raw{{ymd(2020, 5, 31), ymd(2020, 6, 1), ymd(2020, 6, 2)},
                  {1.0, std::nullopt, std::nullopt},
                  "Spain"};
    try {
        (void)impute_monthly_mean(raw);
        FAIL("expected ImputationImpossible");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::ImputationImpossible);
        CHECK(std::string(e.what()).find("2020-06") != std::string::npos);
    }
}

TEST_CASE("acf examples and bounds") {
    const std::vector<double> alt{1, -1, 1, -1};
    const auto r = acf(alt, 1);
    CHECK(r.coefficients[0] == 1.0);
    CHECK(r.coefficients[1] == doctest::Approx(-0.75).epsilon(1e-15));
    CHECK(r.confidence_bound == doctest::Approx(1.96 / 2.0));

    const std::vector<double> flat{3, 3, 3};
    check_kind(ErrorKind::DegenerateSeries, [&] { (void)acf(flat, 1); });
    check_kind(ErrorKind::InsufficientData, [&] { (void)acf(alt, 4); });

    std::mt19937_64 rng(5);
    std::normal_distribution<double> normal;
    std::vector<double> x(60);
    for (double& v : x) v = normal(rng);
    for (double c : acf(x, 30).coefficients) CHECK(std::abs(c) <= 1.0 + 1e-9);
}

TEST_CASE("acf of white noise stays inside the band") {
    int good_seeds = 0;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const auto wn = simulate_arima({0, 0, 0}, {}, {}, 0.0, 1.0, 400, seed);
        const auto r = acf(wn, 20);
        int inside = 0;
        for (std::size_t k = 1; k <= 20; ++k) {
            if (std::abs(r.coefficients[k]) <= 1.96 / 20.0) ++inside;
        }
        if (inside >= 17) ++good_seeds;
    }
    CHECK(good_seeds >= 45);
}

TEST_CASE("pacf matches Yule-Walker solutions") {
    std::mt19937_64 rng(11);
    std::normal_distribution<double> normal;
    std::vector<double> x(120);
    for (double& v : x) v = normal(rng);
    const std::size_t m = 6;
    const auto r = acf(x, m);
    const auto p = pacf(x, m);
    REQUIRE(p.lags.size() == m);
    CHECK(p.lags.front() == 1);
    CHECK(std::abs(p.coefficients[0] - r.coefficients[1]) < 1e-12);
    for (std::size_t k = 1; k <= m; ++k) {
        Eigen::MatrixXd R(k, k);
        Eigen::VectorXd rhs(k);
        for (std::size_t i = 0; i < k; ++i) {
            rhs(i) = r.coefficients[i + 1];
            for (std::size_t j = 0; j < k; ++j) {
                R(i, j) = r.coefficients[i > j ? i - j : j - i];
            }
        }
        const Eigen::VectorXd phi = R.fullPivLu().solve(rhs);
        CHECK(std::abs(p.coefficients[k - 1] - phi(k - 1)) < 1e-10);
    }
}

TEST_CASE("pacf of simulated autoregressions") {
    const std::vector<double> phi1{0.7};
    const auto ar1 = simulate_arima({1, 0, 0}, phi1, {}, 0.0, 1.0, 1000, 42);
    const auto p1 = pacf(ar1, 10);
    CHECK(std::abs(p1.coefficients[0] - 0.7) < 0.1);
    int inside = 0;
    for (std::size_t k = 1; k < 10; ++k) {
        if (std::abs(p1.coefficients[k]) <= 2.0 / std::sqrt(1000.0)) ++inside;
    }
    CHECK(inside >= 8);

    const std::vector<double> phi2{0.5, 0.3};
    const auto ar2 = simulate_arima({2, 0, 0}, phi2, {}, 0.0, 1.0, 2000, 43);
    CHECK(std::abs(pacf(ar2, 5).coefficients[1] - 0.3) < 0.1);

    const std::vector<double> short_series{1, 2, 3};
    check_kind(ErrorKind::InsufficientData, [&] { (void)pacf(short_series, 2); });
}

TEST_CASE("dates") {
    CHECK(parse_date("2020-09-12") == ymd(2020, 9, 12));
    CHECK(format_date(ymd(2020, 4, 1)) == "2020-04-01");
    CHECK(add_days(ymd(2020, 2, 28), 2) == ymd(2020, 3, 1));
    check_kind(ErrorKind::SchemaError, [] { (void)parse_date("2020-02-30"); });
    check_kind(ErrorKind::SchemaError, [] { (void)parse_date("12/09/2020"); });
    check_kind(ErrorKind::SchemaError, [] {
        (void)TimeSeries({ymd(2020, 1, 2), ymd(2020, 1, 1)}, {1.0, 2.0});
    });
}
