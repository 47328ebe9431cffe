#include <doctest.h>

#include "bj/diagnostics.hpp"
#include "bj/error.hpp"
#include "bj/stat_tests.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

using namespace bj;

namespace {

void check_kind(ErrorKind kind, auto&& call) {
    try {
        call();
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.kind() == kind);
    }
}

// Independent closed forms for odd and even dof.
double chi2_sf_dof1(double x) { return std::erfc(std::sqrt(x / 2.0)); }
double chi2_sf_dof3(double x) {
    return chi2_sf_dof1(x) + std::sqrt(2.0 * x / std::numbers::pi) * std::exp(-x / 2.0);
}

}  // namespace

TEST_CASE("chi-square survival function") {
    for (std::size_t dof = 1; dof <= 30; ++dof) CHECK(chi2_sf(0.0, dof) == 1.0);
    CHECK(std::abs(chi2_sf(2.0, 2) - std::exp(-1.0)) < 1e-12);
    CHECK(chi2_sf(3.8415, 1) == doctest::Approx(0.05).epsilon(1e-4));
    for (double x : {0.01, 0.5, 1.0, 2.5, 7.0, 15.0, 40.0}) {
        CHECK(std::abs(chi2_sf(x, 1) - chi2_sf_dof1(x)) < 1e-12);
        CHECK(std::abs(chi2_sf(x, 3) - chi2_sf_dof3(x)) < 1e-12);
        CHECK(std::abs(chi2_sf(x, 2) - std::exp(-x / 2.0)) == 0.0);
    }
    double prev = 1.0;
    for (double x = 0.1; x < 60.0; x += 0.1) {
        const double v = chi2_sf(x, 10);
        CHECK(v < prev);
        prev = v;
    }
    check_kind(ErrorKind::InvalidDof, [] { (void)chi2_sf(1.0, 0); });
}

TEST_CASE("normal quantile") {
    CHECK(norm_quantile(0.5) == 0.0);
    CHECK(std::abs(norm_quantile(0.9) - 1.2815515655446004) < 1e-12);
    CHECK(std::abs(norm_quantile(0.975) - 1.959963984540054) < 1e-12);
    for (int i = 1; i <= 99; ++i) {
        const double p = i / 100.0;
        CHECK(std::abs(norm_cdf(norm_quantile(p)) - p) <= 1e-8);
        CHECK(std::abs(norm_quantile(p) + norm_quantile(1.0 - p)) <= 1e-9);
    }
    CHECK(std::abs(norm_cdf(norm_quantile(1e-12)) - 1e-12) < 1e-20);
    check_kind(ErrorKind::DomainError, [] { (void)norm_quantile(0.0); });
    check_kind(ErrorKind::DomainError, [] { (void)norm_quantile(1.0); });
}

TEST_CASE("Ljung-Box") {
    const std::vector<double> alt{1, -1, 1, -1};
    const auto lb = ljung_box(alt, 1, 0);
    CHECK(lb.statistic == doctest::Approx(4.5).epsilon(1e-14));
    CHECK(lb.dof == 1);
    CHECK(lb.p_value == doctest::Approx(chi2_sf_dof1(4.5)));
    check_kind(ErrorKind::InvalidDof, [&] { (void)ljung_box(alt, 2, 2); });

    const auto wn = simulate_arima({0, 0, 0}, {}, {}, 0.0, 1.0, 200, 9);
    double prev = 0.0;
    for (std::size_t lags = 1; lags <= 20; ++lags) {
        const double q = ljung_box(wn.values(), lags, 0).statistic;
        CHECK(q >= prev);
        prev = q;
    }
}

TEST_CASE("ADF basics") {
    CHECK(default_adf_lag(200) == 5);
    CHECK(default_adf_lag(28) == 3);

    const auto walk = simulate_arima({0, 1, 0}, {}, {}, 0.0, 1.0, 200, 1);
    const auto r = adf_test(walk);
    CHECK(r.lag_order == default_adf_lag(200));
    CHECK(r.n_used == 200 - r.lag_order - 1);
    CHECK(r.p_value >= 0.01);
    CHECK(r.p_value <= 0.99);

    // Affine invariance of the t statistic.
    std::vector<double> scaled(walk.values().begin(), walk.values().end());
    for (double& v : scaled) v = 3.5 * v - 12.0;
    const auto s = adf_test(scaled);
    CHECK(std::abs(s.statistic - r.statistic) < 1e-8);
    CHECK(std::abs(s.p_value - r.p_value) < 1e-8);

    const std::vector<double> phi{0.5};
    const auto ar = simulate_arima({1, 0, 0}, phi, {}, 0.0, 1.0, 200, 2);
    CHECK(adf_test(ar).p_value < 0.05);

    std::vector<double> tiny(8, 1.0);
    check_kind(ErrorKind::InsufficientData, [&] { (void)adf_test(tiny); });
    std::vector<double> constant(60, 2.0);
    check_kind(ErrorKind::NumericalDegeneracy, [&] { (void)adf_test(constant, 1); });
}

TEST_CASE("ADF table lookup") {
    bool clamped = true;
    CHECK(adf_p_value(-2.86, 100000, &clamped) == doctest::Approx(0.05));
    CHECK_FALSE(clamped);
    CHECK(adf_p_value(-3.00, 25) == doctest::Approx(0.05));
    CHECK(adf_p_value(-2.59, 75) == doctest::Approx(0.10));
    // Midway between the 5% and 10% points at n = 100.
    CHECK(adf_p_value(-2.735, 100) == doctest::Approx(0.075));
    CHECK(adf_p_value(-9.0, 100, &clamped) == 0.01);
    CHECK(clamped);
    CHECK(adf_p_value(3.0, 100, &clamped) == 0.99);
    CHECK(clamped);
    double prev = 0.0;
    for (double t = -5.0; t < 2.0; t += 0.05) {
        const double p = adf_p_value(t, 150);
        CHECK(p >= prev);
        prev = p;
    }
}
