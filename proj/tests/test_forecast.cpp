#include <doctest.h>

#include "bj/arima.hpp"
#include "bj/diagnostics.hpp"
#include "bj/forecast.hpp"
#include "bj/stat_tests.hpp"

#include <cmath>

using namespace bj;

namespace {

ArimaModel model(ArimaOrder order, std::vector<double> phi, std::vector<double> theta,
                 std::optional<double> mean, double sigma2) {
    ArimaModel m;
    m.order = order;
    m.phi = std::move(phi);
    m.theta = std::move(theta);
    m.mean = mean;
    m.sigma2 = sigma2;
    return m;
}

}  // namespace

TEST_CASE("psi weights") {
    const auto ar = psi_weights(model({1, 0, 0}, {0.5}, {}, 0.0, 1.0), 50);
    for (std::size_t j = 0; j < 50; ++j) CHECK(std::abs(ar[j] - std::pow(0.5, j)) < 1e-12);

    const auto ma = psi_weights(model({0, 0, 1}, {}, {0.4}, 0.0, 1.0), 5);
    CHECK(ma == std::vector<double>{1.0, 0.4, 0.0, 0.0, 0.0});

    const auto arma = psi_weights(model({1, 0, 1}, {0.5}, {0.3}, 0.0, 1.0), 4);
    CHECK(std::abs(arma[1] - 0.8) < 1e-12);
    CHECK(std::abs(arma[2] - 0.4) < 1e-12);
    CHECK(std::abs(arma[3] - 0.2) < 1e-12);

    const auto walk = psi_weights(model({0, 1, 0}, {}, {}, std::nullopt, 1.0), 6);
    for (double w : walk) CHECK(w == 1.0);
}

TEST_CASE("random-walk forecast is flat with sqrt-h intervals") {
    const auto history = TimeSeries::from_values({3.0, 4.5, 5.0, 6.0}, "rw");
    const auto fc = forecast(model({0, 1, 0}, {}, {}, std::nullopt, 1.0), history, 10, 0.8);
    REQUIRE(fc.point.size() == 10);
    const double z = norm_quantile(0.9);
    CHECK(std::abs(z - 1.281552) < 1e-6);
    for (std::size_t i = 0; i < 10; ++i) {
        CHECK(fc.point[i] == 6.0);
        CHECK(fc.horizons[i] == i + 1);
        const double half = fc.upper[i] - fc.point[i];
        CHECK(std::abs(half - z * std::sqrt(static_cast<double>(i + 1))) < 1e-9);
        CHECK(std::abs((fc.point[i] - fc.lower[i]) - half) < 1e-12);
    }
    CHECK(fc.origin_date == history.last_date());
    CHECK(fc.dates.front() == add_days(history.last_date(), 1));
    CHECK(fc.level == 0.8);
}

TEST_CASE("AR(1) forecast decays geometrically") {
    const auto history = TimeSeries::from_values({1.0, -2.0, 3.0, 8.0});
    const auto fc = forecast(model({1, 0, 0}, {0.5}, {}, 0.0, 4.0), history, 3);
    CHECK(fc.point[0] == doctest::Approx(4.0).epsilon(1e-15));
    CHECK(fc.point[1] == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(fc.point[2] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(std::abs((fc.upper[0] - fc.point[0]) - norm_quantile(0.9) * 2.0) < 1e-12);
}

TEST_CASE("stationary forecasts revert to the mean") {
    for (double phi : {0.9, -0.9, 0.5}) {
        const auto history = TimeSeries::from_values({10.0, 14.0, 25.0});
        const double mu = 12.0;
        const auto fc = forecast(model({1, 0, 0}, {phi}, {}, mu, 1.0), history, 200);
        for (std::size_t h = 2; h < 200; ++h) {
            CHECK(std::abs(fc.point[h] - mu) <= std::abs(fc.point[h - 1] - mu));
        }
        CHECK(std::abs(fc.point[199] - mu) < 1e-6);
    }
}

TEST_CASE("forecast intervals bracket and widen for integrated models") {
    const std::vector<double> phi{0.3};
    const auto s = simulate_arima({1, 1, 1}, phi, std::vector<double>{0.2}, 0.0, 0.5, 200, 77);
    const auto m = fit(s, {1, 1, 1});
    const auto fc = forecast(m, s, 30, 0.8);
    for (std::size_t i = 0; i < 30; ++i) {
        CHECK(fc.lower[i] <= fc.point[i]);
        CHECK(fc.point[i] <= fc.upper[i]);
        if (i > 0) CHECK(fc.upper[i] - fc.point[i] >= fc.upper[i - 1] - fc.point[i - 1]);
    }
    CHECK(std::abs((fc.upper[0] - fc.point[0]) - norm_quantile(0.9) * std::sqrt(m.sigma2)) <
          1e-12);
}

TEST_CASE("forecast argument errors and clamping") {
    const auto history = TimeSeries::from_values({1.0, 2.0, 3.0});
    const auto m = model({0, 1, 0}, {}, {}, std::nullopt, 1.0);
    CHECK_THROWS_AS((void)forecast(m, history, 0), Error);
    CHECK_THROWS_AS((void)forecast(m, history, 5, 1.0), Error);
    CHECK_THROWS_AS((void)forecast(m, history, 5, 0.0), Error);

    const auto low = TimeSeries::from_values({0.4, 0.2, 0.1});
    const auto fc = clamp_to_percent(forecast(m, low, 5));
    for (double v : fc.lower) CHECK(v >= 0.0);
    CHECK(fc.point[0] == 0.1);
}
