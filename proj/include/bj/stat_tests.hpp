#pragma once

#include "bj/series.hpp"

#include <cstddef>
#include <optional>
#include <span>

namespace bj {

enum class AdfRegression { Constant };

struct AdfResult {
    double statistic = 0.0;  ///< t-ratio on the lagged level coefficient
    double p_value = 1.0;    ///< interpolated, clamped to [0.01, 0.99]
    std::size_t lag_order = 0;
    std::size_t n_used = 0;
    AdfRegression regression_kind = AdfRegression::Constant;
    bool p_value_clamped = false;  ///< statistic fell outside the tabulated range

    friend bool operator==(const AdfResult&, const AdfResult&) = default;
};

struct LjungBoxResult {
    double statistic = 0.0;
    std::size_t dof = 1;
    double p_value = 1.0;
    std::size_t lags_used = 1;
    std::size_t fitdf = 0;

    friend bool operator==(const LjungBoxResult&, const LjungBoxResult&) = default;
};

/// floor((n-1)^(1/3)), the default augmentation lag.
[[nodiscard]] std::size_t default_adf_lag(std::size_t n);

/**
 * Augmented Dickey-Fuller test with a constant and no trend:
 *
 *   dx_t = a + rho * x_{t-1} + sum_i b_i * dx_{t-i} + e_t
 *
 * The p-value is read off the finite-sample Dickey-Fuller tables by linear
 * interpolation in sample size and then in significance level.
 */
[[nodiscard]] AdfResult adf_test(std::span<const double> values,
                                 std::optional<std::size_t> lag_order = std::nullopt);
[[nodiscard]] AdfResult adf_test(const TimeSeries& series,
                                 std::optional<std::size_t> lag_order = std::nullopt);

/// Dickey-Fuller p-value for a constant-only t statistic at sample size n.
/// Sets `clamped` when the statistic is outside the tabulated levels.
[[nodiscard]] double adf_p_value(double statistic, std::size_t n, bool* clamped = nullptr);

/// Ljung-Box portmanteau test; p-value from chi-square(lags_used - fitdf).
[[nodiscard]] LjungBoxResult ljung_box(std::span<const double> residuals, std::size_t lags_used,
                                       std::size_t fitdf);

/// Regularized lower and upper incomplete gamma functions P(a, x), Q(a, x).
[[nodiscard]] double gamma_p(double a, double x);
[[nodiscard]] double gamma_q(double a, double x);

/// P(chi2_dof > x).
[[nodiscard]] double chi2_sf(double x, std::size_t dof);

[[nodiscard]] double norm_cdf(double z);

/// Inverse standard normal CDF; throws DomainError outside (0, 1).
[[nodiscard]] double norm_quantile(double p);

}  // namespace bj
