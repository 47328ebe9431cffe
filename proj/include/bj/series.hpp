#pragma once

#include <chrono>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace bj {

using Date = std::chrono::year_month_day;

/// Parses an ISO-8601 calendar date (YYYY-MM-DD). Throws Error{SchemaError}.
[[nodiscard]] Date parse_date(std::string_view text);
[[nodiscard]] std::string format_date(Date date);
[[nodiscard]] Date add_days(Date date, int days);

/**
 * Ordered (date, value) observations.
 *
 * Dates are strictly increasing and may contain gaps; models treat the
 * observations as equally spaced by index. Immutable after construction.
 */
class TimeSeries {
public:
    TimeSeries(std::vector<Date> dates, std::vector<double> values, std::string name = {});

    /// Consecutive daily dates starting at `start`.
    static TimeSeries from_values(std::vector<double> values, std::string name = {},
                                  Date start = Date{std::chrono::year{2020}, std::chrono::month{1},
                                                    std::chrono::day{1}});

    [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }
    [[nodiscard]] std::span<const double> values() const noexcept { return values_; }
    [[nodiscard]] std::span<const Date> dates() const noexcept { return dates_; }
    [[nodiscard]] const std::string& name() const noexcept { return name_; }
    [[nodiscard]] double operator[](std::size_t i) const { return values_[i]; }
    [[nodiscard]] Date last_date() const { return dates_.back(); }

    /// The trailing `count` observations.
    [[nodiscard]] TimeSeries tail(std::size_t count) const;

private:
    std::vector<Date> dates_;
    std::vector<double> values_;
    std::string name_;
};

/// Observations where any value may be missing (empty source cell).
struct RawSeries {
    std::vector<Date> dates;
    std::vector<std::optional<double>> values;
    std::string name;

    [[nodiscard]] std::size_t size() const noexcept { return values.size(); }
};

struct CorrelogramResult {
    std::vector<std::size_t> lags;
    std::vector<double> coefficients;
    double confidence_bound = 0.0;

    friend bool operator==(const CorrelogramResult&, const CorrelogramResult&) = default;
};

/// d-th order difference. Output keeps the trailing dates of the input.
[[nodiscard]] TimeSeries difference(const TimeSeries& series, std::size_t d);
[[nodiscard]] std::vector<double> difference(std::span<const double> values, std::size_t d);

/**
 * Inverse of difference(). `pivots` are the d observations of the original
 * series that immediately precede the first differenced value (for
 * forecasting: the last d observations of history). The result carries the
 * dates of `diffs`. Throws DimensionMismatch unless pivots.size() == d.
 */
[[nodiscard]] TimeSeries integrate(const TimeSeries& diffs, std::size_t d,
                                   std::span<const double> pivots);
[[nodiscard]] std::vector<double> integrate(std::span<const double> diffs, std::size_t d,
                                            std::span<const double> pivots);

/// Replaces each missing value with the mean of the observed values that
/// share its (year, month).
[[nodiscard]] TimeSeries impute_monthly_mean(const RawSeries& raw);

/// Sample autocorrelation with the biased 1/n covariance. Lags 0..max_lag.
[[nodiscard]] CorrelogramResult acf(std::span<const double> values, std::size_t max_lag);
[[nodiscard]] CorrelogramResult acf(const TimeSeries& series, std::size_t max_lag);

/// Partial autocorrelation via Durbin-Levinson on the sample ACF. Lags 1..max_lag.
[[nodiscard]] CorrelogramResult pacf(std::span<const double> values, std::size_t max_lag);
[[nodiscard]] CorrelogramResult pacf(const TimeSeries& series, std::size_t max_lag);

[[nodiscard]] double mean(std::span<const double> values);

}  // namespace bj
