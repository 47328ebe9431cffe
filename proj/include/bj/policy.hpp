#pragma once

#include "bj/forecast.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

namespace bj {

enum class Verdict { Relax, Maintain, Tighten };
enum class Trend { Rising, Falling, Flat };

[[nodiscard]] std::string_view to_string(Verdict verdict) noexcept;
[[nodiscard]] std::string_view to_string(Trend trend) noexcept;
[[nodiscard]] Verdict parse_verdict(std::string_view text);
[[nodiscard]] Trend parse_trend(std::string_view text);

struct PolicyAdvice {
    Verdict verdict = Verdict::Maintain;
    std::size_t days_below_threshold = 0;
    std::size_t window = 14;
    double required_test_multiplier = 1.0;
    Trend trend = Trend::Flat;
    double terminal_forecast = 0.0;
    double threshold = 5.0;
    /// Published testing-increase range for this country, if any. Reference only.
    std::optional<std::string> literature_increase;

    friend bool operator==(const PolicyAdvice&, const PolicyAdvice&) = default;
};

inline constexpr double kDefaultTrendTolerance = 0.05;

/**
 * Threshold rule on the forecast path (rates in percent):
 *
 * - days_below_threshold: trailing run of points <= threshold ending at the
 *   `window`-th horizon.
 * - relax when the whole window passes; otherwise tighten when the terminal
 *   forecast is above the threshold and not falling; otherwise maintain.
 * - required_test_multiplier = max(1, terminal / threshold): with positive
 *   counts held fixed, multiplying tests by m divides the rate by m.
 *
 * The trend compares the terminal and first points; changes within
 * `trend_tolerance` percentage points count as flat.
 */
[[nodiscard]] PolicyAdvice policy_recommendation(const ForecastResult& forecast, double threshold,
                                                 std::size_t window,
                                                 double trend_tolerance = kDefaultTrendTolerance);

/// Published testing-increase ranges keyed by country name.
[[nodiscard]] std::optional<std::string> literature_testing_increase(std::string_view country);

}  // namespace bj
