#include "bj/policy.hpp"

#include "bj/error.hpp"

#include <algorithm>
#include <array>
#include <utility>

#include <fmt/format.h>

namespace bj {

std::string_view to_string(Verdict verdict) noexcept {
    switch (verdict) {
        case Verdict::Relax: return "relax";
        case Verdict::Maintain: return "maintain";
        case Verdict::Tighten: return "tighten";
    }
    return "maintain";
}

std::string_view to_string(Trend trend) noexcept {
    switch (trend) {
        case Trend::Rising: return "rising";
        case Trend::Falling: return "falling";
        case Trend::Flat: return "flat";
    }
    return "flat";
}

Verdict parse_verdict(std::string_view text) {
    for (auto v : {Verdict::Relax, Verdict::Maintain, Verdict::Tighten}) {
        if (to_string(v) == text) return v;
    }
    throw Error(ErrorKind::SchemaError, fmt::format("unknown verdict '{}'", text));
}

Trend parse_trend(std::string_view text) {
    for (auto t : {Trend::Rising, Trend::Falling, Trend::Flat}) {
        if (to_string(t) == text) return t;
    }
    throw Error(ErrorKind::SchemaError, fmt::format("unknown trend '{}'", text));
}

PolicyAdvice policy_recommendation(const ForecastResult& forecast, double threshold,
                                   std::size_t window, double trend_tolerance) {
    if (!(threshold > 0.0)) {
        throw Error(ErrorKind::DomainError, fmt::format("threshold {} must be positive", threshold));
    }
    if (window == 0 || forecast.point.size() < window) {
        throw Error(ErrorKind::DomainError,
                    fmt::format("forecast of {} steps cannot cover a {}-day window",
                                forecast.point.size(), window));
    }
    PolicyAdvice advice;
    advice.window = window;
    advice.threshold = threshold;

    for (std::size_t i = window; i-- > 0;) {
        if (!(forecast.point[i] <= threshold)) break;
        ++advice.days_below_threshold;
    }

    advice.terminal_forecast = forecast.point.back();
    const double change = advice.terminal_forecast - forecast.point.front();
    if (change > trend_tolerance) {
        advice.trend = Trend::Rising;
    } else if (change < -trend_tolerance) {
        advice.trend = Trend::Falling;
    } else {
        advice.trend = Trend::Flat;
    }

    if (advice.days_below_threshold == window) {
        advice.verdict = Verdict::Relax;
    } else if (advice.terminal_forecast > threshold && advice.trend != Trend::Falling) {
        advice.verdict = Verdict::Tighten;
    } else {
        advice.verdict = Verdict::Maintain;
    }
    advice.required_test_multiplier = std::max(1.0, advice.terminal_forecast / threshold);
    return advice;
}

std::optional<std::string> literature_testing_increase(std::string_view country) {
    static constexpr std::array<std::pair<std::string_view, std::string_view>, 3> table{{
        {"India", "20-30%"},
        {"Mexico", "60-70%"},
        {"Spain", "30-40%"},
    }};
    for (const auto& [name, range] : table) {
        if (name == country) return std::string(range);
    }
    return std::nullopt;
}

}  // namespace bj
