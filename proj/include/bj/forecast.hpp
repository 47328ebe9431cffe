#pragma once

#include "bj/arima.hpp"
#include "bj/series.hpp"

#include <cstddef>
#include <vector>

namespace bj {

struct ForecastResult {
    std::vector<std::size_t> horizons;  ///< 1..h
    std::vector<Date> dates;            ///< origin_date + horizon days
    std::vector<double> point;
    std::vector<double> lower;
    std::vector<double> upper;
    double level = 0.8;
    Date origin_date{};

    friend bool operator==(const ForecastResult&, const ForecastResult&) = default;
};

/// MA(infinity) weights psi_0..psi_{count-1} of the integrated model.
[[nodiscard]] std::vector<double> psi_weights(const ArimaModel& model, std::size_t count);

/**
 * h-step forecasts with Gaussian prediction intervals at `level`.
 * `history` must be the series the model was fitted on.
 */
[[nodiscard]] ForecastResult forecast(const ArimaModel& model, const TimeSeries& history,
                                      std::size_t h, double level = 0.8);

/// Presentation helper: clamps point and bounds to [0, 100] percent.
[[nodiscard]] ForecastResult clamp_to_percent(ForecastResult result);

}  // namespace bj
