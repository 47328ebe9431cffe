#include "bj/forecast.hpp"

#include "bj/error.hpp"
#include "bj/polynomial.hpp"
#include "bj/stat_tests.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

namespace bj {

std::vector<double> psi_weights(const ArimaModel& model, std::size_t count) {
    const auto ar = integrated_ar(model.phi, model.order.d);
    const auto& theta = model.theta;
    std::vector<double> psi(count, 0.0);
    if (count == 0) return psi;
    psi[0] = 1.0;
    for (std::size_t j = 1; j < count; ++j) {
        double v = j <= theta.size() ? theta[j - 1] : 0.0;
        for (std::size_t i = 1; i <= std::min(j, ar.size()); ++i) {
            v += ar[i - 1] * psi[j - i];
        }
        psi[j] = v;
    }
    return psi;
}

ForecastResult forecast(const ArimaModel& model, const TimeSeries& history, std::size_t h,
                        double level) {
    if (h == 0) {
        throw Error(ErrorKind::DomainError, "forecast horizon must be positive");
    }
    if (!(level > 0.0 && level < 1.0)) {
        throw Error(ErrorKind::DomainError, fmt::format("interval level {} outside (0, 1)", level));
    }
    const std::size_t p = model.order.p;
    const std::size_t d = model.order.d;
    const double mu = model.mean.value_or(0.0);
    const auto w = difference(history.values(), d);
    if (w.size() <= p) {
        throw Error(ErrorKind::InsufficientData, "history shorter than the AR order");
    }

    // Past innovations: zero before the conditioning window, fitted residuals after.
    const auto fitted = css_residuals(model.phi, model.theta, mu, w);
    std::vector<double> centered(w.size() + h);
    std::vector<double> innov(w.size() + h, 0.0);
    for (std::size_t t = 0; t < w.size(); ++t) {
        centered[t] = w[t] - mu;
    }
    std::copy(fitted.begin(), fitted.end(), innov.begin() + static_cast<std::ptrdiff_t>(p));

    std::vector<double> diffs(h);
    for (std::size_t step = 0; step < h; ++step) {
        const std::size_t t = w.size() + step;
        double v = 0.0;
        for (std::size_t i = 1; i <= p; ++i) {
            v += model.phi[i - 1] * centered[t - i];
        }
        for (std::size_t j = 1; j <= model.theta.size() && j <= t; ++j) {
            v += model.theta[j - 1] * innov[t - j];
        }
        centered[t] = v;
        diffs[step] = v + mu;
    }

    const auto values = history.values();
    const auto pivots = values.subspan(values.size() - d);
    const auto points = integrate(diffs, d, pivots);

    const auto psi = psi_weights(model, h);
    const double z = norm_quantile(0.5 * (1.0 + level));
    const double sigma = std::sqrt(model.sigma2);

    ForecastResult out;
    out.level = level;
    out.origin_date = history.last_date();
    out.point = points;
    out.horizons.resize(h);
    out.dates.resize(h);
    out.lower.resize(h);
    out.upper.resize(h);
    double cumulative = 0.0;
    for (std::size_t i = 0; i < h; ++i) {
        cumulative += psi[i] * psi[i];
        const double half = z * sigma * std::sqrt(cumulative);
        out.horizons[i] = i + 1;
        out.dates[i] = add_days(out.origin_date, static_cast<int>(i + 1));
        out.lower[i] = points[i] - half;
        out.upper[i] = points[i] + half;
    }
    return out;
}

ForecastResult clamp_to_percent(ForecastResult result) {
    for (auto* v : {&result.point, &result.lower, &result.upper}) {
        for (double& x : *v) x = std::clamp(x, 0.0, 100.0);
    }
    return result;
}

}  // namespace bj
