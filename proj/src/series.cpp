#include "bj/series.hpp"

#include "bj/error.hpp"

#include <charconv>
#include <cmath>
#include <map>
#include <numeric>
#include <utility>

#include <fmt/format.h>

namespace bj {

namespace {

int parse_int(std::string_view text, std::string_view whole) {
    int value = 0;
    const auto* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc{} || ptr != end) {
        throw Error(ErrorKind::SchemaError, fmt::format("invalid date '{}'", whole));
    }
    return value;
}

}  // namespace

Date parse_date(std::string_view text) {
    if (text.size() != 10 || text[4] != '-' || text[7] != '-') {
        throw Error(ErrorKind::SchemaError, fmt::format("invalid date '{}'", text));
    }
    const Date date{std::chrono::year{parse_int(text.substr(0, 4), text)},
                    std::chrono::month{static_cast<unsigned>(parse_int(text.substr(5, 2), text))},
                    std::chrono::day{static_cast<unsigned>(parse_int(text.substr(8, 2), text))}};
    if (!date.ok()) {
        throw Error(ErrorKind::SchemaError, fmt::format("invalid date '{}'", text));
    }
    return date;
}

std::string format_date(Date date) {
    return fmt::format("{:04d}-{:02d}-{:02d}", static_cast<int>(date.year()),
                       static_cast<unsigned>(date.month()), static_cast<unsigned>(date.day()));
}

Date add_days(Date date, int days) {
    return Date{std::chrono::sys_days{date} + std::chrono::days{days}};
}

TimeSeries::TimeSeries(std::vector<Date> dates, std::vector<double> values, std::string name)
    : dates_(std::move(dates)), values_(std::move(values)), name_(std::move(name)) {
    if (values_.empty()) {
        throw Error(ErrorKind::InsufficientData, "time series must hold at least one value");
    }
    if (dates_.size() != values_.size()) {
        throw Error(ErrorKind::DimensionMismatch,
                    fmt::format("{} dates for {} values", dates_.size(), values_.size()));
    }
    for (std::size_t i = 1; i < dates_.size(); ++i) {
        if (!(dates_[i - 1] < dates_[i])) {
            throw Error(ErrorKind::SchemaError,
                        fmt::format("dates not strictly increasing at {}", format_date(dates_[i])));
        }
    }
}

TimeSeries TimeSeries::from_values(std::vector<double> values, std::string name, Date start) {
    std::vector<Date> dates;
    dates.reserve(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        dates.push_back(add_days(start, static_cast<int>(i)));
    }
    return TimeSeries(std::move(dates), std::move(values), std::move(name));
}

TimeSeries TimeSeries::tail(std::size_t count) const {
    if (count == 0 || count > size()) {
        throw Error(ErrorKind::InsufficientData,
                    fmt::format("cannot take {} trailing values of {}", count, size()));
    }
    const auto offset = static_cast<std::ptrdiff_t>(size() - count);
    return TimeSeries({dates_.begin() + offset, dates_.end()},
                      {values_.begin() + offset, values_.end()}, name_);
}

std::vector<double> difference(std::span<const double> values, std::size_t d) {
    if (values.size() <= d) {
        throw Error(ErrorKind::InsufficientData,
                    fmt::format("cannot difference {} values {} times", values.size(), d));
    }
    std::vector<double> out(values.begin(), values.end());
    for (std::size_t level = 0; level < d; ++level) {
        for (std::size_t i = 0; i + 1 < out.size(); ++i) {
            out[i] = out[i + 1] - out[i];
        }
        out.pop_back();
    }
    return out;
}

TimeSeries difference(const TimeSeries& series, std::size_t d) {
    auto values = difference(series.values(), d);
    const auto dates = series.dates().subspan(d);
    return TimeSeries({dates.begin(), dates.end()}, std::move(values), series.name());
}

std::vector<double> integrate(std::span<const double> diffs, std::size_t d,
                              std::span<const double> pivots) {
    if (pivots.size() != d) {
        throw Error(ErrorKind::DimensionMismatch,
                    fmt::format("undoing {} differences needs {} pivots, got {}", d, d,
                                pivots.size()));
    }
    // anchors[k] is the last value of the k-th difference of the pivots.
    std::vector<double> anchors(d);
    std::vector<double> work(pivots.begin(), pivots.end());
    for (std::size_t k = 0; k < d; ++k) {
        anchors[k] = work.back();
        for (std::size_t i = 0; i + 1 < work.size(); ++i) {
            work[i] = work[i + 1] - work[i];
        }
        work.pop_back();
    }

    std::vector<double> out(diffs.begin(), diffs.end());
    for (std::size_t k = d; k-- > 0;) {
        double level = anchors[k];
        for (double& v : out) {
            level += v;
            v = level;
        }
    }
    return out;
}

TimeSeries integrate(const TimeSeries& diffs, std::size_t d, std::span<const double> pivots) {
    auto values = integrate(diffs.values(), d, pivots);
    return TimeSeries({diffs.dates().begin(), diffs.dates().end()}, std::move(values), diffs.name());
}

TimeSeries impute_monthly_mean(const RawSeries& raw) {
    if (raw.dates.size() != raw.values.size()) {
        throw Error(ErrorKind::DimensionMismatch,
                    fmt::format("{} dates for {} values", raw.dates.size(), raw.values.size()));
    }
    using MonthKey = std::pair<int, unsigned>;
    std::map<MonthKey, std::pair<double, std::size_t>> sums;
    for (std::size_t i = 0; i < raw.size(); ++i) {
        const MonthKey key{static_cast<int>(raw.dates[i].year()),
                           static_cast<unsigned>(raw.dates[i].month())};
        auto& [sum, count] = sums[key];
        if (raw.values[i]) {
            sum += *raw.values[i];
            ++count;
        }
    }

    std::vector<double> values;
    values.reserve(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i) {
        if (raw.values[i]) {
            values.push_back(*raw.values[i]);
            continue;
        }
        const MonthKey key{static_cast<int>(raw.dates[i].year()),
                           static_cast<unsigned>(raw.dates[i].month())};
        const auto& [sum, count] = sums.at(key);
        if (count == 0) {
            throw Error(ErrorKind::ImputationImpossible,
                        fmt::format("{}: no observed values in {:04d}-{:02d}", raw.name, key.first,
                                    key.second));
        }
        values.push_back(sum / static_cast<double>(count));
    }
    return TimeSeries(raw.dates, std::move(values), raw.name);
}

double mean(std::span<const double> values) {
    if (values.empty()) {
        throw Error(ErrorKind::InsufficientData, "mean of empty sequence");
    }
    return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

CorrelogramResult acf(std::span<const double> values, std::size_t max_lag) {
    const std::size_t n = values.size();
    if (n <= max_lag) {
        throw Error(ErrorKind::InsufficientData,
                    fmt::format("ACF to lag {} needs more than {} observations", max_lag, n));
    }
    const double xbar = mean(values);
    std::vector<double> centered(n);
    for (std::size_t i = 0; i < n; ++i) {
        centered[i] = values[i] - xbar;
    }
    double gamma0 = 0.0;
    for (double c : centered) {
        gamma0 += c * c;
    }
    if (!(gamma0 > 0.0)) {
        throw Error(ErrorKind::DegenerateSeries, "ACF of a zero-variance series");
    }

    CorrelogramResult out;
    out.confidence_bound = 1.96 / std::sqrt(static_cast<double>(n));
    out.lags.resize(max_lag + 1);
    out.coefficients.resize(max_lag + 1);
    out.lags[0] = 0;
    out.coefficients[0] = 1.0;
    for (std::size_t k = 1; k <= max_lag; ++k) {
        double gamma = 0.0;
        for (std::size_t t = 0; t + k < n; ++t) {
            gamma += centered[t] * centered[t + k];
        }
        out.lags[k] = k;
        out.coefficients[k] = gamma / gamma0;
    }
    return out;
}

CorrelogramResult acf(const TimeSeries& series, std::size_t max_lag) {
    return acf(series.values(), max_lag);
}

CorrelogramResult pacf(std::span<const double> values, std::size_t max_lag) {
    if (max_lag == 0 || max_lag + 1 >= values.size()) {
        throw Error(ErrorKind::InsufficientData,
                    fmt::format("PACF to lag {} needs more than {} observations", max_lag + 1,
                                values.size()));
    }
    const auto rho = acf(values, max_lag);
    const auto& r = rho.coefficients;

    CorrelogramResult out;
    out.confidence_bound = rho.confidence_bound;
    out.lags.reserve(max_lag);
    out.coefficients.reserve(max_lag);

    // Durbin-Levinson: phi holds the AR(k) coefficients fitted to the ACF.
    std::vector<double> phi(max_lag + 1, 0.0);
    std::vector<double> prev(max_lag + 1, 0.0);
    double v = 1.0;
    for (std::size_t k = 1; k <= max_lag; ++k) {
        double num = r[k];
        for (std::size_t j = 1; j < k; ++j) {
            num -= prev[j] * r[k - j];
        }
        const double phi_kk = num / v;
        if (!std::isfinite(phi_kk) || std::abs(phi_kk) >= 1.0) {
            throw Error(ErrorKind::NumericalDegeneracy,
                        fmt::format("Durbin-Levinson pivot {} at lag {}", phi_kk, k));
        }
        phi[k] = phi_kk;
        for (std::size_t j = 1; j < k; ++j) {
            phi[j] = prev[j] - phi_kk * prev[k - j];
        }
        v *= 1.0 - phi_kk * phi_kk;
        prev = phi;
        out.lags.push_back(k);
        out.coefficients.push_back(phi_kk);
    }
    return out;
}

CorrelogramResult pacf(const TimeSeries& series, std::size_t max_lag) {
    return pacf(series.values(), max_lag);
}

}  // namespace bj
