#include "bj/diagnostics.hpp"

#include "bj/error.hpp"
#include "bj/polynomial.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

namespace bj {

FitMetrics residual_metrics(std::span<const double> residuals) {
    if (residuals.empty()) {
        throw Error(ErrorKind::InsufficientData, "no residuals to summarise");
    }
    const auto n = static_cast<double>(residuals.size());
    FitMetrics m;
    double sq = 0.0;
    double abs_sum = 0.0;
    for (double e : residuals) {
        m.me += e;
        sq += e * e;
        abs_sum += std::abs(e);
    }
    m.me /= n;
    m.rmse = std::sqrt(sq / n);
    m.mae = abs_sum / n;
    if (residuals.size() < 2) {
        m.acf1_degenerate = true;
        return m;
    }
    try {
        m.residual_acf1 = acf(residuals, 1).coefficients[1];
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::DegenerateSeries) throw;
        m.acf1_degenerate = true;
    }
    return m;
}

HistogramData histogram(std::span<const double> residuals, std::size_t bins) {
    if (residuals.empty()) {
        throw Error(ErrorKind::InsufficientData, "histogram of an empty sample");
    }
    if (bins == 0) {
        throw Error(ErrorKind::DomainError, "histogram needs at least one bin");
    }
    const auto [lo_it, hi_it] = std::minmax_element(residuals.begin(), residuals.end());
    double lo = *lo_it;
    double hi = *hi_it;
    if (!(hi > lo)) {
        lo -= 0.5;
        hi += 0.5;
    }
    const double width = (hi - lo) / static_cast<double>(bins);

    HistogramData out;
    out.bin_edges.resize(bins + 1);
    for (std::size_t i = 0; i < bins; ++i) {
        out.bin_edges[i] = lo + static_cast<double>(i) * width;
    }
    out.bin_edges[bins] = hi;
    out.counts.assign(bins, 0);
    for (double x : residuals) {
        auto idx = static_cast<std::size_t>(std::floor((x - lo) / width));
        idx = std::min(idx, bins - 1);
        // Floating-point placement must agree with the published edges.
        while (idx > 0 && x < out.bin_edges[idx]) --idx;
        while (idx + 1 < bins && x >= out.bin_edges[idx + 1]) ++idx;
        ++out.counts[idx];
    }
    out.mean_marker = mean(residuals);
    return out;
}

double NormalGenerator::uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double NormalGenerator::operator()() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double u = 0.0;
    double v = 0.0;
    double s = 0.0;
    do {
        u = 2.0 * uniform() - 1.0;
        v = 2.0 * uniform() - 1.0;
        s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double scale = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * scale;
    has_spare_ = true;
    return u * scale;
}

TimeSeries simulate_arima(const ArimaOrder& order, std::span<const double> phi,
                          std::span<const double> theta, double mean, double sigma, std::size_t n,
                          std::uint64_t seed) {
    if (phi.size() != order.p || theta.size() != order.q) {
        throw Error(ErrorKind::DimensionMismatch,
                    fmt::format("order ({},{},{}) with {} AR and {} MA coefficients", order.p,
                                order.d, order.q, phi.size(), theta.size()));
    }
    if (n == 0) {
        throw Error(ErrorKind::DomainError, "simulation length must be positive");
    }
    if (!(sigma >= 0.0)) {
        throw Error(ErrorKind::DomainError, fmt::format("negative innovation sd {}", sigma));
    }
    if (!is_stationary(phi)) {
        throw Error(ErrorKind::DomainError, "AR coefficients are not stationary");
    }
    if (!is_invertible(theta)) {
        throw Error(ErrorKind::DomainError, "MA coefficients are not invertible");
    }

    const std::size_t burn_in = std::max<std::size_t>(200, 10 * (order.p + order.q));
    const std::size_t total = burn_in + n;
    NormalGenerator normal(seed);
    std::vector<double> e(total);
    std::vector<double> w(total, 0.0);
    for (std::size_t t = 0; t < total; ++t) {
        e[t] = sigma * normal();
        double v = e[t];
        for (std::size_t i = 1; i <= order.p && i <= t; ++i) {
            v += phi[i - 1] * w[t - i];
        }
        for (std::size_t j = 1; j <= order.q && j <= t; ++j) {
            v += theta[j - 1] * e[t - j];
        }
        w[t] = v;
    }

    std::vector<double> out(w.begin() + static_cast<std::ptrdiff_t>(burn_in), w.end());
    for (double& x : out) x += mean;
    for (std::size_t k = 0; k < order.d; ++k) {
        double level = 0.0;
        for (double& x : out) {
            level += x;
            x = level;
        }
    }
    return TimeSeries::from_values(std::move(out), "simulated");
}

}  // namespace bj
