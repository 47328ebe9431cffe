#pragma once

#include "bj/arima.hpp"
#include "bj/series.hpp"

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace bj {

struct FitMetrics {
    double me = 0.0;
    double rmse = 0.0;
    double mae = 0.0;
    double residual_acf1 = 0.0;
    bool acf1_degenerate = false;  ///< residual variance was zero; acf1 reported as 0

    friend bool operator==(const FitMetrics&, const FitMetrics&) = default;
};

struct HistogramData {
    std::vector<double> bin_edges;
    std::vector<std::size_t> counts;
    double mean_marker = 0.0;

    friend bool operator==(const HistogramData&, const HistogramData&) = default;
};

inline constexpr std::size_t kDefaultHistogramBins = 12;

/// Residual convention: actual - fitted.
[[nodiscard]] FitMetrics residual_metrics(std::span<const double> residuals);

/// Equal-width bins over [min, max]; bins are half-open except the last.
/// A zero-width span is widened to [v - 0.5, v + 0.5].
[[nodiscard]] HistogramData histogram(std::span<const double> residuals,
                                      std::size_t bins = kDefaultHistogramBins);

/**
 * Seeded standard-normal source, algorithm "bj-normal-v1":
 * std::mt19937_64 seeded with the 64-bit seed, 53-bit uniforms taken as
 * (word >> 11) * 2^-53, and Marsaglia's polar method (both variates used,
 * first one first). std::mt19937_64 output is fixed by the C++ standard, so
 * the stream does not depend on the standard library in use.
 */
class NormalGenerator {
public:
    explicit NormalGenerator(std::uint64_t seed) : engine_(seed) {}

    double uniform();
    double operator()();

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

/// Simulates ARIMA(p, d, q) with Gaussian innovations of standard deviation
/// `sigma`, discarding max(200, 10 (p + q)) burn-in samples before d-fold
/// cumulative integration. Bit-identical for identical arguments.
[[nodiscard]] TimeSeries simulate_arima(const ArimaOrder& order, std::span<const double> phi,
                                        std::span<const double> theta, double mean, double sigma,
                                        std::size_t n, std::uint64_t seed);

}  // namespace bj
