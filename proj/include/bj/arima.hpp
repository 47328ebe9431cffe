#pragma once

#include "bj/error.hpp"
#include "bj/series.hpp"
#include "bj/stat_tests.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace bj {

struct ArimaOrder {
    std::size_t p = 0;
    std::size_t d = 0;
    std::size_t q = 0;

    friend bool operator==(const ArimaOrder&, const ArimaOrder&) = default;
};

/// Hard limits on any order the library will fit.
inline constexpr ArimaOrder kMaxOrder{12, 3, 12};

struct ArimaModel {
    ArimaOrder order;
    std::vector<double> phi;     ///< AR: 1 - phi_1 B - ... - phi_p B^p
    std::vector<double> theta;   ///< MA: 1 + theta_1 B + ... + theta_q B^q
    std::optional<double> mean;  ///< mean of the differenced series, when estimated
    double sigma2 = 0.0;
    double loglik = 0.0;
    double aic = 0.0;
    double bic_paper = 0.0;
    double bic_standard = 0.0;
    std::size_t n_effective = 0;
    std::vector<double> residuals;  ///< actual - fitted, aligned to the last n_effective observations
    double css = 0.0;
    double css_initial = 0.0;       ///< objective at the optimizer's starting point
    std::size_t evaluations = 0;
    bool converged = true;

    [[nodiscard]] std::size_t parameter_count() const noexcept;
};

struct InformationCriteria {
    double aic = 0.0;
    double bic_paper = 0.0;     ///< -2 ln L + 2 ln(N) k
    double bic_standard = 0.0;  ///< -2 ln L + ln(N) k
};

/// Criteria from a log-likelihood, parameter count k and sample size N.
[[nodiscard]] InformationCriteria information_criteria(double loglik, std::size_t k, double n);
[[nodiscard]] InformationCriteria information_criteria(const ArimaModel& model);

/**
 * Conditional residuals of an ARMA(p, q) on an already differenced series:
 *
 *   e_t = w_t - sum phi_i w_{t-i} - sum theta_j e_{t-j},  w_t = x_t - mean
 *
 * with pre-sample innovations zero and the recursion starting at t = p.
 * Returns values.size() - p residuals.
 */
[[nodiscard]] std::vector<double> css_residuals(std::span<const double> phi,
                                                std::span<const double> theta, double mean,
                                                std::span<const double> values);

[[nodiscard]] double css_objective(std::span<const double> phi, std::span<const double> theta,
                                   double mean, std::span<const double> values);

/// Maps unconstrained reals to coefficients of a stationary AR polynomial
/// through partial autocorrelations r_k = tanh(u_k).
[[nodiscard]] std::vector<double> to_stationary(std::span<const double> unconstrained);
/// Inverse of to_stationary(); throws DomainError for non-stationary input.
[[nodiscard]] std::vector<double> from_stationary(std::span<const double> phi);
/// MA counterpart: the returned theta gives an invertible 1 + theta(B).
[[nodiscard]] std::vector<double> to_invertible(std::span<const double> unconstrained);
[[nodiscard]] std::vector<double> from_invertible(std::span<const double> theta);

struct FitOptions {
    std::optional<bool> include_mean;  ///< default: true iff d == 0
    std::size_t evaluations_per_parameter = 2000;
    double tolerance = 1e-10;
    /// Throw ConvergenceError when the evaluation budget runs out instead of
    /// returning the best point with converged = false.
    bool strict = false;
};

class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& message, ArimaModel best)
        : Error(ErrorKind::ConvergenceFailure, message), best_(std::move(best)) {}

    [[nodiscard]] const ArimaModel& best_so_far() const noexcept { return best_; }

private:
    ArimaModel best_;
};

/// Conditional-sum-of-squares fit of ARIMA(p, d, q).
[[nodiscard]] ArimaModel fit(const TimeSeries& series, const ArimaOrder& order,
                             const FitOptions& options = {});
[[nodiscard]] ArimaModel fit(std::span<const double> values, const ArimaOrder& order,
                             const FitOptions& options = {});

struct OrderSelection {
    ArimaOrder order;
    bool stationarity_reached = true;  ///< false when d hit the cap without ADF rejection
    std::vector<AdfResult> adf_by_d;   ///< ADF result for each differencing level tried
    std::optional<double> refined_aic;
};

struct SelectOptions {
    double adf_alpha = 0.05;
    bool refine = false;  ///< search the +-1 (p, q) neighbourhood by AIC
    FitOptions fit;
};

/// Box-Jenkins identification: d from repeated ADF tests, p from the PACF and
/// q from the ACF of the differenced series (largest lag beyond the band).
[[nodiscard]] OrderSelection select_order(const TimeSeries& series, const ArimaOrder& caps,
                                          const SelectOptions& options = {});

}  // namespace bj
