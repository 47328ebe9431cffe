#include "bj/arima.hpp"

#include "bj/error.hpp"
#include "bj/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

namespace bj {

std::size_t ArimaModel::parameter_count() const noexcept {
    return order.p + order.q + (mean ? 1 : 0) + 1;
}

InformationCriteria information_criteria(double loglik, std::size_t k, double n) {
    const auto kd = static_cast<double>(k);
    const double log_n = std::log(n);
    return {.aic = -2.0 * loglik + 2.0 * kd,
            .bic_paper = -2.0 * loglik + 2.0 * log_n * kd,
            .bic_standard = -2.0 * loglik + log_n * kd};
}

InformationCriteria information_criteria(const ArimaModel& model) {
    return information_criteria(model.loglik, model.parameter_count(),
                                static_cast<double>(model.n_effective));
}

std::vector<double> css_residuals(std::span<const double> phi, std::span<const double> theta,
                                  double mean, std::span<const double> values) {
    const std::size_t p = phi.size();
    const std::size_t q = theta.size();
    const std::size_t n = values.size();
    if (n <= p) {
        return {};
    }
    std::vector<double> e(n, 0.0);
    for (std::size_t t = p; t < n; ++t) {
        double v = values[t] - mean;
        for (std::size_t i = 1; i <= p; ++i) {
            v -= phi[i - 1] * (values[t - i] - mean);
        }
        for (std::size_t j = 1; j <= q && j <= t; ++j) {
            v -= theta[j - 1] * e[t - j];
        }
        e[t] = v;
    }
    return {e.begin() + static_cast<std::ptrdiff_t>(p), e.end()};
}

double css_objective(std::span<const double> phi, std::span<const double> theta, double mean,
                     std::span<const double> values) {
    double sum = 0.0;
    for (double e : css_residuals(phi, theta, mean, values)) {
        sum += e * e;
    }
    return sum;
}

std::vector<double> to_stationary(std::span<const double> unconstrained) {
    const std::size_t p = unconstrained.size();
    std::vector<double> coef(p);
    for (std::size_t j = 0; j < p; ++j) {
        coef[j] = std::tanh(unconstrained[j]);
    }
    std::vector<double> work = coef;
    for (std::size_t j = 1; j < p; ++j) {
        const double a = coef[j];
        for (std::size_t k = 0; k < j; ++k) {
            work[k] -= a * coef[j - k - 1];
        }
        std::copy_n(work.begin(), j, coef.begin());
    }
    return coef;
}

std::vector<double> from_stationary(std::span<const double> phi) {
    const std::size_t p = phi.size();
    std::vector<double> coef(phi.begin(), phi.end());
    std::vector<double> work = coef;
    for (std::size_t j = p; j-- > 1;) {
        const double a = coef[j];
        const double denom = 1.0 - a * a;
        if (!(std::abs(a) < 1.0)) {
            throw Error(ErrorKind::DomainError, "AR coefficients are not stationary");
        }
        for (std::size_t k = 0; k < j; ++k) {
            work[k] = (coef[k] + a * coef[j - k - 1]) / denom;
        }
        std::copy_n(work.begin(), j, coef.begin());
    }
    for (double& c : coef) {
        if (!(std::abs(c) < 1.0)) {
            throw Error(ErrorKind::DomainError, "AR coefficients are not stationary");
        }
        c = std::atanh(c);
    }
    return coef;
}

std::vector<double> to_invertible(std::span<const double> unconstrained) {
    auto theta = to_stationary(unconstrained);
    for (double& t : theta) t = -t;
    return theta;
}

std::vector<double> from_invertible(std::span<const double> theta) {
    std::vector<double> negated(theta.begin(), theta.end());
    for (double& t : negated) t = -t;
    return from_stationary(negated);
}

namespace {

double sample_sd(std::span<const double> values, double center) {
    double ss = 0.0;
    for (double v : values) ss += (v - center) * (v - center);
    return values.size() > 1 ? std::sqrt(ss / static_cast<double>(values.size() - 1)) : 0.0;
}

struct Unpacked {
    std::vector<double> phi;
    std::vector<double> theta;
    double mean = 0.0;
};

}  // namespace

ArimaModel fit(std::span<const double> values, const ArimaOrder& order, const FitOptions& options) {
    const auto [p, d, q] = order;
    if (p > kMaxOrder.p || d > kMaxOrder.d || q > kMaxOrder.q) {
        throw Error(ErrorKind::DomainError,
                    fmt::format("order ({},{},{}) exceeds the supported caps", p, d, q));
    }
    if (values.size() < d + p + q + 10) {
        throw Error(ErrorKind::InsufficientData,
                    fmt::format("ARIMA({},{},{}) needs at least {} observations, got {}", p, d, q,
                                d + p + q + 10, values.size()));
    }
    const bool with_mean = options.include_mean.value_or(d == 0);
    const auto w = difference(values, d);
    const double center = mean(w);
    const double spread = sample_sd(w, center);

    const std::size_t dim = p + q + (with_mean ? 1 : 0);
    auto unpack = [&](std::span<const double> x) {
        Unpacked u;
        u.phi = to_stationary(x.subspan(0, p));
        u.theta = to_invertible(x.subspan(p, q));
        // The mean is optimised as an offset from the sample mean.
        u.mean = with_mean ? center + x[p + q] : 0.0;
        return u;
    };
    const Objective objective = [&](std::span<const double> x) {
        const auto u = unpack(x);
        return css_objective(u.phi, u.theta, u.mean, w);
    };

    NelderMeadOptions nm;
    nm.tolerance = options.tolerance;
    nm.max_evaluations = options.evaluations_per_parameter * (p + q + 1);
    nm.steps.assign(dim, 0.5);
    if (with_mean) {
        nm.steps.back() = spread > 0.0 ? 0.1 * spread : 0.1;
    }

    std::vector<double> x(dim, 0.0);
    auto result = nelder_mead(objective, x, nm);
    const double initial = result.initial_value;
    std::size_t used = result.evaluations;
    // Restart from the best vertex while it keeps improving; a collapsed
    // simplex can stall short of the minimum in higher dimensions.
    while (dim > 0 && result.converged && used < nm.max_evaluations) {
        NelderMeadOptions again = nm;
        again.max_evaluations = nm.max_evaluations - used;
        auto next = nelder_mead(objective, result.x, again);
        used += next.evaluations;
        const bool improved = next.value < result.value - options.tolerance;
        if (next.value <= result.value) {
            result.x = next.x;
            result.value = next.value;
        }
        if (!improved || !next.converged) break;
    }

    const auto u = unpack(result.x);
    ArimaModel model;
    model.order = order;
    model.phi = u.phi;
    model.theta = u.theta;
    if (with_mean) model.mean = u.mean;
    model.residuals = css_residuals(u.phi, u.theta, u.mean, w);
    model.n_effective = model.residuals.size();
    model.css = result.value;
    model.css_initial = initial;
    model.evaluations = used;
    model.converged = result.converged;
    model.sigma2 = model.css / static_cast<double>(model.n_effective);
    if (!(model.sigma2 > 0.0) || !std::isfinite(model.sigma2)) {
        throw Error(ErrorKind::DegenerateSeries,
                    fmt::format("ARIMA({},{},{}) fit has zero innovation variance", p, d, q));
    }
    model.loglik = -0.5 * static_cast<double>(model.n_effective) *
                   (std::log(2.0 * std::numbers::pi) + std::log(model.sigma2) + 1.0);
    const auto ic = information_criteria(model);
    model.aic = ic.aic;
    model.bic_paper = ic.bic_paper;
    model.bic_standard = ic.bic_standard;

    if (!model.converged && options.strict) {
        throw ConvergenceError(
            fmt::format("ARIMA({},{},{}) did not converge within {} evaluations", p, d, q, used),
            std::move(model));
    }
    return model;
}

ArimaModel fit(const TimeSeries& series, const ArimaOrder& order, const FitOptions& options) {
    return fit(series.values(), order, options);
}

OrderSelection select_order(const TimeSeries& series, const ArimaOrder& caps,
                            const SelectOptions& options) {
    if (caps.p > kMaxOrder.p || caps.d > kMaxOrder.d || caps.q > kMaxOrder.q) {
        throw Error(ErrorKind::DomainError,
                    fmt::format("caps ({},{},{}) exceed the supported limits", caps.p, caps.d,
                                caps.q));
    }
    OrderSelection out;
    out.stationarity_reached = false;
    std::vector<double> w;
    for (std::size_t d = 0; d <= caps.d; ++d) {
        w = difference(series.values(), d);
        out.adf_by_d.push_back(adf_test(w));
        out.order.d = d;
        if (out.adf_by_d.back().p_value < options.adf_alpha) {
            out.stationarity_reached = true;
            break;
        }
    }

    auto largest_significant = [](const CorrelogramResult& c) {
        std::size_t best = 0;
        for (std::size_t i = 0; i < c.lags.size(); ++i) {
            if (c.lags[i] > 0 && std::abs(c.coefficients[i]) > c.confidence_bound) {
                best = c.lags[i];
            }
        }
        return best;
    };
    if (caps.p > 0) out.order.p = largest_significant(pacf(w, caps.p));
    if (caps.q > 0) out.order.q = largest_significant(acf(w, caps.q));

    if (options.refine) {
        const ArimaOrder centre = out.order;
        std::optional<double> best_aic;
        for (int dp : {0, -1, 1}) {
            for (int dq : {0, -1, 1}) {
                const long cp = static_cast<long>(centre.p) + dp;
                const long cq = static_cast<long>(centre.q) + dq;
                if (cp < 0 || cq < 0 || cp > static_cast<long>(caps.p) ||
                    cq > static_cast<long>(caps.q)) {
                    continue;
                }
                const ArimaOrder candidate{static_cast<std::size_t>(cp), centre.d,
                                           static_cast<std::size_t>(cq)};
                try {
                    const auto model = fit(series, candidate, options.fit);
                    if (!best_aic || model.aic < *best_aic) {
                        best_aic = model.aic;
                        out.order = candidate;
                    }
                } catch (const Error&) {
                    // Candidates that cannot be fitted are skipped.
                }
            }
        }
        out.refined_aic = best_aic;
    }
    return out;
}

}  // namespace bj
