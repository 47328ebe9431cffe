#include "bj/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace bj {

namespace {

double safe_eval(const Objective& f, std::span<const double> x, std::size_t& count) {
    ++count;
    const double v = f(x);
    return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
}

}  // namespace

NelderMeadResult nelder_mead(const Objective& f, std::vector<double> start,
                             const NelderMeadOptions& options) {
    constexpr double reflect = 1.0;
    constexpr double expand = 2.0;
    constexpr double contract = 0.5;
    constexpr double shrink = 0.5;

    const std::size_t dim = start.size();
    NelderMeadResult result;
    std::size_t evals = 0;
    result.initial_value = safe_eval(f, start, evals);
    if (dim == 0) {
        result.x = std::move(start);
        result.value = result.initial_value;
        result.evaluations = evals;
        result.converged = true;
        return result;
    }

    std::vector<std::vector<double>> simplex(dim + 1, start);
    std::vector<double> values(dim + 1, result.initial_value);
    for (std::size_t i = 0; i < dim; ++i) {
        const double step = options.steps.size() == dim ? options.steps[i] : options.initial_step;
        simplex[i + 1][i] += step;
        values[i + 1] = safe_eval(f, simplex[i + 1], evals);
    }

    std::vector<std::size_t> order(dim + 1);
    std::vector<double> centroid(dim);
    std::vector<double> trial(dim);
    std::vector<double> trial2(dim);
    bool converged = false;

    while (true) {
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
        const std::size_t best = order.front();
        const std::size_t worst = order.back();
        const std::size_t second_worst = order[dim - 1];

        if (values[worst] - values[best] < options.tolerance) {
            converged = true;
            break;
        }
        if (evals >= options.max_evaluations) {
            break;
        }

        std::fill(centroid.begin(), centroid.end(), 0.0);
        for (std::size_t i = 0; i <= dim; ++i) {
            if (i == worst) continue;
            for (std::size_t j = 0; j < dim; ++j) centroid[j] += simplex[i][j];
        }
        for (double& c : centroid) c /= static_cast<double>(dim);

        auto along = [&](double coef, std::vector<double>& out) {
            for (std::size_t j = 0; j < dim; ++j) {
                out[j] = centroid[j] + coef * (simplex[worst][j] - centroid[j]);
            }
        };

        along(-reflect, trial);
        const double f_reflect = safe_eval(f, trial, evals);
        if (f_reflect < values[best]) {
            along(-expand, trial2);
            const double f_expand = safe_eval(f, trial2, evals);
            if (f_expand < f_reflect) {
                simplex[worst] = trial2;
                values[worst] = f_expand;
            } else {
                simplex[worst] = trial;
                values[worst] = f_reflect;
            }
            continue;
        }
        if (f_reflect < values[second_worst]) {
            simplex[worst] = trial;
            values[worst] = f_reflect;
            continue;
        }
        if (f_reflect < values[worst]) {
            along(-contract, trial2);  // outside contraction
            const double f_contract = safe_eval(f, trial2, evals);
            if (f_contract <= f_reflect) {
                simplex[worst] = trial2;
                values[worst] = f_contract;
                continue;
            }
        } else {
            along(contract, trial2);  // inside contraction
            const double f_contract = safe_eval(f, trial2, evals);
            if (f_contract < values[worst]) {
                simplex[worst] = trial2;
                values[worst] = f_contract;
                continue;
            }
        }
        for (std::size_t i = 0; i <= dim; ++i) {
            if (i == best) continue;
            for (std::size_t j = 0; j < dim; ++j) {
                simplex[i][j] = simplex[best][j] + shrink * (simplex[i][j] - simplex[best][j]);
            }
            values[i] = safe_eval(f, simplex[i], evals);
        }
    }

    const auto best =
        static_cast<std::size_t>(std::min_element(values.begin(), values.end()) - values.begin());
    result.x = simplex[best];
    result.value = values[best];
    result.evaluations = evals;
    result.converged = converged;
    return result;
}

}  // namespace bj
