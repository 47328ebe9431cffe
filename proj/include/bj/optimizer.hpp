#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace bj {

struct NelderMeadOptions {
    double tolerance = 1e-10;       ///< stop when max(f) - min(f) over the simplex falls below this
    std::size_t max_evaluations = 2000;
    double initial_step = 0.5;      ///< per-coordinate step used when `steps` is empty
    std::vector<double> steps;      ///< optional per-coordinate initial simplex steps
};

struct NelderMeadResult {
    std::vector<double> x;
    double value = 0.0;
    double initial_value = 0.0;
    std::size_t evaluations = 0;
    bool converged = false;
};

using Objective = std::function<double(std::span<const double>)>;

/// Derivative-free simplex minimization. The returned point never scores
/// worse than `start`.
[[nodiscard]] NelderMeadResult nelder_mead(const Objective& f, std::vector<double> start,
                                           const NelderMeadOptions& options = {});

}  // namespace bj
