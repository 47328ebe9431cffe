#include "bj/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>

namespace bj {

std::vector<std::complex<double>> polynomial_roots(std::span<const double> coeffs) {
    std::size_t degree = coeffs.size();
    while (degree > 0 && coeffs[degree - 1] == 0.0) {
        --degree;
    }
    if (degree <= 1) {
        return {};
    }
    degree -= 1;
    // Companion matrix of the monic polynomial.
    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(degree, degree);
    const double lead = coeffs[degree];
    for (std::size_t j = 0; j < degree; ++j) {
        companion(0, j) = -coeffs[degree - 1 - j] / lead;
    }
    for (std::size_t i = 1; i < degree; ++i) {
        companion(i, i - 1) = 1.0;
    }
    Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, false);
    const auto& eig = solver.eigenvalues();
    return {eig.data(), eig.data() + eig.size()};
}

namespace {

double min_modulus(const std::vector<double>& poly) {
    const auto roots = polynomial_roots(poly);
    double best = std::numeric_limits<double>::infinity();
    for (const auto& r : roots) {
        best = std::min(best, std::abs(r));
    }
    return best;
}

}  // namespace

double ar_min_root_modulus(std::span<const double> phi) {
    std::vector<double> poly{1.0};
    for (double c : phi) poly.push_back(-c);
    return min_modulus(poly);
}

double ma_min_root_modulus(std::span<const double> theta) {
    std::vector<double> poly{1.0};
    poly.insert(poly.end(), theta.begin(), theta.end());
    return min_modulus(poly);
}

bool is_stationary(std::span<const double> phi, double margin) {
    return ar_min_root_modulus(phi) > 1.0 + margin;
}

bool is_invertible(std::span<const double> theta, double margin) {
    return ma_min_root_modulus(theta) > 1.0 + margin;
}

std::vector<double> integrated_ar(std::span<const double> phi, std::size_t d) {
    std::vector<double> poly{1.0};
    for (double c : phi) poly.push_back(-c);
    for (std::size_t k = 0; k < d; ++k) {
        std::vector<double> next(poly.size() + 1, 0.0);
        for (std::size_t i = 0; i < poly.size(); ++i) {
            next[i] += poly[i];
            next[i + 1] -= poly[i];
        }
        poly = std::move(next);
    }
    std::vector<double> out(poly.size() - 1);
    for (std::size_t i = 1; i < poly.size(); ++i) {
        out[i - 1] = -poly[i];
    }
    return out;
}

}  // namespace bj
