#pragma once

#include <complex>
#include <span>
#include <vector>

namespace bj {

/// Roots of c[0] + c[1] z + ... + c[m] z^m (trailing zero coefficients are dropped).
[[nodiscard]] std::vector<std::complex<double>> polynomial_roots(std::span<const double> coeffs);

/// Smallest root modulus of 1 - phi_1 z - ... - phi_p z^p; +inf when p == 0.
[[nodiscard]] double ar_min_root_modulus(std::span<const double> phi);

/// Smallest root modulus of 1 + theta_1 z + ... + theta_q z^q; +inf when q == 0.
[[nodiscard]] double ma_min_root_modulus(std::span<const double> theta);

/// All AR roots strictly outside the unit circle, with `margin` of slack.
[[nodiscard]] bool is_stationary(std::span<const double> phi, double margin = 0.0);
[[nodiscard]] bool is_invertible(std::span<const double> theta, double margin = 0.0);

/// Coefficients of (1 - B)^d phi(B) written as 1 - sum phi'_i B^i; returns phi'.
[[nodiscard]] std::vector<double> integrated_ar(std::span<const double> phi, std::size_t d);

}  // namespace bj
