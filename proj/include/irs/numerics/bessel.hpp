// SPDX-License-Identifier: Apache-2.0
#pragma once

/// Modified Bessel function of the second kind K_n(z) for integer order.
///
/// K_0 and K_1 come from their ascending series for z <= 2 and from Steed's
/// continued fraction (exponentially scaled) above. Higher orders use the
/// upward recurrence K_{n+1} = K_{n-1} + (2n/z) K_n, which is stable for K,
/// carried out on the ratios K_{i+1}/K_i so that log K_n never overflows.

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>

#include "irs/numerics/gamma.hpp"

namespace irs::numerics {

namespace detail {

inline constexpr double kBesselSeriesLimit = 2.0;

// e^z K_0(z), e^z K_1(z) for z > 0.
inline std::pair<double, double> bessel_k01_scaled(double z) {
  if (z <= kBesselSeriesLimit) {
    const double t = 0.25 * z * z;
    const double log_half = std::log(0.5 * z);
    // K_0 = -(ln(z/2) + gamma) I_0 + sum_k H_k t^k / (k!)^2
    // K_1 = 1/z + ln(z/2) I_1 - (z/4) sum_k [psi(k+1) + psi(k+2)] t^k / (k! (k+1)!)
    double i0 = 0.0;
    double i1 = 0.0;
    double s0 = 0.0;
    double s1 = 0.0;
    double term0 = 1.0;  // t^k / (k!)^2
    double term1 = 1.0;  // t^k / (k! (k+1)!)
    double h = 0.0;      // H_k
    for (int k = 0; k < 60; ++k) {
      if (k > 0) {
        term0 *= t / (static_cast<double>(k) * k);
        term1 *= t / (static_cast<double>(k) * (k + 1));
        h += 1.0 / k;
      }
      i0 += term0;
      i1 += term1;
      s0 += h * term0;
      const double psi_sum = 2.0 * h + 1.0 / (k + 1) - 2.0 * kEulerGamma;
      s1 += psi_sum * term1;
      if (term0 < 1e-18 * i0 && k > 2) break;
    }
    i1 *= 0.5 * z;
    const double k0 = -(log_half + kEulerGamma) * i0 + s0;
    const double k1 = 1.0 / z + log_half * i1 - 0.25 * z * s1;
    const double scale = std::exp(z);
    return {k0 * scale, k1 * scale};
  }
  // Steed's method (CF2) for order mu = 0.
  constexpr double a1 = 0.25;
  double b = 2.0 * (1.0 + z);
  double d = 1.0 / b;
  double h = d;
  double delh = d;
  double q1 = 0.0;
  double q2 = 1.0;
  double q = a1;
  double c = a1;
  double a = -a1;
  double s = 1.0 + q * delh;
  for (int i = 2; i < 100000; ++i) {
    a -= 2.0 * (i - 1);
    c = -a * c / i;
    const double qnew = (q1 - b * q2) / a;
    q1 = q2;
    q2 = qnew;
    q += c * qnew;
    b += 2.0;
    d = 1.0 / (b + a * d);
    delh = (b * d - 1.0) * delh;
    h += delh;
    const double dels = q * delh;
    s += dels;
    if (std::abs(dels / s) < 1e-17) break;
  }
  h *= a1;
  const double k0 = std::sqrt(std::numbers::pi / (2.0 * z)) / s;
  const double k1 = k0 * (z + 0.5 - h) / z;
  return {k0, k1};
}

inline void check_bessel_args(int n, double z, const char* who) {
  if (n < 0 || !(z > 0.0) || !std::isfinite(z)) {
    throw std::domain_error(std::string(who) + ": n >= 0 and finite z > 0 required");
  }
}

}  // namespace detail

/// ln K_n(z) for n >= 0, z > 0. Finite wherever the arguments are.
inline double log_bessel_k(int n, double z) {
  detail::check_bessel_args(n, z, "log_bessel_k");
  const auto [k0s, k1s] = detail::bessel_k01_scaled(z);
  double log_k = std::log(k0s) - z;
  if (n == 0) return log_k;
  double ratio = k1s / k0s;  // K_1 / K_0
  log_k += std::log(ratio);
  for (int i = 1; i < n; ++i) {
    ratio = 1.0 / ratio + 2.0 * i / z;  // K_{i+1} / K_i
    log_k += std::log(ratio);
  }
  return log_k;
}

/// e^z K_n(z). Throws std::overflow_error when the value is not representable.
inline double bessel_k_scaled(int n, double z) {
  detail::check_bessel_args(n, z, "bessel_k_scaled");
  const double lv = log_bessel_k(n, z) + z;
  if (lv > std::log(std::numeric_limits<double>::max())) {
    throw std::overflow_error("bessel_k_scaled: K_" + std::to_string(n) + " overflows at z = " +
                              std::to_string(z));
  }
  return std::exp(lv);
}

/// K_n(z). Throws std::overflow_error when the value is not representable.
inline double bessel_k(int n, double z) {
  detail::check_bessel_args(n, z, "bessel_k");
  const double lv = log_bessel_k(n, z);
  if (lv > std::log(std::numeric_limits<double>::max())) {
    throw std::overflow_error("bessel_k: K_" + std::to_string(n) + " overflows at z = " +
                              std::to_string(z));
  }
  return std::exp(lv);
}

}  // namespace irs::numerics
