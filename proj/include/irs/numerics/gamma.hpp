// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace irs::numerics {

inline constexpr double kEulerGamma = std::numbers::egamma;

namespace detail {

// Bernoulli-based coefficients of the Stirling series for ln Gamma,
// B_{2k} / (2k (2k - 1)).
inline constexpr std::array<double, 8> kStirling = {
    1.0 / 12.0,         -1.0 / 360.0,        1.0 / 1260.0,      -1.0 / 1680.0,
    1.0 / 1188.0,       -691.0 / 360360.0,   1.0 / 156.0,       -3617.0 / 122400.0};

// B_{2k} / (2k) for the digamma asymptotic series.
inline constexpr std::array<double, 8> kDigammaAsym = {
    1.0 / 12.0,  -1.0 / 120.0,      1.0 / 252.0,  -1.0 / 240.0,
    1.0 / 132.0, -691.0 / 32760.0,  1.0 / 12.0,   -3617.0 / 8160.0};

inline constexpr double kAsymptoticFloor = 15.0;

}  // namespace detail

/// Natural logarithm of Gamma(x) for x > 0.
inline double ln_gamma(double x) {
  if (!(x > 0.0)) throw std::domain_error("ln_gamma: x > 0 required");
  if (std::isinf(x)) return x;
  if (x == 1.0 || x == 2.0) return 0.0;
  double shift = 0.0;
  double prod = 1.0;
  while (x < detail::kAsymptoticFloor) {
    prod *= x;
    // Keep the running product away from overflow for tiny x.
    if (prod > 1e250) {
      shift += std::log(prod);
      prod = 1.0;
    }
    x += 1.0;
  }
  shift += std::log(prod);
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  double series = 0.0;
  double p = inv;
  for (const double c : detail::kStirling) {
    series += c * p;
    p *= inv2;
  }
  constexpr double half_log_2pi = 0.91893853320467274178032973640562;
  return (x - 0.5) * std::log(x) - x + half_log_2pi + series - shift;
}

/// Gamma(x) for x > 0; overflows to +inf beyond x ~ 171.6.
inline double gamma_fn(double x) {
  if (!(x > 0.0)) throw std::domain_error("gamma_fn: x > 0 required");
  return std::tgamma(x);
}

/// Digamma psi(x) = d/dx ln Gamma(x) for x > 0.
inline double digamma(double x) {
  if (!(x > 0.0)) throw std::domain_error("digamma: x > 0 required");
  double acc = 0.0;
  while (x < detail::kAsymptoticFloor) {
    acc -= 1.0 / x;
    x += 1.0;
  }
  const double inv2 = 1.0 / (x * x);
  double series = 0.0;
  double p = inv2;
  for (const double c : detail::kDigammaAsym) {
    series += c * p;
    p *= inv2;
  }
  return acc + std::log(x) - 0.5 / x - series;
}

/// Harmonic number H_n = 1 + 1/2 + ... + 1/n (H_0 = 0).
inline double harmonic(int n) {
  double s = 0.0;
  for (int k = n; k >= 1; --k) s += 1.0 / k;
  return s;
}

namespace detail {

// Series for P(a, x); use for x < a + 1.
inline double gamma_p_series(double a, double x) {
  double term = 1.0 / a;
  double sum = term;
  for (int n = 1; n < 100000; ++n) {
    term *= x / (a + n);
    sum += term;
    if (std::abs(term) < std::abs(sum) * 1e-17) {
      return sum * std::exp(-x + a * std::log(x) - ln_gamma(a));
    }
  }
  throw std::runtime_error("incomplete gamma series failed to converge");
}

// Modified Lentz continued fraction for ln Q(a, x); use for x >= a + 1.
inline double log_gamma_q_fraction(double a, double x) {
  constexpr double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 100000; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < 1e-16) {
      return -x + a * std::log(x) - ln_gamma(a) + std::log(h);
    }
  }
  throw std::runtime_error("incomplete gamma continued fraction failed to converge");
}

inline double gamma_q_fraction(double a, double x) { return std::exp(log_gamma_q_fraction(a, x)); }

inline void check_incomplete_args(double a, double x, const char* who) {
  if (!(a > 0.0) || !(x >= 0.0)) {
    throw std::domain_error(std::string(who) + ": a > 0 and x >= 0 required");
  }
}

}  // namespace detail

/// Regularized lower incomplete gamma P(a, x) = gamma(a, x) / Gamma(a).
inline double gamma_p(double a, double x) {
  detail::check_incomplete_args(a, x, "gamma_p");
  if (x == 0.0) return 0.0;
  if (std::isinf(x)) return 1.0;
  return x < a + 1.0 ? detail::gamma_p_series(a, x) : 1.0 - detail::gamma_q_fraction(a, x);
}

/// Regularized upper incomplete gamma Q(a, x) = Gamma(a, x) / Gamma(a).
inline double gamma_q(double a, double x) {
  detail::check_incomplete_args(a, x, "gamma_q");
  if (x == 0.0) return 1.0;
  if (std::isinf(x)) return 0.0;
  return x < a + 1.0 ? 1.0 - detail::gamma_p_series(a, x) : detail::gamma_q_fraction(a, x);
}

/// Lower incomplete gamma function gamma(a, b) = int_0^b t^{a-1} e^{-t} dt.
inline double incomplete_gamma_lower(double a, double b) {
  detail::check_incomplete_args(a, b, "incomplete_gamma_lower");
  return gamma_p(a, b) * std::exp(ln_gamma(a));
}

/// Upper incomplete gamma function Gamma(a, x) = int_x^inf t^{a-1} e^{-t} dt.
inline double incomplete_gamma_upper(double a, double x) {
  detail::check_incomplete_args(a, x, "incomplete_gamma_upper");
  return gamma_q(a, x) * std::exp(ln_gamma(a));
}

/// ln Gamma(a, x), finite where Gamma(a, x) itself would overflow or underflow.
inline double log_incomplete_gamma_upper(double a, double x) {
  detail::check_incomplete_args(a, x, "log_incomplete_gamma_upper");
  if (x < a + 1.0) return std::log1p(-detail::gamma_p_series(a, x)) + ln_gamma(a);
  return detail::log_gamma_q_fraction(a, x) + ln_gamma(a);
}

}  // namespace irs::numerics
