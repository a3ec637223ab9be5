// SPDX-License-Identifier: Apache-2.0
#pragma once

/// Normal-approximation rate and error probability for short packets, and
/// the three-piece ramp that linearizes the error curve around its
/// half-probability point.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "irs/numerics/normal.hpp"

namespace irs::fbl {

/// Channel dispersion V(gamma) = 1 - (1 + gamma)^{-2}.
inline double dispersion(double gamma) {
  if (!(gamma >= 0.0)) throw std::domain_error("dispersion: gamma >= 0 required");
  if (std::isinf(gamma)) return 1.0;
  // gamma (2 + gamma) / (1 + gamma)^2 keeps full precision for tiny gamma.
  const double inv = 1.0 / (1.0 + gamma);
  return (gamma * inv) * ((2.0 + gamma) * inv);
}

/// Achievable rate in bits per channel use. Not clamped: it is negative when
/// the dispersion penalty exceeds log2(1 + gamma).
inline double achievable_rate(double gamma, int blocklength, double eps) {
  if (!(gamma >= 0.0)) throw std::domain_error("achievable_rate: gamma >= 0 required");
  if (blocklength < 1) throw std::domain_error("achievable_rate: blocklength >= 1 required");
  if (!(eps > 0.0 && eps < 1.0)) throw std::domain_error("achievable_rate: 0 < eps < 1 required");
  const double shannon = std::log1p(gamma) / std::numbers::ln2;
  return shannon - std::sqrt(dispersion(gamma) / blocklength) * numerics::q_inv(eps) / std::numbers::ln2;
}

/// achievable_rate floored at zero.
inline double achievable_rate_clamped(double gamma, int blocklength, double eps) {
  return std::max(0.0, achievable_rate(gamma, blocklength, eps));
}

/// Argument of Q in the error probability: sqrt(M/V) (ln(1+gamma) - D ln2 / M).
inline double error_exponent_arg(double gamma, int blocklength, double bits) {
  const double v = dispersion(gamma);
  return std::sqrt(blocklength / v) * (std::log1p(gamma) - bits * std::numbers::ln2 / blocklength);
}

/// Decoding error probability for D bits in M channel uses at SNR gamma.
/// gamma = 0 carries no information and returns 1.
inline double decode_error_prob(double gamma, int blocklength, double bits) {
  if (!(gamma >= 0.0)) throw std::domain_error("decode_error_prob: gamma >= 0 required");
  if (blocklength < 1) throw std::domain_error("decode_error_prob: blocklength >= 1 required");
  if (!(bits > 0.0)) throw std::domain_error("decode_error_prob: bits > 0 required");
  if (gamma == 0.0) return 1.0;
  if (std::isinf(gamma)) return 0.0;
  return numerics::q_func(error_exponent_arg(gamma, blocklength, bits));
}

struct LinearizationParams {
  double slope_mu;
  double center_x0;

  [[nodiscard]] double half_width() const { return 0.5 / slope_mu; }
  [[nodiscard]] double lower_knee() const { return center_x0 - half_width(); }
  [[nodiscard]] double upper_knee() const { return center_x0 + half_width(); }
};

/// Center x0 = 2^{D/M} - 1 and slope mu = sqrt(M / (2 pi (2^{2D/M} - 1))).
inline LinearizationParams linearization_params(int blocklength, double bits) {
  if (blocklength < 1) throw std::domain_error("linearization_params: blocklength >= 1 required");
  if (!(bits > 0.0)) throw std::domain_error("linearization_params: bits > 0 required");
  const double r = bits / blocklength;
  const double x0 = std::expm1(r * std::numbers::ln2);
  const double denom = std::expm1(2.0 * r * std::numbers::ln2);
  return {std::sqrt(blocklength / (2.0 * std::numbers::pi * denom)), x0};
}

/// Three-piece ramp approximation of decode_error_prob.
inline double linearized_q(double x, const LinearizationParams& lp) {
  if (x <= lp.lower_knee()) return 1.0;
  if (x >= lp.upper_knee()) return 0.0;
  return std::clamp(0.5 - lp.slope_mu * (x - lp.center_x0), 0.0, 1.0);
}

}  // namespace irs::fbl
