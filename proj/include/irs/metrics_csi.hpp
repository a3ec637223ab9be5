// SPDX-License-Identifier: Apache-2.0
#pragma once

/// Average data rate and average decoding error probability when the surface
/// co-phases every path, under the moment-matched Gamma SNR model.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <utility>

#include "irs/channel.hpp"
#include "irs/fbl.hpp"
#include "irs/metrics_nocsi.hpp"
#include "irs/numerics.hpp"
#include "irs/system.hpp"

namespace irs::csi {

/// Quadrature of the finite-blocklength rate against the Gamma-model SNR density.
inline double adr_numerical_gamma(const SystemParams& p, const GammaMatch& m,
                                  const numerics::QuadratureSpec& spec = {}) {
  const double scale = nocsi::detail::rate_penalty(p);
  const auto integrand = [&](double x) {
    const double rate = std::log1p(x) / std::numbers::ln2 - std::sqrt(fbl::dispersion(x)) * scale;
    return rate * snr_pdf_csi(x, p, m);
  };
  return numerics::integrate_semi_infinite(integrand, spec);
}

inline double adr_numerical_gamma(const SystemParams& p) { return adr_numerical_gamma(p, gamma_match(p)); }

struct ClosedFormResult {
  double value;
  bool fallback;  // the hypergeometric form sat too close to a pole; value is quadrature
};

/// Distance to the sec/csc poles below which the closed form is abandoned.
inline constexpr double kPoleGuard = 1e-3;

/// Closed-form ADR: the log-weighted Gamma integral written with 2F3 and 1F2
/// terms, plus the constant high-SNR dispersion penalty. Each term is
/// normalized by 2 Gamma(a) (theta sqrt(rho))^a, a = kN, in log domain.
inline ClosedFormResult adr_closed_form(const SystemParams& p, const GammaMatch& m) {
  const double a = p.n_elements() * m.shape;
  const double half_pi_a = 0.5 * std::numbers::pi * a;
  const double sin_v = std::sin(half_pi_a);
  const double cos_v = std::cos(half_pi_a);
  if (std::abs(sin_v) < kPoleGuard || std::abs(cos_v) < kPoleGuard) {
    return {adr_numerical_gamma(p, m), true};
  }

  const double rho = p.rho();
  const double th = m.scale;
  const double ln2 = std::numbers::ln2;
  const double rt2 = rho * th * th;
  const double z = -1.0 / (4.0 * rt2);
  const double log_norm = ln2 + 0.5 * a * std::log(rho) + a * std::log(th) + numerics::ln_gamma(a);

  const double t1 = numerics::hyp_pfq({1.0, 1.0}, {2.0, 1.5 - 0.5 * a, 2.0 - 0.5 * a}, z) /
                    (ln2 * (a - 2.0) * (a - 1.0) * rt2);
  const double t2 = numerics::hyp_pfq({0.5 * a + 0.5}, {1.5, 0.5 * a + 1.5}, z) / cos_v *
                    std::exp(std::log(2.0 * std::numbers::pi) - 0.5 * std::log(rho) - std::log(ln2 * th * (a + 1.0)) -
                             log_norm);
  const double t3 = numerics::hyp_pfq({0.5 * a}, {0.5, 0.5 * a + 1.0}, z) / sin_v *
                    std::exp(std::log(2.0 * std::numbers::pi) - std::log(a * ln2) - log_norm);
  const double log_w = -0.5 * std::log(rho) - std::log(th);
  const double t4 = 2.0 * log_w / ln2;
  const double t5 = 2.0 * numerics::digamma(a) / ln2;
  return {t1 - t2 + t3 - t4 + t5 - nocsi::detail::rate_penalty(p), false};
}

/// High-SNR form with log(1 + x) ~ log(x):
/// (2/ln2)(psi(kN) - ln(1/(theta sqrt(rho)))) - Q^{-1}(eps)/(sqrt(M) ln2).
inline double adr_simplified(const SystemParams& p, const GammaMatch& m) {
  const double a = p.n_elements() * m.shape;
  const double log_w = -0.5 * std::log(p.rho()) - std::log(m.scale);
  return 2.0 / std::numbers::ln2 * (numerics::digamma(a) - log_w) - nocsi::detail::rate_penalty(p);
}

/// Asymptotic CSI-minus-no-CSI rate gap at equal N. Harmonic sums with the
/// non-integer upper limit kN - 1 are read as psi(kN) + gamma_E.
inline double rate_gap(const SystemParams& p) {
  const int n = p.n_elements();
  const double k = gamma_match(1.0, 1.0).shape;
  const double th0 = gamma_match(1.0, 1.0).scale;
  const double eg = numerics::kEulerGamma;
  return (2.0 * (numerics::digamma(k * n) + eg) - (numerics::digamma(n) + eg)) / std::numbers::ln2 +
         std::log2(th0 * th0);
}

/// Quadrature of the exact error probability against the Gamma-model density.
inline double adep_numerical(const SystemParams& p, const GammaMatch& m, const numerics::QuadratureSpec& spec = {}) {
  const int blk = p.blocklength();
  const double d = p.packet_bits();
  const auto integrand = [&](double x) { return fbl::decode_error_prob(x, blk, d) * snr_pdf_csi(x, p, m); };
  return std::clamp(numerics::integrate_semi_infinite(integrand, spec.with_abs_tol(0.0)), 0.0, 1.0);
}

/// Antiderivative of x^{kN/2} exp(-sqrt(x/rho)/theta):
/// -2 rho^{kN/2+1} theta^{kN+2} Gamma(kN + 2, sqrt(x/rho)/theta).
inline double f3(double x, const SystemParams& p, const GammaMatch& m) {
  if (x < 0.0) throw std::domain_error("f3: x >= 0 required");
  const double a = p.n_elements() * m.shape;
  const double u = std::sqrt(x / p.rho()) / m.scale;
  return -2.0 * std::exp((0.5 * a + 1.0) * std::log(p.rho()) + (a + 2.0) * std::log(m.scale) +
                         numerics::log_incomplete_gamma_upper(a + 2.0, u));
}

/// int_lo^hi x f(x) dx over the ramp, from the antiderivative f3 divided by
/// the density normalization 2 rho^{kN/2} theta^{kN} Gamma(kN). The difference
/// of upper incomplete gammas is taken through whichever regularized tail is
/// small, so it stays accurate when both limits sit deep in one tail.
inline double ramp_moment_closed_form(const SystemParams& p, const GammaMatch& m, const fbl::LinearizationParams& lp) {
  const auto [lo, hi] = nocsi::detail::ramp_limits(lp);
  const double a = p.n_elements() * m.shape;
  const double u_lo = std::sqrt(lo / p.rho()) / m.scale;
  const double u_hi = std::sqrt(hi / p.rho()) / m.scale;
  const double p_hi = numerics::gamma_p(a + 2.0, u_hi);
  const double diff = p_hi < 0.5 ? p_hi - numerics::gamma_p(a + 2.0, u_lo)
                                 : numerics::gamma_q(a + 2.0, u_lo) - numerics::gamma_q(a + 2.0, u_hi);
  return p.rho() * m.scale * m.scale * a * (a + 1.0) * diff;
}

/// The same moment by direct quadrature of x f(x).
inline double ramp_moment_quadrature(const SystemParams& p, const GammaMatch& m, const fbl::LinearizationParams& lp) {
  const auto [lo, hi] = nocsi::detail::ramp_limits(lp);
  return numerics::integrate([&](double x) { return x * snr_pdf_csi(x, p, m); }, lo, hi,
                             numerics::QuadratureSpec{}.with_abs_tol(0.0));
}

struct LinearizedResult {
  Probability prob;
  double moment_rel_diff;  // |closed form - quadrature| / |quadrature| for the ramp moment
  bool moment_fallback;    // closed-form moment disagreed beyond tolerance; quadrature used
};

/// Relative tolerance for accepting the closed-form ramp moment.
inline constexpr double kMomentTolerance = 1e-6;

/// CDF-ramp approximation with the closed-form ramp moment.
inline LinearizedResult adep_linearized(const SystemParams& p, const GammaMatch& m,
                                        const fbl::LinearizationParams& lp) {
  const auto [lo, hi] = nocsi::detail::ramp_limits(lp);
  const double f_lo = snr_cdf_csi(lo, p, m);
  const double f_hi = snr_cdf_csi(hi, p, m);
  const double closed = ramp_moment_closed_form(p, m, lp);
  const double quad = ramp_moment_quadrature(p, m, lp);
  const double rel = quad == 0.0 ? std::abs(closed) : std::abs(closed - quad) / std::abs(quad);
  const bool fallback = rel > kMomentTolerance;
  const double moment = fallback ? quad : closed;
  const double v = f_lo + (0.5 + lp.slope_mu * lp.center_x0) * (f_hi - f_lo) - lp.slope_mu * moment;
  return {Probability::from_raw(v), rel, fallback};
}

inline LinearizedResult adep_linearized(const SystemParams& p, const GammaMatch& m) {
  return adep_linearized(p, m, fbl::linearization_params(p.blocklength(), p.packet_bits()));
}

struct AsymptoticForms {
  Probability two_term;     // erfc ~ exp(-x^2) with both confluent terms kept
  Probability single_term;  // both terms folded into one with 2^{1.28564 kN - 2}
};

/// High-SNR ADEP. The two-term form keeps both 1F1 contributions; the single
/// term form assumes they are equal and folds theta into a numeric constant.
inline AsymptoticForms adep_asymptotic(const SystemParams& p, const GammaMatch& m) {
  const double a = p.n_elements() * m.shape;
  const double blk = p.blocklength();
  const double rs = p.rate_rs();
  const double z = -0.5 * blk * rs * rs;
  const double f_a = numerics::hyp1f1(0.25 * (2.0 - a), 0.5, z);
  const double f_b = numerics::hyp1f1(1.0 - 0.25 * a, 1.5, z);

  const double log_pre = (0.25 * a - 3.5) * std::log(2.0) - 0.25 * a * std::log(blk) - 0.5 * a * std::log(p.rho()) -
                         a * std::log(m.scale) - numerics::ln_gamma(a);
  const double term_a = std::exp(log_pre + 0.5 * std::log(2.0) + numerics::ln_gamma(0.25 * a)) * f_a;
  const double term_b =
      std::exp(log_pre + std::log(2.0 * std::sqrt(blk) * rs) + numerics::ln_gamma(0.25 * (a + 2.0))) * f_b;

  const double single = f_a * std::exp((1.28564 * a - 2.0) * std::log(2.0) - 0.25 * a * std::log(blk) +
                                        numerics::ln_gamma(0.25 * a) - numerics::ln_gamma(a) +
                                        (0.5 - a) * std::log(p.alpha_beta_rho()));
  return {Probability::from_raw(term_a + term_b), Probability::from_raw(single)};
}

/// Closed-form CSI/no-CSI ADEP ratio, scaling as (alpha beta rho)^{1 - kN/2}.
inline double adep_ratio(const SystemParams& p) {
  const int n = p.n_elements();
  if (n < 2) throw std::domain_error("adep_ratio: N >= 2 required");
  const double a = n * gamma_match(p).shape;
  const double blk = p.blocklength();
  const double rs = p.rate_rs();
  const double f_a = numerics::hyp1f1(0.25 * (2.0 - a), 0.5, -0.5 * blk * rs * rs);
  const double log_mag = std::log(0.199471) + numerics::ln_gamma(n) + (0.5 - 0.25 * a) * std::log(blk) +
                         numerics::ln_gamma(0.25 * a) + 0.891137 * a - 0.5 / blk - rs - numerics::ln_gamma(n - 1.0) -
                         numerics::ln_gamma(a) + (1.0 - 0.5 * a) * std::log(p.alpha_beta_rho());
  return f_a * std::exp(log_mag);
}

}  // namespace irs::csi
