// SPDX-License-Identifier: Apache-2.0
#pragma once

/// Average data rate and average decoding error probability when the surface
/// has no channel knowledge and applies zero phase.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <utility>

#include "irs/channel.hpp"
#include "irs/fbl.hpp"
#include "irs/numerics.hpp"
#include "irs/system.hpp"

namespace irs::nocsi {

namespace detail {

// Penalty Q^{-1}(eps) / (sqrt(M) ln 2) that the dispersion term tends to.
inline double rate_penalty(const SystemParams& p) {
  return numerics::q_inv(p.target_eps()) / (std::sqrt(static_cast<double>(p.blocklength())) * std::numbers::ln2);
}

// Integration limits of the ramp, lower knee clamped at zero.
inline std::pair<double, double> ramp_limits(const fbl::LinearizationParams& lp) {
  return {std::max(0.0, lp.lower_knee()), lp.upper_knee()};
}

}  // namespace detail

/// Average of the finite-blocklength rate over the SNR law, by quadrature.
inline double adr_numerical(const SystemParams& p, const numerics::QuadratureSpec& spec = {}) {
  const double scale = detail::rate_penalty(p);
  const auto integrand = [&](double x) {
    const double rate = std::log1p(x) / std::numbers::ln2 - std::sqrt(fbl::dispersion(x)) * scale;
    return rate * snr_pdf_nocsi(x, p);
  };
  return numerics::integrate_semi_infinite(integrand, spec);
}

/// Average Shannon capacity, i.e. the rate with the dispersion term dropped.
inline double adr_upper_bound(const SystemParams& p, const numerics::QuadratureSpec& spec = {}) {
  const auto integrand = [&](double x) { return std::log1p(x) / std::numbers::ln2 * snr_pdf_nocsi(x, p); };
  return numerics::integrate_semi_infinite(integrand, spec);
}

/// Upper bound minus the largest possible dispersion penalty (V <= 1).
inline double adr_lower_bound(const SystemParams& p, const numerics::QuadratureSpec& spec = {}) {
  return adr_upper_bound(p, spec) - detail::rate_penalty(p);
}

/// High-SNR rate: (H_{N-1} + ln(alpha beta rho) - Q^{-1}(eps)/sqrt(M) - 2 gamma_E) / ln 2.
inline double adr_asymptotic(const SystemParams& p) {
  return (numerics::harmonic(p.n_elements() - 1) + std::log(p.alpha_beta_rho()) -
          numerics::q_inv(p.target_eps()) / std::sqrt(p.blocklength()) - 2.0 * numerics::kEulerGamma) /
         std::numbers::ln2;
}

/// Average decoding error probability by quadrature. The absolute tolerance
/// is dropped so that tiny probabilities keep their relative accuracy.
inline double adep_numerical(const SystemParams& p, const numerics::QuadratureSpec& spec = {}) {
  const int m = p.blocklength();
  const double d = p.packet_bits();
  const auto integrand = [&](double x) { return fbl::decode_error_prob(x, m, d) * snr_pdf_nocsi(x, p); };
  return std::clamp(numerics::integrate_semi_infinite(integrand, spec.with_abs_tol(0.0)), 0.0, 1.0);
}

/// Ramp approximation F(lo) + (1/2 + mu x0)(F(hi) - F(lo)) - mu * int_lo^hi x f(x) dx,
/// with the exact CDF and a quadrature moment.
inline double adep_linearized(const SystemParams& p, const fbl::LinearizationParams& lp,
                              const numerics::QuadratureSpec& spec = {}) {
  const auto [lo, hi] = detail::ramp_limits(lp);
  const double f_lo = snr_cdf_nocsi(lo, p);
  const double f_hi = snr_cdf_nocsi(hi, p);
  const double moment =
      numerics::integrate([&](double x) { return x * snr_pdf_nocsi(x, p); }, lo, hi, spec.with_abs_tol(0.0));
  const double v = f_lo + (0.5 + lp.slope_mu * lp.center_x0) * (f_hi - f_lo) - lp.slope_mu * moment;
  return std::clamp(v, 0.0, 1.0);
}

inline double adep_linearized(const SystemParams& p, const numerics::QuadratureSpec& spec = {}) {
  return adep_linearized(p, fbl::linearization_params(p.blocklength(), p.packet_bits()), spec);
}

/// How the Bessel factor inside the ramp moment is handled by adep_approx.
enum class BesselForm {
  small_argument,  // K_{N-1}(z) replaced by its two leading ascending terms
  exact,           // exact K_{N-1}, integrated numerically (internal cross-check)
};

/// Closed-form ramp approximation. The moment term uses the two-term
/// small-argument expansion of K_{N-1}, which turns it into monomials:
///   mu [ (hi^2 - lo^2)/2 / ((N-1) s) - (hi^3 - lo^3)/3 / ((N-1)(N-2) s^2) ],  s = alpha beta rho.
inline double adep_approx(const SystemParams& p, BesselForm form = BesselForm::small_argument) {
  const int n = p.n_elements();
  if (n < 3) throw std::domain_error("adep_approx: N >= 3 required, the closed form contains (N-3)!");
  const auto lp = fbl::linearization_params(p.blocklength(), p.packet_bits());
  const auto [lo, hi] = detail::ramp_limits(lp);
  const double f_lo = snr_cdf_nocsi(lo, p);
  const double f_hi = snr_cdf_nocsi(hi, p);

  double moment = 0.0;
  if (form == BesselForm::exact) {
    moment = numerics::integrate([&](double x) { return x * snr_pdf_nocsi(x, p); }, lo, hi,
                                 numerics::QuadratureSpec{}.with_abs_tol(0.0));
  } else {
    const double s = p.alpha_beta_rho();
    const double d_f2 = (hi * hi - lo * lo) / 2.0;
    const double d_f1 = (hi * hi * hi - lo * lo * lo) / 3.0;
    moment = d_f2 / ((n - 1) * s) - d_f1 / ((n - 1.0) * (n - 2.0) * s * s);
  }
  return f_lo + (0.5 + lp.slope_mu * lp.center_x0) * (f_hi - f_lo) - lp.slope_mu * moment;
}

/// High-SNR error: sqrt(2 pi) e^{1/(2M) + r_s} / (2 sqrt(M) (N-1)) / (alpha beta rho).
inline double adep_asymptotic(const SystemParams& p) {
  const int n = p.n_elements();
  if (n < 2) throw std::domain_error("adep_asymptotic: N >= 2 required");
  const double m = p.blocklength();
  return std::sqrt(2.0 * std::numbers::pi) * std::exp(0.5 / m + p.rate_rs()) /
         (2.0 * std::sqrt(m) * (n - 1)) / p.alpha_beta_rho();
}

}  // namespace irs::nocsi
