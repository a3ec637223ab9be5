// SPDX-License-Identifier: Apache-2.0
#pragma once

/// SNR distributions of the reflected link and per-realization geometry.
///
/// Without CSI the reflector applies zero phase and the cascaded gain
/// |sum g_n h_n|^2 follows a K-type law. With CSI the phases co-align every
/// path, the SNR becomes rho * (sum |g_n||h_n|)^2, and each |g_n||h_n| is
/// replaced by a moment-matched Gamma variable.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "irs/numerics.hpp"
#include "irs/system.hpp"

namespace irs {

/// Coefficients of f(x) = A x^{(N-1)/2} K_{N-1}(2 sqrt(B x)).
struct NoCsiDist {
  double a_coef;
  double b_coef;
  double log_a_coef;

  static NoCsiDist from(const SystemParams& p) {
    const int n = p.n_elements();
    const double s = p.alpha_beta_rho();
    const double log_a = std::numbers::ln2 - numerics::ln_gamma(n) - 0.5 * (n + 1) * std::log(s);
    return {std::exp(log_a), 1.0 / s, log_a};
  }
};

/// Gamma shape/scale fitted to |g_n||h_n| by matching mean and variance.
struct GammaMatch {
  double shape;
  double scale;
};

inline GammaMatch gamma_match(double alpha, double beta) {
  if (!(alpha > 0.0) || !(beta > 0.0)) throw std::domain_error("gamma_match: alpha, beta > 0 required");
  constexpr double pi2 = std::numbers::pi * std::numbers::pi;
  return {pi2 / (16.0 - pi2), (16.0 - pi2) / (4.0 * std::numbers::pi) * std::sqrt(alpha * beta)};
}

inline GammaMatch gamma_match(const SystemParams& p) { return gamma_match(p.alpha(), p.beta()); }

namespace detail {

// Density of s * |sum g_n h_n|^2 / (alpha beta) for unit-variance channels,
// i.e. the no-CSI law with mean-scale s = rho alpha beta.
inline double k_density(double x, int n, double s) {
  if (x < 0.0) return 0.0;
  if (x == 0.0) {
    if (n == 1) return std::numeric_limits<double>::infinity();
    return 1.0 / ((n - 1) * s);
  }
  const double log_a = std::numbers::ln2 - numerics::ln_gamma(n) - 0.5 * (n + 1) * std::log(s);
  const double z = 2.0 * std::sqrt(x / s);
  return std::exp(log_a + 0.5 * (n - 1) * std::log(x) + numerics::log_bessel_k(n - 1, z));
}

// 1 - (2/Gamma(N)) t^{N/2} K_N(2 sqrt t). For t <= 1 the ascending series of
// K_N is expanded so that the leading Gamma(N)/2 cancels exactly.
inline double k_cdf(double x, int n, double s) {
  if (!(x > 0.0)) return 0.0;
  if (std::isinf(x)) return 1.0;
  const double t = x / s;
  if (t > 1.0) {
    const double tail = std::exp(std::log(2.0) - numerics::ln_gamma(n) + 0.5 * n * std::log(t) +
                                 numerics::log_bessel_k(n, 2.0 * std::sqrt(t)));
    return std::clamp(1.0 - tail, 0.0, 1.0);
  }
  // Finite part: sum_{k=1}^{N-1} Gamma(N-k) / (Gamma(N) k!) (-t)^k.
  double finite = 0.0;
  double c = 1.0;
  for (int k = 1; k <= n - 1; ++k) {
    c *= -t / (static_cast<double>(n - k) * k);
    finite += c;
  }
  // Logarithmic and digamma parts share the factor t^{N+k} / (k! (N+k)! Gamma(N)).
  const double log_t = std::log(t);
  double base = std::exp(n * log_t - numerics::ln_gamma(n + 1.0) - numerics::ln_gamma(n));
  double s1 = 0.0;
  double s2 = 0.0;
  double psi_a = -numerics::kEulerGamma;                          // psi(k + 1)
  double psi_b = -numerics::kEulerGamma + numerics::harmonic(n);  // psi(N + k + 1)
  for (int k = 0; k < 200; ++k) {
    s1 += base;
    s2 += (psi_a + psi_b) * base;
    base *= t / ((k + 1.0) * (n + k + 1.0));
    psi_a += 1.0 / (k + 1.0);
    psi_b += 1.0 / (n + k + 1.0);
    if (base < 1e-18 * std::abs(s1)) break;
  }
  const double sign = (n % 2 == 0) ? 1.0 : -1.0;  // (-1)^N
  const double cdf = -(finite - sign * log_t * s1 + sign * s2);
  return std::clamp(cdf, 0.0, 1.0);
}

}  // namespace detail

/// Density of the cascaded gain H = |sum g_n h_n|^2.
inline double cascade_pdf(double x, const SystemParams& p) {
  if (x < 0.0) throw std::domain_error("cascade_pdf: x >= 0 required");
  return detail::k_density(x, p.n_elements(), p.alpha() * p.beta());
}

/// Density of the received SNR rho * H without CSI.
inline double snr_pdf_nocsi(double x, const SystemParams& p) {
  if (x < 0.0) throw std::domain_error("snr_pdf_nocsi: x >= 0 required");
  return detail::k_density(x, p.n_elements(), p.alpha_beta_rho());
}

/// Closed-form CDF of the received SNR without CSI.
inline double snr_cdf_nocsi(double x, const SystemParams& p) {
  if (x < 0.0) throw std::domain_error("snr_cdf_nocsi: x >= 0 required");
  return detail::k_cdf(x, p.n_elements(), p.alpha_beta_rho());
}

/// Gamma(k, theta) density of a single |g_n||h_n|.
inline double xi_pdf(double x, const GammaMatch& m) {
  if (x < 0.0) throw std::domain_error("xi_pdf: x >= 0 required");
  if (x == 0.0) {
    if (m.shape < 1.0) return std::numeric_limits<double>::infinity();
    return m.shape == 1.0 ? 1.0 / m.scale : 0.0;
  }
  return std::exp((m.shape - 1.0) * std::log(x) - x / m.scale - numerics::ln_gamma(m.shape) -
                  m.shape * std::log(m.scale));
}

inline double xi_cdf(double x, const GammaMatch& m) {
  if (x < 0.0) throw std::domain_error("xi_cdf: x >= 0 required");
  return numerics::gamma_p(m.shape, x / m.scale);
}

/// Approximate CDF of rho * (sum |g_n||h_n|)^2 under the Gamma fit.
inline double snr_cdf_csi(double x, const SystemParams& p, const GammaMatch& m) {
  if (x < 0.0) throw std::domain_error("snr_cdf_csi: x >= 0 required");
  return numerics::gamma_p(p.n_elements() * m.shape, std::sqrt(x / p.rho()) / m.scale);
}

/// ln of the approximate CSI SNR density.
inline double log_snr_pdf_csi(double x, const SystemParams& p, const GammaMatch& m) {
  const double a = p.n_elements() * m.shape;
  return (0.5 * a - 1.0) * std::log(x) - std::sqrt(x / p.rho()) / m.scale - std::numbers::ln2 -
         numerics::ln_gamma(a) - a * std::log(m.scale) - 0.5 * a * std::log(p.rho());
}

inline double snr_pdf_csi(double x, const SystemParams& p, const GammaMatch& m) {
  if (x < 0.0) throw std::domain_error("snr_pdf_csi: x >= 0 required");
  const double a = p.n_elements() * m.shape;
  if (x == 0.0) {
    if (a < 2.0) return std::numeric_limits<double>::infinity();
    return a == 2.0 ? 1.0 / (2.0 * m.scale * m.scale * p.rho()) : 0.0;
  }
  return std::exp(log_snr_pdf_csi(x, p, m));
}

/// One draw of the two hops plus the phase vector applied at the surface.
class ChannelRealization {
 public:
  using Vec = std::vector<std::complex<double>>;

  ChannelRealization(Vec h, Vec g, std::vector<double> phases)
      : h_(std::move(h)), g_(std::move(g)), phases_(std::move(phases)) {
    if (h_.size() != g_.size() || h_.size() != phases_.size()) {
      throw std::invalid_argument("ChannelRealization: h, g and phases must share length N");
    }
    for (auto& ph : phases_) ph = wrap_phase(ph);
  }

  ChannelRealization(Vec h, Vec g) : ChannelRealization(h, g, std::vector<double>(h.size(), 0.0)) {}

  [[nodiscard]] std::size_t size() const { return h_.size(); }
  [[nodiscard]] const Vec& h() const { return h_; }
  [[nodiscard]] const Vec& g() const { return g_; }
  [[nodiscard]] const std::vector<double>& phases() const { return phases_; }

  [[nodiscard]] ChannelRealization with_phases(std::vector<double> phases) const {
    return {h_, g_, std::move(phases)};
  }

  /// Maps any angle into [0, 2 pi).
  static double wrap_phase(double phi) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    double w = std::fmod(phi, two_pi);
    if (w < 0.0) w += two_pi;
    if (w >= two_pi) w = 0.0;
    return w;
  }

 private:
  Vec h_;
  Vec g_;
  std::vector<double> phases_;
};

/// Phases that co-align every cascaded path: phi_n = -arg g_n - arg h_n.
inline std::vector<double> optimal_phases(const ChannelRealization& r) {
  std::vector<double> out(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) {
    const auto g = r.g()[i];
    const auto h = r.h()[i];
    out[i] = (g == 0.0 || h == 0.0) ? 0.0 : ChannelRealization::wrap_phase(-std::arg(g) - std::arg(h));
  }
  return out;
}

/// rho |sum g_n h_n e^{j phi_n}|^2 with the realization's stored phases.
inline double phased_snr(const ChannelRealization& r, double rho) {
  std::complex<double> acc{0.0, 0.0};
  for (std::size_t i = 0; i < r.size(); ++i) {
    acc += r.g()[i] * r.h()[i] * std::polar(1.0, r.phases()[i]);
  }
  return rho * std::norm(acc);
}

/// Received SNR under the given phase policy. Without CSI the surface is the
/// identity and the link is rho |g^H h|^2; with CSI the optimal phases give
/// rho (sum |g_n||h_n|)^2.
inline double realized_snr(const ChannelRealization& r, CsiMode mode, double rho) {
  if (mode == CsiMode::nocsi) {
    std::complex<double> acc{0.0, 0.0};
    for (std::size_t i = 0; i < r.size(); ++i) acc += std::conj(r.g()[i]) * r.h()[i];
    return rho * std::norm(acc);
  }
  double amp = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i) amp += std::abs(r.g()[i]) * std::abs(r.h()[i]);
  return rho * amp * amp;
}

}  // namespace irs
