// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace irs {

/// How the packet rate D/M enters the closed-form asymptotics. The exact
/// error expression always uses bits; `nats` makes the asymptotic formulas
/// consistent with it (r_s = D ln2 / M), `bits` uses D/M directly.
enum class RateConvention { nats, bits };

inline const char* to_string(RateConvention c) { return c == RateConvention::nats ? "nats" : "bits"; }

inline RateConvention parse_rate_convention(const std::string& s) {
  if (s == "nats") return RateConvention::nats;
  if (s == "bits") return RateConvention::bits;
  throw std::invalid_argument("unknown rate convention '" + s + "' (expected nats or bits)");
}

/// Scenario parameters for one IRS-assisted link. Immutable once built; the
/// `with_*` helpers return modified copies and re-validate.
class SystemParams {
 public:
  struct Fields {
    int n_elements = 20;
    double alpha = 1.0;
    double beta = 1.0;
    double rho = 1.0;
    int blocklength = 200;
    double target_eps = 1e-8;
    double packet_bits = 100.0;
    RateConvention rate_convention = RateConvention::nats;
  };

  SystemParams() : SystemParams(Fields{}) {}

  explicit SystemParams(const Fields& f) : f_(f) {
    if (f_.n_elements < 1) throw std::invalid_argument("SystemParams: n_elements >= 1 required");
    if (!(f_.alpha > 0.0) || !std::isfinite(f_.alpha)) {
      throw std::invalid_argument("SystemParams: alpha > 0 required");
    }
    if (!(f_.beta > 0.0) || !std::isfinite(f_.beta)) {
      throw std::invalid_argument("SystemParams: beta > 0 required");
    }
    if (!(f_.rho > 0.0) || !std::isfinite(f_.rho)) {
      throw std::invalid_argument("SystemParams: rho > 0 required");
    }
    if (f_.blocklength < 1) throw std::invalid_argument("SystemParams: blocklength >= 1 required");
    if (!(f_.target_eps > 0.0 && f_.target_eps < 1.0)) {
      throw std::invalid_argument("SystemParams: 0 < target_eps < 1 required");
    }
    if (!(f_.packet_bits > 0.0) || !std::isfinite(f_.packet_bits)) {
      throw std::invalid_argument("SystemParams: packet_bits > 0 required");
    }
  }

  [[nodiscard]] int n_elements() const { return f_.n_elements; }
  [[nodiscard]] double alpha() const { return f_.alpha; }
  [[nodiscard]] double beta() const { return f_.beta; }
  [[nodiscard]] double rho() const { return f_.rho; }
  [[nodiscard]] int blocklength() const { return f_.blocklength; }
  [[nodiscard]] double target_eps() const { return f_.target_eps; }
  [[nodiscard]] double packet_bits() const { return f_.packet_bits; }
  [[nodiscard]] RateConvention rate_convention() const { return f_.rate_convention; }
  [[nodiscard]] const Fields& fields() const { return f_; }

  /// alpha * beta * rho, the mean per-element cascaded SNR.
  [[nodiscard]] double alpha_beta_rho() const { return f_.alpha * f_.beta * f_.rho; }

  /// Packet rate used by the asymptotic formulas (see RateConvention).
  [[nodiscard]] double rate_rs() const {
    const double bits_per_use = f_.packet_bits / f_.blocklength;
    return f_.rate_convention == RateConvention::nats ? bits_per_use * std::numbers::ln2
                                                      : bits_per_use;
  }

  [[nodiscard]] SystemParams with_n(int n) const { return modified([n](Fields& f) { f.n_elements = n; }); }
  [[nodiscard]] SystemParams with_rho(double r) const { return modified([r](Fields& f) { f.rho = r; }); }
  [[nodiscard]] SystemParams with_alpha(double a) const { return modified([a](Fields& f) { f.alpha = a; }); }
  [[nodiscard]] SystemParams with_beta(double b) const { return modified([b](Fields& f) { f.beta = b; }); }
  [[nodiscard]] SystemParams with_blocklength(int m) const {
    return modified([m](Fields& f) { f.blocklength = m; });
  }
  [[nodiscard]] SystemParams with_eps(double e) const { return modified([e](Fields& f) { f.target_eps = e; }); }
  [[nodiscard]] SystemParams with_bits(double d) const { return modified([d](Fields& f) { f.packet_bits = d; }); }
  [[nodiscard]] SystemParams with_convention(RateConvention c) const {
    return modified([c](Fields& f) { f.rate_convention = c; });
  }

  /// Transmit SNR from a dB value.
  static double rho_from_db(double snr_db) { return std::pow(10.0, snr_db / 10.0); }

 private:
  template <class Fn>
  SystemParams modified(Fn&& fn) const {
    Fields copy = f_;
    fn(copy);
    return SystemParams(copy);
  }

  Fields f_;
};

/// A probability produced by an approximation that can stray outside [0, 1].
/// The value is clamped and the event recorded rather than hidden.
struct Probability {
  double value;
  double raw;
  bool clamped;

  static Probability from_raw(double x) {
    const double v = std::clamp(x, 0.0, 1.0);
    return {v, x, v != x};
  }
};

enum class CsiMode { csi, nocsi };

inline const char* to_string(CsiMode m) { return m == CsiMode::csi ? "csi" : "nocsi"; }

inline CsiMode parse_csi_mode(const std::string& s) {
  if (s == "csi") return CsiMode::csi;
  if (s == "nocsi") return CsiMode::nocsi;
  throw std::invalid_argument("unknown mode '" + s + "' (expected csi or nocsi)");
}

}  // namespace irs
