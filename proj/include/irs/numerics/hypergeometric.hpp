// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace irs::numerics {

class NonConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct HypergeometricOptions {
  long max_terms = 1'000'000;
  double stop_ratio = 1e-15;
};

/// Generalized hypergeometric series pFq(a; b; z), summed through the term
/// ratio t_{n+1}/t_n = prod(a_i + n) / prod(b_j + n) * z / (n + 1).
///
/// The stopping test is only armed once n has passed every negative
/// parameter, since before that point the terms can still grow.
inline double hyp_pfq(std::span<const double> a, std::span<const double> b, double z,
                      const HypergeometricOptions& opt = {}) {
  for (const double bj : b) {
    if (bj <= 0.0 && bj == std::floor(bj)) {
      throw std::domain_error("hyp_pfq: b parameter is a nonpositive integer");
    }
  }
  if (a.size() > b.size() + 1) {
    throw std::domain_error("hyp_pfq: series diverges for p > q + 1");
  }
  if (a.size() == b.size() + 1 && std::abs(z) >= 1.0) {
    throw std::domain_error("hyp_pfq: |z| < 1 required when p = q + 1");
  }
  if (z == 0.0) return 1.0;

  double arm_after = 0.0;
  for (const double p : a) arm_after = std::max(arm_after, -p);
  for (const double p : b) arm_after = std::max(arm_after, -p);

  long double term = 1.0L;
  long double sum = 1.0L;
  int quiet = 0;
  for (long n = 0; n < opt.max_terms; ++n) {
    long double ratio = static_cast<long double>(z) / static_cast<long double>(n + 1);
    for (const double p : a) ratio *= static_cast<long double>(p) + n;
    for (const double p : b) ratio /= static_cast<long double>(p) + n;
    term *= ratio;
    sum += term;
    if (term == 0.0L) return static_cast<double>(sum);  // terminating series
    if (static_cast<double>(n) > arm_after &&
        std::abs(term) < opt.stop_ratio * std::abs(sum)) {
      // Two quiet terms in a row guard against a single accidental near-zero.
      if (++quiet >= 2) return static_cast<double>(sum);
    } else {
      quiet = 0;
    }
  }
  throw NonConvergenceError("hyp_pfq: no convergence within " + std::to_string(opt.max_terms) +
                            " terms");
}

inline double hyp_pfq(std::initializer_list<double> a, std::initializer_list<double> b, double z,
                      const HypergeometricOptions& opt = {}) {
  const std::vector<double> av(a);
  const std::vector<double> bv(b);
  return hyp_pfq(std::span<const double>(av), std::span<const double>(bv), z, opt);
}

/// Kummer's confluent function 1F1(a; b; z). Negative arguments go through
/// Kummer's transformation e^z 1F1(b - a; b; -z), whose terms do not alternate.
inline double hyp1f1(double a, double b, double z, const HypergeometricOptions& opt = {}) {
  if (z < 0.0) return std::exp(z) * hyp_pfq({b - a}, {b}, -z, opt);
  return hyp_pfq({a}, {b}, z, opt);
}

}  // namespace irs::numerics
