// SPDX-License-Identifier: Apache-2.0
// Randomized properties. Inputs come from a fixed-seed generator so every
// run checks the same cases; failures print the case that broke.
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <sstream>
#include <vector>

#include <gtest/gtest.h>

#include "irs/irs.hpp"

namespace nm = irs::numerics;
using irs::CsiMode;
using irs::SystemParams;

namespace {

// SplitMix64 with a few shaped draws.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : s_(seed) {}

  std::uint64_t bits() {
    std::uint64_t z = (s_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  double unit() { return static_cast<double>(bits() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }
  double log_uniform(double lo, double hi) { return std::exp(uniform(std::log(lo), std::log(hi))); }
  int integer(int lo, int hi) { return lo + static_cast<int>(bits() % static_cast<std::uint64_t>(hi - lo + 1)); }

  SystemParams params(int n_lo = 1, int n_hi = 40) {
    SystemParams::Fields f;
    f.n_elements = integer(n_lo, n_hi);
    f.alpha = log_uniform(0.2, 5.0);
    f.beta = log_uniform(0.2, 5.0);
    f.rho = std::pow(10.0, uniform(-2.0, 3.0));
    f.blocklength = integer(50, 1000);
    f.target_eps = log_uniform(1e-9, 1e-2);
    f.packet_bits = uniform(0.05, 1.5) * f.blocklength;
    return SystemParams(f);
  }

 private:
  std::uint64_t s_;
};

std::string describe(const SystemParams& p) {
  std::ostringstream o;
  o << "N=" << p.n_elements() << " alpha=" << p.alpha() << " beta=" << p.beta() << " rho=" << p.rho()
    << " M=" << p.blocklength() << " eps=" << p.target_eps() << " D=" << p.packet_bits();
  return o.str();
}

}  // namespace

TEST(SpecialFunctionProperties, DigammaRecurrenceAndLnGamma) {
  Gen g(1);
  for (int i = 0; i < 500; ++i) {
    const double x = g.log_uniform(1e-3, 1e3);
    EXPECT_NEAR(nm::digamma(x + 1.0) - nm::digamma(x), 1.0 / x, 1e-12 * (1.0 + 1.0 / x)) << x;
    EXPECT_NEAR(nm::ln_gamma(x + 1.0) - nm::ln_gamma(x), std::log(x), 1e-12 * (1.0 + std::abs(nm::ln_gamma(x))))
        << x;
  }
}

TEST(SpecialFunctionProperties, IncompleteGammaComplement) {
  Gen g(2);
  for (int i = 0; i < 500; ++i) {
    const double a = g.log_uniform(0.05, 200.0);
    const double x = g.log_uniform(1e-4, 500.0);
    const double p = nm::gamma_p(a, x);
    const double q = nm::gamma_q(a, x);
    EXPECT_GE(p, 0.0);
    EXPECT_LE(p, 1.0);
    EXPECT_NEAR(p + q, 1.0, 1e-12) << a << " " << x;
    EXPECT_LE(nm::gamma_p(a, x), nm::gamma_p(a, x * 1.01) + 1e-15);
  }
}

TEST(SpecialFunctionProperties, BesselRecurrence) {
  Gen g(3);
  for (int i = 0; i < 500; ++i) {
    const int n = g.integer(1, 30);
    const double z = g.log_uniform(1e-2, 100.0);
    if (nm::log_bessel_k(n + 1, z) > 700.0) continue;
    const double lhs = nm::bessel_k(n + 1, z);
    const double rhs = nm::bessel_k(n - 1, z) + 2.0 * n / z * nm::bessel_k(n, z);
    EXPECT_NEAR(lhs / rhs, 1.0, 1e-12) << n << " " << z;
    EXPECT_LT(nm::bessel_k(n, z), nm::bessel_k(n + 1, z));
  }
}

TEST(SpecialFunctionProperties, QInverseRoundTrip) {
  Gen g(4);
  for (int i = 0; i < 1000; ++i) {
    const double x = g.uniform(-8.0, 37.0);
    const double q = nm::q_func(x);
    if (q <= 0.0 || q >= 1.0) continue;
    // Near q = 1 the inverse is ill-conditioned: dx = dq / phi(x).
    const double phi = std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
    const double tol = 1e-9 * (1.0 + std::abs(x)) + 4.0 * std::numeric_limits<double>::epsilon() * q / phi;
    EXPECT_NEAR(nm::q_inv(q), x, tol) << x;
  }
}

TEST(SpecialFunctionProperties, KummerTransformation) {
  Gen g(5);
  for (int i = 0; i < 300; ++i) {
    const double a = g.uniform(-5.0, 5.0);
    const double b = g.uniform(0.3, 6.0);
    const double z = g.uniform(-15.0, 15.0);
    const double lhs = nm::hyp1f1(a, b, z);
    const double rhs = std::exp(z) * nm::hyp1f1(b - a, b, -z);
    EXPECT_NEAR(lhs, rhs, 1e-9 * (std::abs(lhs) + std::exp(z) * 1e-3 + 1.0)) << a << " " << b << " " << z;
  }
}

TEST(DistributionProperties, CdfsAreMonotoneProbabilities) {
  Gen g(6);
  for (int i = 0; i < 200; ++i) {
    const auto p = g.params();
    const auto m = irs::gamma_match(p);
    double prev_n = 0.0, prev_c = 0.0;
    for (double x = 1e-6; x < 1e6; x *= 2.0) {
      const double fn = irs::snr_cdf_nocsi(x, p);
      const double fc = irs::snr_cdf_csi(x, p, m);
      ASSERT_GE(fn, prev_n - 1e-15) << describe(p) << " x=" << x;
      ASSERT_GE(fc, prev_c - 1e-15) << describe(p) << " x=" << x;
      ASSERT_LE(fn, 1.0);
      ASSERT_LE(fc, 1.0);
      prev_n = fn;
      prev_c = fc;
    }
  }
}

TEST(DistributionProperties, DensitiesIntegrateToCdf) {
  Gen g(7);
  for (int i = 0; i < 30; ++i) {
    const auto p = g.params();
    const auto m = irs::gamma_match(p);
    const double x = p.alpha_beta_rho() * p.n_elements() * g.log_uniform(0.1, 10.0);
    const double in = nm::integrate([&](double t) { return irs::snr_pdf_nocsi(t, p); }, 0.0, x);
    const double ic = nm::integrate([&](double t) { return irs::snr_pdf_csi(t, p, m); }, 0.0, x);
    EXPECT_NEAR(in, irs::snr_cdf_nocsi(x, p), 1e-8) << describe(p);
    EXPECT_NEAR(ic, irs::snr_cdf_csi(x, p, m), 1e-8) << describe(p);
  }
}

TEST(RateProperties, PenaltyAndMonotonicity) {
  Gen g(8);
  for (int i = 0; i < 2000; ++i) {
    const double x = g.log_uniform(1e-4, 1e6);
    const int m = g.integer(10, 5000);
    const double eps = g.log_uniform(1e-12, 0.49);
    const double r = irs::fbl::achievable_rate(x, m, eps);
    EXPECT_LT(r, std::log2(1.0 + x));
    // The unclamped rate dips below zero near x = 0 and is not monotone there.
    EXPECT_LE(irs::fbl::achievable_rate_clamped(x, m, eps), irs::fbl::achievable_rate_clamped(x * 1.1, m, eps));
    if (r > 0.0) {
      EXPECT_LE(r, irs::fbl::achievable_rate(x * 1.1, m, eps)) << x << " " << m << " " << eps;
    }
    EXPECT_LE(r, irs::fbl::achievable_rate(x, m, eps * 1.1));
    const double d = g.uniform(1.0, 2.0 * m);
    const double e = irs::fbl::decode_error_prob(x, m, d);
    EXPECT_GE(e, 0.0);
    EXPECT_LE(e, 1.0);
    EXPECT_GE(e, irs::fbl::decode_error_prob(x * 1.1, m, d));
    EXPECT_LE(e, irs::fbl::decode_error_prob(x, m, d * 1.1));
  }
}

TEST(RateProperties, RampIsClampedAndNonincreasing) {
  Gen g(9);
  for (int i = 0; i < 200; ++i) {
    const auto lp = irs::fbl::linearization_params(g.integer(10, 2000), g.uniform(1.0, 500.0));
    double prev = 1.0;
    for (double x = 0.0; x < 4.0 * lp.upper_knee() + 1.0; x += lp.half_width() / 8.0) {
      const double v = irs::fbl::linearized_q(x, lp);
      ASSERT_GE(v, 0.0);
      ASSERT_LE(v, prev);
      prev = v;
    }
  }
}

TEST(MetricProperties, AdrBoundOrderingAndCsiGain) {
  Gen g(10);
  for (int i = 0; i < 25; ++i) {
    const auto p = g.params(2, 40);
    const double num = irs::nocsi::adr_numerical(p);
    EXPECT_LE(irs::nocsi::adr_lower_bound(p), num + 1e-9) << describe(p);
    EXPECT_LE(num, irs::nocsi::adr_upper_bound(p) + 1e-9) << describe(p);
    EXPECT_GT(irs::csi::adr_numerical_gamma(p), num) << describe(p);
    EXPECT_NEAR(irs::nocsi::adr_asymptotic(p.with_rho(2.0 * p.rho())) - irs::nocsi::adr_asymptotic(p), 1.0, 1e-9);
  }
}

TEST(MetricProperties, AdepMethodsStayInUnitInterval) {
  Gen g(11);
  for (int i = 0; i < 25; ++i) {
    const auto p = g.params(3, 40);
    const auto m = irs::gamma_match(p);
    for (const double v : {irs::nocsi::adep_numerical(p), irs::nocsi::adep_linearized(p), irs::csi::adep_numerical(p, m),
                           irs::csi::adep_linearized(p, m).prob.value}) {
      EXPECT_GE(v, 0.0) << describe(p);
      EXPECT_LE(v, 1.0) << describe(p);
    }
    EXPECT_LE(irs::csi::adep_numerical(p, m), irs::nocsi::adep_numerical(p) + 1e-12) << describe(p);
  }
}

TEST(MetricProperties, RampMomentClosedFormMatchesQuadrature) {
  Gen g(12);
  for (int i = 0; i < 40; ++i) {
    const auto p = g.params();
    const auto m = irs::gamma_match(p);
    const auto lp = irs::fbl::linearization_params(p.blocklength(), p.packet_bits());
    const double q = irs::csi::ramp_moment_quadrature(p, m, lp);
    if (q < 1e-280) continue;
    EXPECT_NEAR(irs::csi::ramp_moment_closed_form(p, m, lp) / q, 1.0, 1e-6) << describe(p);
  }
}

TEST(MonteCarloProperties, DeterministicUnderRandomScheduling) {
  Gen g(13);
  const auto p = SystemParams().with_n(8).with_rho(3.0);
  irs::mc::McConfig base;
  base.trials = 3000;
  const auto ref = irs::mc::empirical_adep(p, CsiMode::nocsi, base);
  for (int i = 0; i < 10; ++i) {
    auto c = base;
    c.threads = g.integer(1, 8);
    c.batch = g.integer(1, 4000);
    const auto e = irs::mc::empirical_adep(p, CsiMode::nocsi, c);
    EXPECT_EQ(e.mean, ref.mean) << c.threads << " " << c.batch;
    EXPECT_EQ(e.std_error, ref.std_error);
  }
}

TEST(CsvProperties, RandomDoublesRoundTrip) {
  Gen g(14);
  irs::sweep::MetricCurve c{irs::sweep::Metric::adr, CsiMode::nocsi, irs::sweep::Method::numerical, 7, {}, {}, {}, {}};
  for (int i = 0; i < 500; ++i) {
    c.snr_db.push_back(g.uniform(-50.0, 50.0));
    const double v = std::ldexp(g.uniform(-1.0, 1.0), g.integer(-1000, 1000));
    c.value.push_back(i % 17 == 0 ? std::nullopt : std::optional<double>(v));
    c.std_error.push_back(std::nullopt);
    c.note.push_back("");
  }
  std::stringstream ss;
  irs::sweep::emit_csv({c}, ss);
  const auto back = irs::sweep::read_csv(ss);
  ASSERT_EQ(back.size(), 1u);
  EXPECT_EQ(back[0].snr_db, c.snr_db);
  EXPECT_EQ(back[0].value, c.value);
}
