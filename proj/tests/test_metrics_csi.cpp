// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "irs/metrics_csi.hpp"
#include "irs/metrics_nocsi.hpp"

using irs::SystemParams;
namespace csi = irs::csi;
namespace nocsi = irs::nocsi;

namespace {

SystemParams at(int n, double snr_db) { return SystemParams().with_n(n).with_rho(SystemParams::rho_from_db(snr_db)); }

constexpr double kPenalty = 0.5725023843532963;

}  // namespace

TEST(CsiAdr, ReferenceValue) {
  const auto p = at(20, 0.0);
  const double v = csi::adr_numerical_gamma(p);
  EXPECT_NEAR(v, 7.335732627446631, 1e-8);  // mpmath quadrature
  EXPECT_GE(v, 7.1);
  EXPECT_LE(v, 7.7);
}

TEST(CsiAdr, ClosedFormMatchesQuadrature) {
  for (int n : {10, 20}) {
    for (double rho : {1.0, 10.0, 100.0}) {
      const auto p = SystemParams().with_n(n).with_rho(rho);
      const auto m = irs::gamma_match(p);
      const auto cf = csi::adr_closed_form(p, m);
      EXPECT_FALSE(cf.fallback);
      const double q = csi::adr_numerical_gamma(p, m);
      EXPECT_LT(std::abs(cf.value - q) / std::abs(q), 1e-4) << n << " " << rho;
    }
  }
}

TEST(CsiAdr, ClosedFormPenaltyVanishesAtHalfEpsilon) {
  const auto p = at(20, 10.0);
  const auto m = irs::gamma_match(p);
  EXPECT_NEAR(csi::adr_closed_form(p.with_eps(0.5), m).value - csi::adr_closed_form(p, m).value, kPenalty, 1e-12);
}

TEST(CsiAdr, PoleGuardFallsBackToQuadrature) {
  const auto p = at(20, 0.0);
  const irs::GammaMatch at_pole{32.0 / 20.0, 0.4878413813377144};  // kN = 32, an even integer
  const auto cf = csi::adr_closed_form(p, at_pole);
  EXPECT_TRUE(cf.fallback);
  EXPECT_EQ(cf.value, csi::adr_numerical_gamma(p, at_pole));
  const irs::GammaMatch odd{33.0 / 20.0, 0.4878413813377144};
  EXPECT_TRUE(csi::adr_closed_form(p, odd).fallback);
}

TEST(CsiAdr, Simplified) {
  const auto p = at(20, 0.0);
  const auto m = irs::gamma_match(p);
  EXPECT_NEAR(csi::adr_simplified(p, m), 7.329308462036156, 1e-12);
  EXPECT_NEAR(csi::adr_simplified(p.with_rho(2.0), m) - csi::adr_simplified(p, m), 1.0, 1e-12);
  const auto hi = at(20, 30.0);
  EXPECT_LT(std::abs(csi::adr_simplified(hi, m) - csi::adr_numerical_gamma(hi, m)), 0.05);
}

TEST(CsiAdr, RateGap) {
  const auto p = at(20, 0.0);
  EXPECT_NEAR(csi::rate_gap(p), 4.448996791216885, 1e-12);
  EXPECT_NEAR(csi::rate_gap(p), csi::adr_simplified(p, irs::gamma_match(p)) - nocsi::adr_asymptotic(p), 1e-6);
  const double th0 = irs::gamma_match(1.0, 1.0).scale;
  EXPECT_NEAR(std::log2(th0 * th0), -2.071031908772752, 1e-12);
  EXPECT_NEAR(std::log2(th0 * th0), -2.07103, 1e-5);
  double prev = -1e9;
  for (int n = 5; n <= 60; n += 5) {
    const double g = csi::rate_gap(at(n, 0.0));
    EXPECT_GT(g, prev) << n;
    prev = g;
  }
}

TEST(CsiAdr, DominatesNoCsi) {
  for (int n : {5, 20, 40}) {
    for (double db : {-10.0, 0.0, 10.0, 30.0}) {
      const auto p = at(n, db);
      EXPECT_GT(csi::adr_numerical_gamma(p), nocsi::adr_numerical(p)) << n << " " << db;
    }
  }
}

TEST(CsiAdep, ReferenceValues) {
  const auto m = irs::gamma_match(1.0, 1.0);
  EXPECT_NEAR(csi::adep_numerical(at(20, -26.0), m) / 0.170433449094387, 1.0, 1e-7);
  EXPECT_NEAR(csi::adep_numerical(at(20, -20.0), m) / 2.23300916778548e-5, 1.0, 1e-7);
  EXPECT_GT(csi::adep_numerical(at(20, -60.0), m), 0.999);
}

TEST(CsiAdep, BelowNoCsi) {
  const auto m = irs::gamma_match(1.0, 1.0);
  for (double db = -20.0; db <= 10.0; db += 5.0) {
    const auto p = at(20, db);
    EXPECT_LT(csi::adep_numerical(p, m), nocsi::adep_numerical(p)) << db;
  }
}

TEST(CsiAdep, LinearizedTracksNumericalWhereErrorIsLarge) {
  // The ramp is only close while the error probability is large; the
  // deviation grows as the SNR rises (documented limitation).
  const auto m = irs::gamma_match(1.0, 1.0);
  for (double db = -40.0; db <= -10.0; db += 2.0) {
    const auto p = at(20, db);
    const double num = csi::adep_numerical(p, m);
    const auto lin = csi::adep_linearized(p, m);
    EXPECT_FALSE(lin.moment_fallback) << db;
    EXPECT_LT(lin.moment_rel_diff, 1e-6) << db;
    if (num >= 0.1) {
      EXPECT_LT(std::abs(lin.prob.value / num - 1.0), 0.10) << db;
    }
  }
}

TEST(CsiAdep, LinearizedDiscrepancyForLargeSurface) {
  const auto p = at(40, -20.0);
  const auto m = irs::gamma_match(p);
  const double ratio = csi::adep_linearized(p, m).prob.value / csi::adep_numerical(p, m);
  EXPECT_LT(ratio, 0.5);
}

TEST(CsiAdep, LinearizedStepLimit) {
  const auto p = at(20, -26.0);
  const auto m = irs::gamma_match(p);
  const irs::fbl::LinearizationParams lp{1e6, 0.41421356237309505};
  EXPECT_NEAR(csi::adep_linearized(p, m, lp).prob.value, irs::snr_cdf_csi(lp.center_x0, p, m), 1e-7);
}

TEST(CsiAdep, PrintedAntiderivative) {
  const auto p = at(20, -30.0);
  const auto m = irs::gamma_match(p);
  const double a = 20 * m.shape;
  // d f3 / dx equals the integrand x^{a/2} exp(-sqrt(x/rho)/theta).
  const double x = 0.4;
  const double h = 1e-5;
  const double fd = (csi::f3(x + h, p, m) - csi::f3(x - h, p, m)) / (2.0 * h);
  const double integrand = std::pow(x, 0.5 * a) * std::exp(-std::sqrt(x / p.rho()) / m.scale);
  EXPECT_NEAR(fd / integrand, 1.0, 1e-6);

  // The ramp moment from the antiderivative, normalized, against quadrature.
  const auto lp = irs::fbl::linearization_params(p.blocklength(), p.packet_bits());
  const double u6 = csi::f3(lp.upper_knee(), p, m) - csi::f3(std::max(0.0, lp.lower_knee()), p, m);
  const double norm = 2.0 * std::pow(p.rho(), 0.5 * a) * std::pow(m.scale, a) * std::tgamma(a);
  const double quad = csi::ramp_moment_quadrature(p, m, lp);
  EXPECT_NEAR(u6 / norm / quad, 1.0, 1e-6);
  EXPECT_NEAR(csi::ramp_moment_closed_form(p, m, lp) / quad, 1.0, 1e-9);
}

TEST(CsiAdep, ClosedFormMomentAgreesOverSnr) {
  for (int n : {5, 20, 40}) {
    for (double db = -40.0; db <= 30.0; db += 10.0) {
      const auto p = at(n, db);
      const auto m = irs::gamma_match(p);
      const auto lp = irs::fbl::linearization_params(p.blocklength(), p.packet_bits());
      const double q = csi::ramp_moment_quadrature(p, m, lp);
      if (q == 0.0) continue;
      EXPECT_NEAR(csi::ramp_moment_closed_form(p, m, lp) / q, 1.0, 1e-6) << n << " " << db;
    }
  }
}

TEST(CsiAdep, AsymptoticExponent) {
  const auto m = irs::gamma_match(1.0, 1.0);
  const double a = 20 * m.shape;
  const auto p = at(20, 20.0);
  const double h = 1e-3;
  const double up = csi::adep_asymptotic(p.with_rho(p.rho() * std::exp(h)), m).single_term.value;
  const double dn = csi::adep_asymptotic(p.with_rho(p.rho() * std::exp(-h)), m).single_term.value;
  EXPECT_NEAR((std::log(up) - std::log(dn)) / (2.0 * h), 0.5 - a, 1e-3);

  const double up2 = csi::adep_asymptotic(p.with_rho(p.rho() * std::exp(h)), m).two_term.value;
  const double dn2 = csi::adep_asymptotic(p.with_rho(p.rho() * std::exp(-h)), m).two_term.value;
  EXPECT_NEAR((std::log(up2) - std::log(dn2)) / (2.0 * h), -0.5 * a, 1e-3);
}

TEST(CsiAdep, AsymptoticFormsAgreeAtUnitSnr) {
  const auto p = at(20, 0.0);
  const auto f = csi::adep_asymptotic(p, irs::gamma_match(p));
  const double r = f.single_term.raw / f.two_term.raw;
  EXPECT_GT(r, 0.5);
  EXPECT_LT(r, 2.0);
}

TEST(CsiAdep, AsymptoticDecreasesInSnr) {
  const auto m = irs::gamma_match(1.0, 1.0);
  double prev_one = 1e300;
  double prev_two = 1e300;
  for (double db = 0.0; db <= 40.0; db += 5.0) {
    const auto f = csi::adep_asymptotic(at(20, db), m);
    EXPECT_LT(f.single_term.raw, prev_one);
    EXPECT_LT(f.two_term.raw, prev_two);
    prev_one = f.single_term.raw;
    prev_two = f.two_term.raw;
  }
}

TEST(CsiAdep, Ratio) {
  const double a = 20 * irs::gamma_match(1.0, 1.0).shape;
  const auto p = at(20, 10.0);
  const double s = std::log(csi::adep_ratio(p.with_rho(20.0)) / csi::adep_ratio(p)) / std::log(2.0);
  EXPECT_NEAR(s, 1.0 - 0.5 * a, 1e-9);
  for (double db = 0.0; db <= 40.0; db += 5.0) EXPECT_LT(csi::adep_ratio(at(20, db)), 1.0) << db;
  EXPECT_THROW(csi::adep_ratio(at(1, 0.0)), std::domain_error);
}

TEST(CsiAdep, RatioAssembledFromAsymptotics) {
  // The ratio's constants are 6-digit roundings, and its SNR exponent is
  // 1/2 - kN/2 steeper than the single-term form over the no-CSI form.
  for (double db : {0.0, 10.0, 30.0}) {
    const auto p = at(20, db);
    const auto m = irs::gamma_match(p);
    const double a = 20 * m.shape;
    const double single = csi::adep_asymptotic(p, m).single_term.raw;
    const double assembled = single * std::pow(p.alpha_beta_rho(), 0.5 * a - 0.5) / nocsi::adep_asymptotic(p);
    EXPECT_NEAR(csi::adep_ratio(p) / assembled, 1.0, 5e-5) << db;
    const double two = csi::adep_asymptotic(p, m).two_term.raw / nocsi::adep_asymptotic(p);
    EXPECT_NEAR(csi::adep_ratio(p) / two, 1.0, 1e-2) << db;
  }
}
