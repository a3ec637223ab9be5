// SPDX-License-Identifier: Apache-2.0
#pragma once

/// Adaptive Gauss-Kronrod quadrature on finite intervals and on [0, inf).
///
/// The semi-infinite integrator probes |f(x)|*x on a logarithmic grid to find
/// where the integrand carries its mass, seeds one panel per decade up to the
/// point where the tail drops below `tail_cutoff` of the peak, maps anything
/// beyond the last decade onto [0, 1) and then refines globally by bisecting
/// the panel with the largest error estimate.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

namespace irs::numerics {

struct QuadratureSpec {
  double rel_tol = 1e-9;
  double abs_tol = 1e-12;
  int max_subdivisions = 2000;
  double tail_cutoff = 1e-16;

  void validate() const {
    if (!(rel_tol > 0.0) || !(abs_tol >= 0.0) || max_subdivisions < 1 ||
        !(tail_cutoff > 0.0 && tail_cutoff < 1.0)) {
      throw std::invalid_argument("QuadratureSpec: rel_tol > 0, abs_tol >= 0, "
                                  "max_subdivisions >= 1, 0 < tail_cutoff < 1 required");
    }
  }

  [[nodiscard]] QuadratureSpec with_abs_tol(double t) const {
    QuadratureSpec s = *this;
    s.abs_tol = t;
    return s;
  }
  [[nodiscard]] QuadratureSpec with_rel_tol(double t) const {
    QuadratureSpec s = *this;
    s.rel_tol = t;
    return s;
  }
};

/// Raised when the requested tolerance cannot be reached within the
/// subdivision budget. Carries the best estimate available.
class QuadratureError : public std::runtime_error {
 public:
  QuadratureError(double estimate, double error_bound)
      : std::runtime_error(describe(estimate, error_bound)),
        estimate_(estimate),
        error_bound_(error_bound) {}

  [[nodiscard]] double estimate() const noexcept { return estimate_; }
  [[nodiscard]] double error_bound() const noexcept { return error_bound_; }

 private:
  static std::string describe(double estimate, double error_bound) {
    std::ostringstream os;
    os.precision(6);
    os << "quadrature tolerance not met: estimate " << estimate << " +/- " << error_bound;
    return os.str();
  }
  double estimate_;
  double error_bound_;
};

namespace detail {

// A panel is either in x directly (kind 0) or in the compactified tail
// coordinate t, with x = anchor / (1 - t) (kind 1).
struct Panel {
  double a;
  double b;
  double value;
  double error;
  int kind;
  bool operator<(const Panel& other) const { return error < other.error; }
};

// 7-point Gauss / 15-point Kronrod nodes and weights on [-1, 1].
inline constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

// QUADPACK qk15 error heuristic.
template <class F>
Panel kronrod15(const F& f, double a, double b, int kind = 0) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double resg = fc * kWg[3];
  double resk = fc * kWgk[7];
  double resabs = std::abs(resk);
  std::array<double, 7> fv1{};
  std::array<double, 7> fv2{};
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    const double f1 = f(center - dx);
    const double f2 = f(center + dx);
    fv1[j] = f1;
    fv2[j] = f2;
    resk += kWgk[j] * (f1 + f2);
    resabs += kWgk[j] * (std::abs(f1) + std::abs(f2));
    if (j % 2 == 1) resg += kWg[j / 2] * (f1 + f2);
  }
  const double reskh = 0.5 * resk;
  double resasc = kWgk[7] * std::abs(fc - reskh);
  for (int j = 0; j < 7; ++j) {
    resasc += kWgk[j] * (std::abs(fv1[j] - reskh) + std::abs(fv2[j] - reskh));
  }
  const double value = resk * half;
  resabs *= std::abs(half);
  resasc *= std::abs(half);
  double err = std::abs((resk - resg) * half);
  if (resasc != 0.0 && err != 0.0) {
    err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  }
  constexpr double eps = std::numeric_limits<double>::epsilon();
  if (resabs > std::numeric_limits<double>::min() / (50.0 * eps)) {
    err = std::max(50.0 * eps * resabs, err);
  }
  if (!std::isfinite(value) || !std::isfinite(err)) {
    throw std::domain_error("quadrature: integrand produced a non-finite value");
  }
  return {a, b, value, err, kind};
}

inline bool splittable(const Panel& p) {
  const double mid = 0.5 * (p.a + p.b);
  return mid > p.a && mid < p.b &&
         (p.b - p.a) > 64.0 * std::numeric_limits<double>::epsilon() *
                           std::max(std::abs(p.a), std::abs(p.b));
}

// Global adaptive refinement. `eval(kind, x)` evaluates the integrand in the
// coordinate of the given panel kind.
template <class G>
double adaptive(const G& eval, const std::vector<Panel>& seed, const QuadratureSpec& spec) {
  std::vector<Panel> active;
  std::vector<Panel> frozen;
  for (const auto& p : seed) (splittable(p) ? active : frozen).push_back(p);
  std::make_heap(active.begin(), active.end());

  // Sum in a fixed order so that the result does not depend on heap layout.
  auto totals = [&] {
    std::vector<Panel> all(active);
    all.insert(all.end(), frozen.begin(), frozen.end());
    std::sort(all.begin(), all.end(), [](const Panel& l, const Panel& r) {
      return l.kind != r.kind ? l.kind < r.kind : l.a < r.a;
    });
    double value = 0.0;
    double error = 0.0;
    for (const auto& p : all) {
      value += p.value;
      error += p.error;
    }
    return std::pair{value, error};
  };

  double total = 0.0;
  double total_err = 0.0;
  std::tie(total, total_err) = totals();
  int subdivisions = 0;
  while (total_err > std::max(spec.abs_tol, spec.rel_tol * std::abs(total))) {
    if (active.empty() || subdivisions >= spec.max_subdivisions) {
      throw QuadratureError(total, total_err);
    }
    std::pop_heap(active.begin(), active.end());
    const Panel worst = active.back();
    active.pop_back();
    const double mid = 0.5 * (worst.a + worst.b);
    const auto f = [&eval, kind = worst.kind](double x) { return eval(kind, x); };
    const Panel left = kronrod15(f, worst.a, mid, worst.kind);
    const Panel right = kronrod15(f, mid, worst.b, worst.kind);
    for (const auto& child : {left, right}) {
      if (splittable(child)) {
        active.push_back(child);
        std::push_heap(active.begin(), active.end());
      } else {
        frozen.push_back(child);
      }
    }
    ++subdivisions;
    total += left.value + right.value - worst.value;
    total_err += left.error + right.error - worst.error;
    if (subdivisions % 64 == 0) std::tie(total, total_err) = totals();
  }
  return totals().first;
}

}  // namespace detail

/// Integral of f over [a, b] with a <= b.
template <class F>
double integrate(const F& f, double a, double b, const QuadratureSpec& spec = {}) {
  spec.validate();
  if (!(a <= b) || !std::isfinite(a) || !std::isfinite(b)) {
    throw std::invalid_argument("integrate: finite limits with a <= b required");
  }
  if (a == b) return 0.0;
  std::vector<detail::Panel> panels;
  constexpr int kInitial = 4;
  const double h = (b - a) / kInitial;
  for (int i = 0; i < kInitial; ++i) {
    const double lo = a + i * h;
    const double hi = (i + 1 == kInitial) ? b : a + (i + 1) * h;
    panels.push_back(detail::kronrod15(f, lo, hi));
  }
  return detail::adaptive([&f](int, double x) { return f(x); }, panels, spec);
}

/// Integral of f over [0, inf).
template <class F>
double integrate_semi_infinite(const F& f, const QuadratureSpec& spec = {}) {
  spec.validate();
  constexpr int kLoDecade = -12;
  constexpr int kHiDecade = 12;
  constexpr int kPerDecade = 4;

  // Probe x*|f(x)|, the mass density per log-unit.
  std::vector<double> xs;
  std::vector<double> mass;
  for (int i = kLoDecade * kPerDecade; i <= kHiDecade * kPerDecade; ++i) {
    const double x = std::pow(10.0, static_cast<double>(i) / kPerDecade);
    const double v = f(x);
    if (!std::isfinite(v)) {
      throw std::domain_error("integrate_semi_infinite: integrand not finite at probe point");
    }
    xs.push_back(x);
    mass.push_back(std::abs(v) * x);
  }
  const auto peak_it = std::max_element(mass.begin(), mass.end());
  const double peak = *peak_it;
  if (peak == 0.0) return 0.0;

  // Truncate once the tail stays below tail_cutoff * peak for every later probe.
  const auto peak_idx = static_cast<std::size_t>(peak_it - mass.begin());
  std::size_t cut = xs.size();
  for (std::size_t i = xs.size(); i-- > peak_idx + 1;) {
    if (mass[i] >= spec.tail_cutoff * peak) break;
    cut = i;
  }
  const bool truncated = cut < xs.size();
  const double upper = truncated ? xs[cut] : xs.back();

  std::vector<detail::Panel> panels;
  double lo = 0.0;
  for (int d = kLoDecade; d <= kHiDecade && lo < upper; ++d) {
    const double hi = std::min(std::pow(10.0, d), upper);
    if (hi > lo) panels.push_back(detail::kronrod15(f, lo, hi));
    lo = hi;
  }

  const auto tail = [&f, upper](double t) {
    const double one_minus = 1.0 - t;
    const double v = f(upper / one_minus);
    return v == 0.0 ? 0.0 : v * upper / (one_minus * one_minus);
  };
  if (!truncated) panels.push_back(detail::kronrod15(tail, 0.0, 1.0, 1));
  const auto eval = [&f, &tail](int kind, double x) { return kind == 0 ? f(x) : tail(x); };
  return detail::adaptive(eval, panels, spec);
}

}  // namespace irs::numerics
