// SPDX-License-Identifier: Apache-2.0
#pragma once

/// SNR sweeps over methods and surface sizes, figure presets, flat key=value
/// configuration, and the CSV format the command-line tool writes.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "irs/metrics_csi.hpp"
#include "irs/metrics_nocsi.hpp"
#include "irs/montecarlo.hpp"
#include "irs/system.hpp"

namespace irs::sweep {

enum class Metric { adr, adep };

enum class Method { numerical, closed_form, lower_bound, upper_bound, linearized, approx, asymptotic, shannon, montecarlo };

inline const char* to_string(Metric m) { return m == Metric::adr ? "adr" : "adep"; }

inline Metric parse_metric(const std::string& s) {
  if (s == "adr") return Metric::adr;
  if (s == "adep") return Metric::adep;
  throw std::invalid_argument("unknown metric '" + s + "' (expected adr or adep)");
}

inline constexpr std::array<Method, 9> kAllMethods = {
    Method::numerical, Method::closed_form, Method::lower_bound, Method::upper_bound, Method::linearized,
    Method::approx,    Method::asymptotic,  Method::shannon,     Method::montecarlo};

inline const char* to_string(Method m) {
  switch (m) {
    case Method::numerical: return "numerical";
    case Method::closed_form: return "closed_form";
    case Method::lower_bound: return "lower_bound";
    case Method::upper_bound: return "upper_bound";
    case Method::linearized: return "linearized";
    case Method::approx: return "approx";
    case Method::asymptotic: return "asymptotic";
    case Method::shannon: return "shannon";
    case Method::montecarlo: return "montecarlo";
  }
  return "?";
}

inline Method parse_method(const std::string& s) {
  for (const Method m : kAllMethods) {
    if (s == to_string(m)) return m;
  }
  throw std::invalid_argument("unknown method '" + s + "'");
}

/// Which methods exist for each (metric, mode) pair.
inline bool method_valid(Metric metric, CsiMode mode, Method m) {
  using enum Method;
  if (m == numerical || m == asymptotic || m == montecarlo) return true;
  if (metric == Metric::adr && mode == CsiMode::nocsi) {
    return m == lower_bound || m == upper_bound || m == approx || m == shannon;
  }
  if (metric == Metric::adr && mode == CsiMode::csi) return m == closed_form || m == approx || m == shannon;
  if (metric == Metric::adep && mode == CsiMode::nocsi) return m == linearized || m == approx;
  return m == linearized;  // adep, csi
}

struct SweepSpec {
  Metric metric = Metric::adr;
  CsiMode mode = CsiMode::nocsi;
  std::vector<Method> methods;
  double snr_start = -10.0;
  double snr_stop = 30.0;
  double snr_step = 2.0;
  std::vector<int> n_values = {20};
  SystemParams base;
  mc::McConfig mc;

  void validate() const {
    if (methods.empty()) throw std::invalid_argument("sweep: at least one method required");
    for (const Method m : methods) {
      if (!method_valid(metric, mode, m)) {
        throw std::invalid_argument(std::string("sweep: method ") + to_string(m) + " is not defined for " +
                                    to_string(metric) + "/" + irs::to_string(mode));
      }
    }
    if (!(snr_step > 0.0)) throw std::invalid_argument("sweep: snr step must be > 0");
    if (!(snr_stop >= snr_start)) throw std::invalid_argument("sweep: snr stop must be >= start");
    if (n_values.empty()) throw std::invalid_argument("sweep: at least one N required");
    for (const int n : n_values) {
      if (n < 1) throw std::invalid_argument("sweep: N >= 1 required");
    }
    mc.validate();
  }

  /// start, start + step, ... up to stop (inclusive within rounding).
  [[nodiscard]] std::vector<double> snr_grid() const {
    std::vector<double> out;
    for (long i = 0;; ++i) {
      const double x = snr_start + static_cast<double>(i) * snr_step;
      if (x > snr_stop + 1e-9 * snr_step) break;
      out.push_back(x);
    }
    return out;
  }
};

struct MetricCurve {
  Metric metric;
  CsiMode mode;
  Method method;
  int n;
  std::vector<double> snr_db;
  std::vector<std::optional<double>> value;
  std::vector<std::optional<double>> std_error;
  std::vector<std::string> note;

  [[nodiscard]] std::size_t size() const { return snr_db.size(); }
};

struct PointResult {
  std::optional<double> value;
  std::optional<double> std_error;
  std::string note;
};

namespace detail {

inline double probability_or_note(const Probability& p, std::string& note) {
  if (p.clamped) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", p.raw);
    note = std::string("clamped from ") + buf;
  }
  return p.value;
}

inline PointResult evaluate_unchecked(Metric metric, CsiMode mode, Method method, const SystemParams& p,
                                      const mc::McConfig& mcc) {
  using enum Method;
  PointResult r;
  if (method == montecarlo) {
    const auto e = metric == Metric::adr ? mc::empirical_adr(p, mode, mcc) : mc::empirical_adep(p, mode, mcc);
    r.value = e.mean;
    r.std_error = e.std_error;
    return r;
  }
  if (metric == Metric::adr && mode == CsiMode::nocsi) {
    switch (method) {
      case numerical: r.value = nocsi::adr_numerical(p); break;
      case lower_bound:
      case approx: r.value = nocsi::adr_lower_bound(p); break;
      case upper_bound:
      case shannon: r.value = nocsi::adr_upper_bound(p); break;
      case asymptotic: r.value = nocsi::adr_asymptotic(p); break;
      default: break;
    }
    return r;
  }
  const GammaMatch gm = gamma_match(p);
  if (metric == Metric::adr) {
    switch (method) {
      case numerical: r.value = csi::adr_numerical_gamma(p, gm); break;
      case closed_form:
      case approx: {
        const auto cf = csi::adr_closed_form(p, gm);
        r.value = cf.value;
        if (cf.fallback) r.note = "pole guard: quadrature fallback";
        break;
      }
      case shannon: r.value = csi::adr_numerical_gamma(p.with_eps(0.5), gm); break;
      case asymptotic: r.value = csi::adr_simplified(p, gm); break;
      default: break;
    }
    return r;
  }
  if (mode == CsiMode::nocsi) {
    switch (method) {
      case numerical: r.value = nocsi::adep_numerical(p); break;
      case linearized: r.value = nocsi::adep_linearized(p); break;
      case approx: r.value = probability_or_note(Probability::from_raw(nocsi::adep_approx(p)), r.note); break;
      case asymptotic: r.value = probability_or_note(Probability::from_raw(nocsi::adep_asymptotic(p)), r.note); break;
      default: break;
    }
    return r;
  }
  switch (method) {
    case numerical: r.value = csi::adep_numerical(p, gm); break;
    case linearized: {
      const auto lin = csi::adep_linearized(p, gm);
      r.value = probability_or_note(lin.prob, r.note);
      if (lin.moment_fallback) {
        if (!r.note.empty()) r.note += "; ";
        r.note += "ramp moment: quadrature fallback";
      }
      break;
    }
    case asymptotic: r.value = probability_or_note(csi::adep_asymptotic(p, gm).two_term, r.note); break;
    default: break;
  }
  return r;
}

}  // namespace detail

/// One (method, N, SNR) point. Failures become a missing value with a reason.
inline PointResult evaluate_point(Metric metric, CsiMode mode, Method method, const SystemParams& p,
                                  const mc::McConfig& mcc) {
  try {
    return detail::evaluate_unchecked(metric, mode, method, p, mcc);
  } catch (const std::exception& e) {
    return {std::nullopt, std::nullopt, std::string("error: ") + e.what()};
  }
}

/// Evaluates every (method, N, SNR) combination. Curves come out sorted by
/// method name, then N; points by SNR.
inline std::vector<MetricCurve> run_sweep(const SweepSpec& spec) {
  spec.validate();
  const auto grid = spec.snr_grid();
  std::vector<Method> methods = spec.methods;
  std::sort(methods.begin(), methods.end(),
            [](Method a, Method b) { return std::string(to_string(a)) < std::string(to_string(b)); });
  methods.erase(std::unique(methods.begin(), methods.end()), methods.end());
  std::vector<int> ns = spec.n_values;
  std::sort(ns.begin(), ns.end());
  ns.erase(std::unique(ns.begin(), ns.end()), ns.end());

  std::vector<MetricCurve> out;
  for (const Method m : methods) {
    for (const int n : ns) {
      MetricCurve c{spec.metric, spec.mode, m, n, {}, {}, {}, {}};
      for (const double db : grid) {
        PointResult r;
        try {
          const SystemParams p = spec.base.with_n(n).with_rho(SystemParams::rho_from_db(db));
          r = evaluate_point(spec.metric, spec.mode, m, p, spec.mc);
        } catch (const std::exception& e) {
          r = {std::nullopt, std::nullopt, std::string("error: ") + e.what()};
        }
        c.snr_db.push_back(db);
        c.value.push_back(r.value);
        c.std_error.push_back(r.std_error);
        c.note.push_back(r.note);
      }
      out.push_back(std::move(c));
    }
  }
  return out;
}

/// Number of points without a value.
inline std::size_t count_failures(const std::vector<MetricCurve>& curves) {
  std::size_t k = 0;
  for (const auto& c : curves) k += static_cast<std::size_t>(std::count(c.value.begin(), c.value.end(), std::nullopt));
  return k;
}

// ---------------------------------------------------------------- presets

/// Figure presets over the simulation parameter block (alpha = beta = 1,
/// M = 200, eps = 1e-8, D = 100, 10000 trials). SNR ranges are defaults.
inline SweepSpec preset(const std::string& name) {
  SweepSpec s;
  s.n_values = {20, 40};
  s.mc.trials = 10000;
  using enum Method;
  if (name == "fig2") {
    s.metric = Metric::adr;
    s.mode = CsiMode::nocsi;
    s.methods = {numerical, approx, asymptotic, shannon, montecarlo};
  } else if (name == "fig3") {
    s.metric = Metric::adep;
    s.mode = CsiMode::nocsi;
    s.methods = {numerical, linearized, approx, asymptotic, montecarlo};
    s.snr_start = 0.0;
    s.snr_stop = 40.0;
  } else if (name == "fig4") {
    s.metric = Metric::adr;
    s.mode = CsiMode::csi;
    s.methods = {numerical, approx, asymptotic, montecarlo};
  } else if (name == "fig5") {
    // With co-phasing the error floor is reached far below 0 dB, so the
    // sweep covers the range where the error probability is still visible.
    s.metric = Metric::adep;
    s.mode = CsiMode::csi;
    s.methods = {numerical, linearized, montecarlo};
    s.snr_start = -40.0;
    s.snr_stop = -10.0;
  } else {
    throw std::invalid_argument("unknown preset '" + name + "' (expected fig2, fig3, fig4 or fig5)");
  }
  return s;
}

// ---------------------------------------------------------------- settings

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

inline double to_double(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  double x = 0.0;
  try {
    x = std::stod(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != v.size()) throw std::invalid_argument(key + ": not a number: '" + v + "'");
  return x;
}

inline long to_long(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  long x = 0;
  try {
    x = std::stol(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != v.size()) throw std::invalid_argument(key + ": not an integer: '" + v + "'");
  return x;
}

}  // namespace detail

/// Keys accepted by apply_setting, matching the long flag names.
inline const std::vector<std::string>& setting_keys() {
  static const std::vector<std::string> keys = {"metric", "mode",  "methods", "n",     "snr-start",
                                                "snr-stop", "snr-step", "m",  "eps",   "bits",
                                                "alpha",  "beta",  "trials",  "seed",  "rs-convention",
                                                "threads"};
  return keys;
}

/// Applies one key=value setting to a spec. Unknown keys are an error.
inline void apply_setting(SweepSpec& s, const std::string& key, const std::string& raw) {
  const std::string v = detail::trim(raw);
  auto f = s.base.fields();
  if (key == "metric") {
    s.metric = parse_metric(v);
  } else if (key == "mode") {
    s.mode = parse_csi_mode(v);
  } else if (key == "methods") {
    s.methods.clear();
    for (const auto& m : detail::split_list(v)) s.methods.push_back(parse_method(m));
  } else if (key == "n") {
    s.n_values.clear();
    for (const auto& n : detail::split_list(v)) s.n_values.push_back(static_cast<int>(detail::to_long(key, n)));
  } else if (key == "snr-start") {
    s.snr_start = detail::to_double(key, v);
  } else if (key == "snr-stop") {
    s.snr_stop = detail::to_double(key, v);
  } else if (key == "snr-step") {
    s.snr_step = detail::to_double(key, v);
  } else if (key == "m") {
    f.blocklength = static_cast<int>(detail::to_long(key, v));
  } else if (key == "eps") {
    f.target_eps = detail::to_double(key, v);
  } else if (key == "bits") {
    f.packet_bits = detail::to_double(key, v);
  } else if (key == "alpha") {
    f.alpha = detail::to_double(key, v);
  } else if (key == "beta") {
    f.beta = detail::to_double(key, v);
  } else if (key == "rs-convention") {
    f.rate_convention = parse_rate_convention(v);
  } else if (key == "trials") {
    s.mc.trials = detail::to_long(key, v);
  } else if (key == "seed") {
    std::size_t used = 0;
    try {
      s.mc.seed = std::stoull(v, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != v.size() || v.front() == '-') {
      throw std::invalid_argument("seed: not an unsigned integer: '" + v + "'");
    }
  } else if (key == "threads") {
    s.mc.threads = static_cast<int>(detail::to_long(key, v));
  } else {
    throw std::invalid_argument("unknown setting '" + key + "'");
  }
  s.base = SystemParams(f);
}

/// Parses flat key=value lines; '#' starts a comment. Later keys win.
inline std::map<std::string, std::string> parse_config(std::istream& in) {
  std::map<std::string, std::string> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("config line " + std::to_string(lineno) + ": expected key=value");
    }
    out[detail::trim(line.substr(0, eq))] = detail::trim(line.substr(eq + 1));
  }
  return out;
}

// ---------------------------------------------------------------- CSV

inline constexpr const char* kCsvHeader = "metric,mode,method,n,snr_db,value,stderr,note";

namespace detail {

inline std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (const char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline std::vector<std::string> csv_fields(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace detail

inline void emit_csv(const std::vector<MetricCurve>& curves, std::ostream& out) {
  out << kCsvHeader << '\n';
  for (const auto& c : curves) {
    for (std::size_t i = 0; i < c.size(); ++i) {
      out << to_string(c.metric) << ',' << irs::to_string(c.mode) << ',' << to_string(c.method) << ',' << c.n << ','
          << detail::fmt17(c.snr_db[i]) << ',' << (c.value[i] ? detail::fmt17(*c.value[i]) : "") << ','
          << (c.std_error[i] ? detail::fmt17(*c.std_error[i]) : "") << ',' << detail::csv_quote(c.note[i]) << '\n';
    }
  }
}

inline void emit_csv(const std::vector<MetricCurve>& curves, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
  emit_csv(curves, f);
  f.flush();
  if (!f) throw std::runtime_error("write to '" + path + "' failed");
}

/// Reads CSV written by emit_csv; consecutive rows with equal labels form a curve.
inline std::vector<MetricCurve> read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || detail::trim(line) != kCsvHeader) {
    throw std::invalid_argument("read_csv: missing or unexpected header");
  }
  std::vector<MetricCurve> out;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    // A quoted note may carry newlines; keep reading until quotes balance.
    std::string more;
    while (std::count(line.begin(), line.end(), '"') % 2 == 1 && std::getline(in, more)) {
      ++lineno;
      line += '\n' + more;
    }
    const auto f = detail::csv_fields(line);
    if (f.size() != 8) throw std::invalid_argument("read_csv: line " + std::to_string(lineno) + ": expected 8 fields");
    const Metric metric = parse_metric(f[0]);
    const CsiMode mode = parse_csi_mode(f[1]);
    const Method method = parse_method(f[2]);
    const int n = static_cast<int>(detail::to_long("n", f[3]));
    if (out.empty() || out.back().metric != metric || out.back().mode != mode || out.back().method != method ||
        out.back().n != n) {
      out.push_back(MetricCurve{metric, mode, method, n, {}, {}, {}, {}});
    }
    auto& c = out.back();
    c.snr_db.push_back(detail::to_double("snr_db", f[4]));
    c.value.push_back(f[5].empty() ? std::nullopt : std::optional<double>(detail::to_double("value", f[5])));
    c.std_error.push_back(f[6].empty() ? std::nullopt : std::optional<double>(detail::to_double("stderr", f[6])));
    c.note.push_back(f[7]);
  }
  return out;
}

}  // namespace irs::sweep
