// SPDX-License-Identifier: Apache-2.0
#pragma once

/// Seeded channel simulator. Every trial draws its own stream from
/// (seed, trial index), values are stored per trial and reduced in index
/// order, so estimates do not depend on thread count or batch size.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <cstdint>
#include <exception>
#include <functional>
#include <mutex>
#include <numbers>
#include <span>
#include <stdexcept>
#include <thread>
#include <vector>

#include "irs/channel.hpp"
#include "irs/fbl.hpp"
#include "irs/system.hpp"

namespace irs::mc {

struct McConfig {
  long trials = 10000;
  std::uint64_t seed = 20240101;
  long batch = 1024;
  int threads = 1;  // 0 picks std::thread::hardware_concurrency()

  void validate() const {
    if (trials < 1) throw std::invalid_argument("McConfig: trials >= 1 required");
    if (batch < 1) throw std::invalid_argument("McConfig: batch >= 1 required");
    if (threads < 0) throw std::invalid_argument("McConfig: threads >= 0 required");
  }
};

struct Estimate {
  double mean;
  double std_error;
};

namespace detail {

inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// SplitMix64 stream keyed by (seed, trial).
class TrialRng {
 public:
  TrialRng(std::uint64_t seed, std::uint64_t trial) : state_(mix64(seed) ^ mix64(trial + 0x9e3779b97f4a7c15ULL)) {}

  std::uint64_t next() {
    state_ += 0x9e3779b97f4a7c15ULL;
    return mix64(state_);
  }

  // Uniform on (0, 1].
  double uniform() { return (static_cast<double>(next() >> 11) + 1.0) * 0x1.0p-53; }

  // Standard normal by Box-Muller, one cached spare.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double r = std::sqrt(-2.0 * std::log(uniform()));
    const double t = 2.0 * std::numbers::pi * uniform();
    spare_ = r * std::sin(t);
    has_spare_ = true;
    return r * std::cos(t);
  }

 private:
  std::uint64_t state_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

// Pairwise sum in fixed index order.
inline double pairwise_sum(std::span<const double> v) {
  if (v.size() <= 8) {
    double s = 0.0;
    for (const double x : v) s += x;
    return s;
  }
  const std::size_t half = v.size() / 2;
  return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

// Fills out[i] = fn(i) for every trial, fanning batches across threads.
inline void for_each_trial(const McConfig& mc, std::vector<double>& out, const std::function<double(long)>& fn) {
  mc.validate();
  out.assign(static_cast<std::size_t>(mc.trials), 0.0);
  int workers = mc.threads == 0 ? static_cast<int>(std::thread::hardware_concurrency()) : mc.threads;
  workers = std::max(1, workers);
  const long n_batches = (mc.trials + mc.batch - 1) / mc.batch;
  std::atomic<long> next_batch{0};
  std::mutex failure_mutex;
  std::exception_ptr failure;
  const auto work = [&]() {
    try {
      for (long b = next_batch++; b < n_batches; b = next_batch++) {
        const long end = std::min(mc.trials, (b + 1) * mc.batch);
        for (long i = b * mc.batch; i < end; ++i) out[static_cast<std::size_t>(i)] = fn(i);
      }
    } catch (...) {
      const std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
      next_batch = n_batches;
    }
  };
  if (workers == 1 || n_batches == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < std::min<long>(workers, n_batches); ++t) pool.emplace_back(work);
  }
  if (failure) std::rethrow_exception(failure);
}

inline Estimate summarize(const std::vector<double>& v) {
  const double n = static_cast<double>(v.size());
  const double mean = pairwise_sum(v) / n;
  if (v.size() < 2) return {mean, 0.0};
  std::vector<double> sq(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) sq[i] = (v[i] - mean) * (v[i] - mean);
  const double var = pairwise_sum(sq) / (n - 1.0);
  return {mean, std::sqrt(var / n)};
}

}  // namespace detail

/// Draws h_n ~ CN(0, alpha) and g_n ~ CN(0, beta) for one trial; real and
/// imaginary parts each have variance alpha/2 (beta/2). Phases start at 0.
inline ChannelRealization sample_realization(std::uint64_t seed, std::uint64_t trial, const SystemParams& p) {
  detail::TrialRng rng(seed, trial);
  const auto n = static_cast<std::size_t>(p.n_elements());
  const double sh = std::sqrt(0.5 * p.alpha());
  const double sg = std::sqrt(0.5 * p.beta());
  ChannelRealization::Vec h(n);
  ChannelRealization::Vec g(n);
  for (auto& c : h) {
    const double re = rng.normal();
    c = {sh * re, sh * rng.normal()};
  }
  for (auto& c : g) {
    const double re = rng.normal();
    c = {sg * re, sg * rng.normal()};
  }
  return {std::move(h), std::move(g)};
}

/// Received SNR of every trial, in trial order.
inline std::vector<double> sample_snrs(const SystemParams& p, CsiMode mode, const McConfig& mc) {
  std::vector<double> out;
  detail::for_each_trial(mc, out, [&](long i) {
    return realized_snr(sample_realization(mc.seed, static_cast<std::uint64_t>(i), p), mode, p.rho());
  });
  return out;
}

/// Mean finite-blocklength rate over the trials (unclamped, like the quadrature).
inline Estimate empirical_adr(const SystemParams& p, CsiMode mode, const McConfig& mc) {
  const int blk = p.blocklength();
  const double eps = p.target_eps();
  std::vector<double> v;
  detail::for_each_trial(mc, v, [&](long i) {
    const double snr = realized_snr(sample_realization(mc.seed, static_cast<std::uint64_t>(i), p), mode, p.rho());
    return fbl::achievable_rate(snr, blk, eps);
  });
  return detail::summarize(v);
}

/// Mean of the exact per-trial error probability (not Bernoulli outcomes).
inline Estimate empirical_adep(const SystemParams& p, CsiMode mode, const McConfig& mc) {
  const int blk = p.blocklength();
  const double bits = p.packet_bits();
  std::vector<double> v;
  detail::for_each_trial(mc, v, [&](long i) {
    const double snr = realized_snr(sample_realization(mc.seed, static_cast<std::uint64_t>(i), p), mode, p.rho());
    return fbl::decode_error_prob(snr, blk, bits);
  });
  return detail::summarize(v);
}

/// Empirical CDF of the received SNR on an ascending grid.
inline std::vector<double> empirical_snr_cdf(const SystemParams& p, CsiMode mode, const McConfig& mc,
                                             const std::vector<double>& grid) {
  if (!std::is_sorted(grid.begin(), grid.end())) {
    throw std::invalid_argument("empirical_snr_cdf: grid must be sorted ascending");
  }
  auto s = sample_snrs(p, mode, mc);
  std::sort(s.begin(), s.end());
  std::vector<double> out;
  out.reserve(grid.size());
  for (const double x : grid) {
    const auto count = std::upper_bound(s.begin(), s.end(), x) - s.begin();
    out.push_back(static_cast<double>(count) / static_cast<double>(s.size()));
  }
  return out;
}

/// Kolmogorov-Smirnov sup distance between a sample and a model CDF.
inline double ks_distance(std::vector<double> samples, const std::function<double(double)>& cdf) {
  if (samples.empty()) throw std::invalid_argument("ks_distance: empty sample");
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    d = std::max({d, f - static_cast<double>(i) / n, static_cast<double>(i + 1) / n - f});
  }
  return d;
}

}  // namespace irs::mc
