#ifndef BACKNOMA_SIMULATOR_HPP_
#define BACKNOMA_SIMULATOR_HPP_

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <optional>
#include <thread>
#include <vector>

#include "backnoma/analytic_ber.hpp"
#include "backnoma/distributions.hpp"
#include "backnoma/errors.hpp"
#include "backnoma/rng.hpp"

// Monte Carlo link-level simulator: superposed real-baseband BPSK, maximum
// likelihood detection of the strong user, SIC detection of the weak user
// with natural error propagation, and the OMA-TDMA baseline. Trials run on
// counter-based per-trial random substreams, so results are independent of
// how the trial range is split across workers.

namespace backnoma {

struct BerEstimate {
  Probability ber1;
  Probability ber2;
  std::uint64_t trials;
  double stderr1;
  double stderr2;
  std::uint64_t seed;
};

enum class Scheme { kNoma, kTdma };

struct EffectiveBits {
  Scheme scheme;
  double per_slot;    // expected non-erroneous bits per time slot
  double normalized;  // fraction of transmitted bits decoded correctly
};

struct SimOptions {
  std::optional<double> fixed_h1;  // pin channel amplitudes instead of fading
  std::optional<double> fixed_h2;
  unsigned workers = 0;  // 0: BACKNOMA_WORKERS env var, then hardware
};

namespace detail {

inline unsigned resolve_workers(unsigned requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("BACKNOMA_WORKERS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<unsigned>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? hw : 1;
}

struct LinkAmplitude {
  double scale;      // sqrt(eps * Gamma)
  bool noise_free;   // snr_db == +inf sentinel
};

inline LinkAmplitude link_amplitude(const BsnLink& l) {
  if (std::isinf(l.snr_db) && l.snr_db > 0)
    return {std::sqrt(l.reflection), true};
  return {std::sqrt(std::pow(10.0, l.snr_db / 10.0) * l.reflection), false};
}

struct ErrorCounts {
  std::uint64_t e1 = 0;
  std::uint64_t e2 = 0;
};

template <class PerTrial>
ErrorCounts run_trials(std::uint64_t trials, std::uint64_t seed,
                       unsigned workers, const PerTrial& body) {
  workers = resolve_workers(workers);
  if (workers == 1 || trials < 2 * workers) {
    ErrorCounts total;
    for (std::uint64_t t = 0; t < trials; ++t) {
      TrialRng rng(seed, t);
      body(rng, total);
    }
    return total;
  }
  std::vector<ErrorCounts> partial(workers);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    const std::uint64_t lo = trials * w / workers;
    const std::uint64_t hi = trials * (w + 1) / workers;
    pool.emplace_back([&, lo, hi, w] {
      ErrorCounts local;
      for (std::uint64_t t = lo; t < hi; ++t) {
        TrialRng rng(seed, t);
        body(rng, local);
      }
      partial[w] = local;
    });
  }
  for (auto& th : pool) th.join();
  ErrorCounts total;
  for (const auto& p : partial) {
    total.e1 += p.e1;
    total.e2 += p.e2;
  }
  return total;
}

inline BerEstimate make_estimate(const ErrorCounts& c, std::uint64_t trials,
                                 std::uint64_t seed) {
  const double n = static_cast<double>(trials);
  const double b1 = c.e1 / n;
  const double b2 = c.e2 / n;
  return {b1, b2, trials, std::sqrt(b1 * (1.0 - b1) / n),
          std::sqrt(b2 * (1.0 - b2) / n), seed};
}

}  // namespace detail

/// Simulate the NOMA cluster: y = a1 x1 + a2 x2 + w, MLD for x1, SIC for x2.
inline BerEstimate simulate_cluster(const ClusterConfig& c,
                                    std::uint64_t trials, std::uint64_t seed,
                                    const SimOptions& opt = {}) {
  c.validate();
  if (trials < 10000)
    throw InsufficientTrials("simulate_cluster: need at least 1e4 trials");
  const auto l1 = detail::link_amplitude(c.bsn1);
  const auto l2 = detail::link_amplitude(c.bsn2);
  const bool noise_free = l1.noise_free && l2.noise_free;
  const double noise_std = noise_free ? 0.0 : std::sqrt(0.5);  // N0 = 1

  const auto body = [&](TrialRng& rng, detail::ErrorCounts& out) {
    const double h1 = opt.fixed_h1 ? *opt.fixed_h1
                                   : sample_nakagami(c.bsn1.fading, rng);
    const double h2 = opt.fixed_h2 ? *opt.fixed_h2
                                   : sample_nakagami(c.bsn2.fading, rng);
    const double x1 = (rng.next_u64() & 1u) ? -1.0 : 1.0;
    const double x2 = (rng.next_u64() & 1u) ? -1.0 : 1.0;
    const double a1 = l1.scale * h1;
    const double a2 = l2.scale * h2;
    const double w = noise_free ? 0.0 : noise_std * rng.next_normal();
    const double y = a1 * x1 + a2 * x2 + w;
    const double xh1 = y >= 0.0 ? 1.0 : -1.0;  // tie resolves to bit 0
    const double r = y - a1 * xh1;
    const double xh2 = r >= 0.0 ? 1.0 : -1.0;
    out.e1 += xh1 != x1;
    out.e2 += xh2 != x2;
  };
  const auto counts = detail::run_trials(trials, seed, opt.workers, body);
  return detail::make_estimate(counts, trials, seed);
}

/// OMA-TDMA baseline: each user transmits alone in its own slot.
inline BerEstimate simulate_tdma(const ClusterConfig& c, std::uint64_t trials,
                                 std::uint64_t seed,
                                 const SimOptions& opt = {}) {
  c.validate();
  if (trials < 10000)
    throw InsufficientTrials("simulate_tdma: need at least 1e4 trials");
  const auto l1 = detail::link_amplitude(c.bsn1);
  const auto l2 = detail::link_amplitude(c.bsn2);

  const auto body = [&](TrialRng& rng, detail::ErrorCounts& out) {
    const double h1 = opt.fixed_h1 ? *opt.fixed_h1
                                   : sample_nakagami(c.bsn1.fading, rng);
    const double x1 = (rng.next_u64() & 1u) ? -1.0 : 1.0;
    const double w1 = l1.noise_free ? 0.0 : std::sqrt(0.5) * rng.next_normal();
    const double y1 = l1.scale * h1 * x1 + w1;
    out.e1 += (y1 >= 0.0 ? 1.0 : -1.0) != x1;

    const double h2 = opt.fixed_h2 ? *opt.fixed_h2
                                   : sample_nakagami(c.bsn2.fading, rng);
    const double x2 = (rng.next_u64() & 1u) ? -1.0 : 1.0;
    const double w2 = l2.noise_free ? 0.0 : std::sqrt(0.5) * rng.next_normal();
    const double y2 = l2.scale * h2 * x2 + w2;
    out.e2 += (y2 >= 0.0 ? 1.0 : -1.0) != x2;
  };
  const auto counts = detail::run_trials(trials, seed, opt.workers, body);
  return detail::make_estimate(counts, trials, seed);
}

/// NOMA carries two bits per slot, TDMA one.
inline EffectiveBits effective_bits(const BerEstimate& e, Scheme scheme) {
  const double good = (1.0 - e.ber1) + (1.0 - e.ber2);
  if (scheme == Scheme::kNoma) return {scheme, good, good / 2.0};
  return {scheme, good / 2.0, good / 2.0};
}

/// Analytic counterpart of effective_bits from per-user BERs.
inline double normalized_effective_bits(double ber1, double ber2) {
  return ((1.0 - ber1) + (1.0 - ber2)) / 2.0;
}

}  // namespace backnoma

#endif  // BACKNOMA_SIMULATOR_HPP_
