#ifndef BACKNOMA_DISTRIBUTIONS_HPP_
#define BACKNOMA_DISTRIBUTIONS_HPP_

#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <string>

#include "backnoma/errors.hpp"
#include "backnoma/rng.hpp"
#include "backnoma/specfun.hpp"

// Nakagami-m distribution kernel: moments, exact sampling, the moment-matched
// Nakagami/normal approximations of the sum and difference of two independent
// Nakagami variables, and the Kolmogorov-Smirnov goodness-of-fit machinery.

namespace backnoma {

/// Fading-severity and mean-power pair (m, Omega) of one Nakagami amplitude.
struct NakagamiParams {
  double m;
  double omega;

  void validate() const {
    if (!(m >= 0.5))
      throw InvalidShape("Nakagami shape m must be >= 0.5, got " +
                         std::to_string(m));
    if (!(omega > 0.0))
      throw InvalidShape("Nakagami power omega must be > 0, got " +
                         std::to_string(omega));
  }
};

struct NormalParams {
  double mu;
  double sigma2;
};

struct KsReport {
  double statistic;
  double critical;
  std::size_t n_samples;
  double alpha;
  bool reject;
};

/// nth raw moment E[X^n] of Nakagami(m, Omega), via log-gamma.
inline double nakagami_moment(const NakagamiParams& p, int n) {
  p.validate();
  return std::exp(std::lgamma(p.m + n / 2.0) - std::lgamma(p.m) +
                  (n / 2.0) * std::log(p.omega / p.m));
}

/// Amplitude draw X = sqrt(G), G ~ Gamma(m, Omega/m); E[X^2] = Omega.
inline double sample_nakagami(const NakagamiParams& p, TrialRng& rng) {
  return std::sqrt(rng.next_gamma(p.m) * (p.omega / p.m));
}

/// CDF of Nakagami(m, Omega) at x.
inline double nakagami_cdf(const NakagamiParams& p, double x) {
  if (x <= 0.0) return 0.0;
  return detail::gamma_p(p.m, p.m * x * x / p.omega);
}

inline double normal_cdf(const NormalParams& p, double x) {
  if (p.sigma2 <= 0.0) return x < p.mu ? 0.0 : 1.0;
  return 0.5 * std::erfc((p.mu - x) /
                         (std::sqrt(p.sigma2) * std::numbers::sqrt2));
}

/// Moment-matched Nakagami approximation of the sum of two independent
/// Nakagami variables: Omega_R from the exact second moment, m_R from the
/// exact fourth moment via the multinomial expansion.
inline NakagamiParams approx_sum(const NakagamiParams& p1,
                                 const NakagamiParams& p2) {
  p1.validate();
  p2.validate();
  const double e1_1 = nakagami_moment(p1, 1);
  const double e2_1 = nakagami_moment(p2, 1);
  const double omega_r = p1.omega + p2.omega + 2.0 * e1_1 * e2_1;
  const double e4 = nakagami_moment(p1, 4) +
                    4.0 * nakagami_moment(p1, 3) * e2_1 +
                    6.0 * p1.omega * p2.omega +
                    4.0 * e1_1 * nakagami_moment(p2, 3) +
                    nakagami_moment(p2, 4);
  const double var = e4 - omega_r * omega_r;
  if (var <= 0.0)
    throw DegenerateMatch("approx_sum: non-positive fourth-moment excess");
  return {omega_r * omega_r / var, omega_r};
}

/// Moment-matched normal approximation of the difference of two independent
/// Nakagami variables.
inline NormalParams approx_diff(const NakagamiParams& p1,
                                const NakagamiParams& p2) {
  p1.validate();
  p2.validate();
  const double e1_1 = nakagami_moment(p1, 1);
  const double e2_1 = nakagami_moment(p2, 1);
  const double mu = e1_1 - e2_1;
  const double ez2 = p1.omega + p2.omega - 2.0 * e1_1 * e2_1;
  double sigma2 = ez2 - mu * mu;
  if (sigma2 < -1e-12)
    throw DegenerateMatch("approx_diff: negative matched variance");
  if (sigma2 < 0.0) sigma2 = 0.0;
  return {mu, sigma2};
}

/// Two-sided Kolmogorov-Smirnov test of sorted samples against a hypothesized
/// CDF. Critical value is the asymptotic sqrt(ln(2/alpha) / (2N)).
inline KsReport ks_test(std::span<const double> sorted_samples,
                        const std::function<double(double)>& hypothesized_cdf,
                        double alpha) {
  const std::size_t n = sorted_samples.size();
  if (n < 2) throw EmptySample("ks_test: need at least 2 samples");
  double d = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double f = hypothesized_cdf(sorted_samples[i]);
    const double hi = (i + 1.0) / n - f;
    const double lo = f - static_cast<double>(i) / n;
    d = std::max({d, hi, lo});
  }
  const double critical = std::sqrt(std::log(2.0 / alpha) / (2.0 * n));
  return {d, critical, n, alpha, d > critical};
}

}  // namespace backnoma

#endif  // BACKNOMA_DISTRIBUTIONS_HPP_
