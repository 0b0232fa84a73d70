#ifndef BACKNOMA_ANALYTIC_BER_HPP_
#define BACKNOMA_ANALYTIC_BER_HPP_

#include <algorithm>
#include <cmath>
#include <string>

#include "backnoma/distributions.hpp"
#include "backnoma/errors.hpp"
#include "backnoma/specfun.hpp"

// Closed-form conditional and average BER of the two users of a NOMA
// backscatter cluster: the strong user is decoded first by a maximum
// likelihood sign rule, the weak user after (imperfect) interference
// subtraction.

namespace backnoma {

/// One backscatter node's link: power reflection coefficient, transmit SNR
/// in dB, and the Nakagami fading of the backscatter channel.
struct BsnLink {
  double reflection;
  double snr_db;
  NakagamiParams fading;

  void validate() const {
    if (!(reflection > 0.0 && reflection <= 1.0))
      throw ValidationError("reflection coefficient must be in (0, 1], got " +
                            std::to_string(reflection));
    fading.validate();
  }
};

/// Two-node cluster; bsn1 is the strong user and is decoded first.
struct ClusterConfig {
  BsnLink bsn1;
  BsnLink bsn2;

  void validate() const {
    bsn1.validate();
    bsn2.validate();
  }
};

/// Mean-square powers of the noise-normalized received amplitudes.
struct EffectiveOmegas {
  double omega1;
  double omega2;
};

/// Omega_i = 2 * 10^(snr_db/10) * Gamma_i * Omega_h,i with N0 = 1.
inline EffectiveOmegas effective_omegas(const ClusterConfig& c) {
  c.validate();
  const auto one = [](const BsnLink& l) {
    return 2.0 * std::pow(10.0, l.snr_db / 10.0) * l.reflection *
           l.fading.omega;
  };
  return {one(c.bsn1), one(c.bsn2)};
}

/// BER of the strong user for realized normalized amplitudes y1, y2:
/// (1/2)[Q(y1 + y2) + Q(y1 - y2)].
inline Probability ber_u1_conditional(double y1, double y2) {
  return 0.5 * (q_func(y1 + y2) + q_func(y1 - y2));
}

/// BER of the weak user under SIC with error propagation:
/// Q(y2) - (1/2)Q(y1+y2) + (1/2)[Q(2 y1 + y2) + Q(y1 - y2) - Q(2 y1 - y2)].
inline Probability ber_u2_conditional(double y1, double y2) {
  return q_func(y2) - 0.5 * q_func(y1 + y2) +
         0.5 * (q_func(2.0 * y1 + y2) + q_func(y1 - y2) -
                q_func(2.0 * y1 - y2));
}

/// Average BER of the strong user: (1/2)[Phi(sum approx) + Lambda(diff
/// approx)] over the two Nakagami envelopes.
inline Probability ber_u1_avg(const ClusterConfig& c) {
  const EffectiveOmegas eo = effective_omegas(c);
  const NakagamiParams n1{c.bsn1.fading.m, eo.omega1};
  const NakagamiParams n2{c.bsn2.fading.m, eo.omega2};
  const NakagamiParams r = approx_sum(n1, n2);
  const NormalParams w = approx_diff(n1, n2);
  return 0.5 * (phi_closed(r.m, r.omega) + lambda_normal(w.mu, w.sigma2));
}

/// Average BER of the weak user; the error-propagation terms use the
/// doubled-amplitude envelope (4 * Omega_1). Result clamped to [0, 1]; the
/// raw combination is reported through pre_clamp when requested.
inline Probability ber_u2_avg(const ClusterConfig& c,
                              double* pre_clamp = nullptr) {
  const EffectiveOmegas eo = effective_omegas(c);
  const NakagamiParams n1{c.bsn1.fading.m, eo.omega1};
  const NakagamiParams n2{c.bsn2.fading.m, eo.omega2};
  const NakagamiParams n1c{c.bsn1.fading.m, 4.0 * eo.omega1};
  const NakagamiParams r1 = approx_sum(n1, n2);
  const NormalParams w1 = approx_diff(n1, n2);
  const NakagamiParams r2 = approx_sum(n1c, n2);
  const NormalParams w2 = approx_diff(n1c, n2);
  const double raw =
      phi_closed(n2.m, n2.omega) +
      0.5 * (-phi_closed(r1.m, r1.omega) + phi_closed(r2.m, r2.omega) +
             lambda_normal(w1.mu, w1.sigma2) -
             lambda_normal(w2.mu, w2.sigma2));
  if (pre_clamp != nullptr) *pre_clamp = raw;
  return std::clamp(raw, 0.0, 1.0);
}

}  // namespace backnoma

#endif  // BACKNOMA_ANALYTIC_BER_HPP_
