#ifndef BACKNOMA_SPECFUN_HPP_
#define BACKNOMA_SPECFUN_HPP_

#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "backnoma/errors.hpp"

// Special functions used by the closed-form BER expressions: the Gaussian Q
// function, the Gauss hypergeometric function, the Nakagami-averaged BER
// kernel Phi and the normal-averaged Q integral Lambda.

namespace backnoma {

using Probability = double;

/// Gaussian tail probability Q(x) = P(N(0,1) > x).
inline Probability q_func(double x) {
  return 0.5 * std::erfc(x / std::numbers::sqrt2);
}

namespace detail {

// 15-point Kronrod nodes/weights with embedded 7-point Gauss rule
// (QUADPACK dqk15 constants).
inline constexpr double kKronrodNodes[8] = {
    0.99145537112081263920685469752633,
    0.94910791234275852452618968404785,
    0.86486442335976907278971278864093,
    0.74153118559939443986386477328079,
    0.58608723546769113029414483825873,
    0.40584515137739716690660641207696,
    0.20778495500789846760068940377324,
    0.0};
inline constexpr double kKronrodWeights[8] = {
    0.02293532201052922496373200805897,
    0.06309209262997855329070066318921,
    0.10479001032225018383987632254152,
    0.14065325971552591874518959051024,
    0.16900472663926790282658342659855,
    0.19035057806478540991325640242101,
    0.20443294007529889241416199923465,
    0.20948214108472782801299917489171};
inline constexpr double kGaussWeights[4] = {
    0.12948496616886969327061143267908,
    0.27970539148927666790146777142378,
    0.38183005050511894495036977548898,
    0.41795918367346938775510204081633};

template <class F>
void gauss_kronrod_15(const F& f, double a, double b, double* result,
                      double* err) {
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  double kronrod = kKronrodWeights[7] * f(mid);
  double gauss = kGaussWeights[3] * f(mid);
  for (int i = 0; i < 7; ++i) {
    const double dx = half * kKronrodNodes[i];
    const double fsum = f(mid - dx) + f(mid + dx);
    kronrod += kKronrodWeights[i] * fsum;
    if (i % 2 == 1) gauss += kGaussWeights[i / 2] * fsum;
  }
  *result = kronrod * half;
  *err = std::abs((kronrod - gauss) * half);
}

// Adaptive bisection on the Kronrod error estimate.
template <class F>
double integrate_adaptive(const F& f, double a, double b, double abs_tol,
                          std::size_t max_intervals = (1u << 14)) {
  struct Segment {
    double a, b, value, error;
  };
  std::vector<Segment> stack;
  double v, e;
  gauss_kronrod_15(f, a, b, &v, &e);
  stack.push_back({a, b, v, e});
  double total = v;
  double total_err = e;
  std::size_t splits = 0;
  while (total_err > abs_tol && splits < max_intervals) {
    // split the segment with the largest error
    std::size_t worst = 0;
    for (std::size_t i = 1; i < stack.size(); ++i)
      if (stack[i].error > stack[worst].error) worst = i;
    Segment seg = stack[worst];
    const double mid = 0.5 * (seg.a + seg.b);
    Segment left, right;
    left.a = seg.a;
    left.b = mid;
    right.a = mid;
    right.b = seg.b;
    gauss_kronrod_15(f, left.a, left.b, &left.value, &left.error);
    gauss_kronrod_15(f, right.a, right.b, &right.value, &right.error);
    total += left.value + right.value - seg.value;
    total_err += left.error + right.error - seg.error;
    stack[worst] = left;
    stack.push_back(right);
    ++splits;
  }
  return total;
}

// Regularized lower incomplete gamma P(a, x), series + continued fraction.
inline double gamma_p(double a, double x) {
  if (x <= 0.0) return 0.0;
  if (x < a + 1.0) {
    // series expansion
    double term = 1.0 / a;
    double sum = term;
    double ap = a;
    for (int n = 0; n < 500; ++n) {
      ap += 1.0;
      term *= x / ap;
      sum += term;
      if (std::abs(term) < std::abs(sum) * 1e-16) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
  }
  // Lentz continued fraction for Q(a, x)
  const double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 500; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < 1e-16) break;
  }
  const double q = std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
  return 1.0 - q;
}

inline bool near_integer(double x, double tol = 1e-9) {
  return std::abs(x - std::round(x)) < tol;
}

// Direct series summation, valid for |z| < 1.
inline double hyp2f1_series(double a, double b, double c, double z) {
  double term = 1.0;
  double sum = 1.0;
  for (int k = 0; k < 200000; ++k) {
    term *= (a + k) * (b + k) / ((c + k) * (k + 1.0)) * z;
    sum += term;
    if (std::abs(term) <= std::abs(sum) * 1e-16) return sum;
  }
  throw NonConvergent("2F1 series did not converge at z=" + std::to_string(z));
}

}  // namespace detail

/// Gauss hypergeometric function 2F1(a, b; c; z) for real arguments.
/// Series summation with the Pfaff (z < 0) and 1-z (z near 1) linear
/// transformations.
inline double gauss_2f1(double a, double b, double c, double z) {
  if (c <= 0.0 && detail::near_integer(c))
    throw PoleAtC("2F1 pole: c is a non-positive integer");
  if (z == 0.0) return 1.0;
  if (z < 0.0) {
    // Pfaff transformation maps z in (-inf, 0) to z/(z-1) in (0, 1)
    return std::pow(1.0 - z, -a) * gauss_2f1(a, c - b, c, z / (z - 1.0));
  }
  if (z >= 1.0) throw NonConvergent("2F1 divergent for z >= 1");
  if (z <= 0.9) return detail::hyp2f1_series(a, b, c, z);
  // connection formula in terms of 1-z; needs c-a-b non-integer
  const double cab = c - a - b;
  if (detail::near_integer(cab))
    throw NonConvergent("2F1: 1-z transform needs non-integer c-a-b");
  const double g1 = std::tgamma(c) * std::tgamma(cab) /
                    (std::tgamma(c - a) * std::tgamma(c - b));
  const double g2 = std::tgamma(c) * std::tgamma(-cab) /
                    (std::tgamma(a) * std::tgamma(b));
  return g1 * detail::hyp2f1_series(a, b, a + b - c + 1.0, 1.0 - z) +
         g2 * std::pow(1.0 - z, cab) *
             detail::hyp2f1_series(c - a, c - b, cab + 1.0, 1.0 - z);
}

/// Average BER of BPSK over a Nakagami-m envelope with mean-square SNR
/// gamma_bar, evaluated by adaptive quadrature of the Craig-form integral
///   (1/pi) int_0^{pi/2} (1 + gamma_bar / (2 m sin^2 t))^(-m) dt.
/// Serves as the ground-truth oracle for phi_closed.
inline Probability phi_numeric(double m, double gamma_bar) {
  if (m < 0.5) throw InvalidShape("phi: fading parameter m must be >= 0.5");
  if (gamma_bar <= 0.0) return 0.5;
  const auto integrand = [m, gamma_bar](double theta) {
    const double s = std::sin(theta);
    return std::exp(-m * std::log1p(gamma_bar / (2.0 * m * s * s)));
  };
  const double v =
      detail::integrate_adaptive(integrand, 0.0, std::numbers::pi / 2, 1e-12);
  return v / std::numbers::pi;
}

/// Closed form of phi_numeric: the finite binomial sum for integer m and the
/// hypergeometric expression otherwise (falls back to quadrature if the
/// hypergeometric route fails to converge).
inline Probability phi_closed(double m, double gamma_bar) {
  if (m < 0.5) throw InvalidShape("phi: fading parameter m must be >= 0.5");
  if (gamma_bar <= 0.0) return 0.5;
  if (detail::near_integer(m)) {
    const int mi = static_cast<int>(std::llround(m));
    const double psi2 = (gamma_bar / 2.0) / (mi + gamma_bar / 2.0);
    const double psi = std::sqrt(psi2);
    const double q = (1.0 - psi2) / 4.0;
    // sum_{k=0}^{m-1} C(2k, k) q^k, accumulated via the ratio
    // C(2k+2, k+1) / C(2k, k) = 2 (2k+1) / (k+1)
    double term = 1.0;
    double sum = 1.0;
    for (int k = 0; k + 1 < mi; ++k) {
      term *= 2.0 * (2.0 * k + 1.0) / (k + 1.0) * q;
      sum += term;
    }
    return 0.5 * (1.0 - psi * sum);
  }
  const double c = gamma_bar / (2.0 * m);
  const double prefactor =
      0.5 / std::sqrt(std::numbers::pi) * std::sqrt(c) *
      std::exp(-(m + 0.5) * std::log1p(c) + std::lgamma(m + 0.5) -
               std::lgamma(m + 1.0));
  try {
    return prefactor * gauss_2f1(1.0, m + 0.5, m + 1.0, 1.0 / (1.0 + c));
  } catch (const NonConvergent&) {
    return phi_numeric(m, gamma_bar);
  }
}

/// Average of Q over a normal variable: int Q(w) N(w; mu, sigma2) dw,
/// closed form Q(mu / sqrt(sigma2 + 1)).
inline Probability lambda_normal(double mu, double sigma2) {
  return q_func(mu / std::sqrt(sigma2 + 1.0));
}

}  // namespace backnoma

#endif  // BACKNOMA_SPECFUN_HPP_
