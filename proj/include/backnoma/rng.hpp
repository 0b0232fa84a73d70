#ifndef BACKNOMA_RNG_HPP_
#define BACKNOMA_RNG_HPP_

#include <cmath>
#include <cstdint>
#include <numbers>

namespace backnoma {

namespace detail {
inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}
}  // namespace detail

// Counter-based random stream: the state is derived purely from
// (seed, stream index), so trial i always sees the same draws no matter how
// the trial range is partitioned across workers.
class TrialRng {
 public:
  TrialRng(std::uint64_t seed, std::uint64_t stream)
      : state_(detail::mix64(seed ^ detail::mix64(
                                        stream + 0x9e3779b97f4a7c15ULL))) {}

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ULL;
    return detail::mix64(state_);
  }

  /// Uniform double in [0, 1).
  double next_double() { return (next_u64() >> 11) * 0x1.0p-53; }

  /// Standard normal draw (Box-Muller, cosine branch only).
  double next_normal() {
    double u1;
    do {
      u1 = next_double();
    } while (u1 <= 0.0);
    const double u2 = next_double();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
  }

  /// Gamma(shape, 1) draw via Marsaglia-Tsang rejection; exact for all
  /// shape > 0 (shape < 1 handled by the boosting identity).
  double next_gamma(double shape) {
    if (shape < 1.0) {
      const double g = next_gamma(shape + 1.0);
      double u;
      do {
        u = next_double();
      } while (u <= 0.0);
      return g * std::pow(u, 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
      double x, v;
      do {
        x = next_normal();
        v = 1.0 + c * x;
      } while (v <= 0.0);
      v = v * v * v;
      const double u = next_double();
      const double x2 = x * x;
      if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
      if (u > 0.0 &&
          std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v)))
        return d * v;
    }
  }

 private:
  std::uint64_t state_;
};

}  // namespace backnoma

#endif  // BACKNOMA_RNG_HPP_
