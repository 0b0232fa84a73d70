#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "backnoma/specfun.hpp"
#include "oracles.hpp"

using namespace backnoma;

TEST_CASE("q_func basic values") {
  CHECK(q_func(0.0) == doctest::Approx(0.5).epsilon(1e-14));
  // numeric integration of the Gaussian tail to 1e-12
  CHECK(q_func(1.0) == doctest::Approx(0.1586552539314571).epsilon(1e-12));
  CHECK(q_func(-2.3) == doctest::Approx(1.0 - q_func(2.3)).epsilon(1e-14));
}

TEST_CASE("q_func reflection and monotonicity") {
  double prev = 1.0;
  for (double x = -6.0; x <= 6.0; x += 0.25) {
    const double q = q_func(x);
    CHECK(q < prev);
    CHECK(std::abs(q + q_func(-x) - 1.0) <= 1e-14);
    prev = q;
  }
}

TEST_CASE("gauss_2f1 trivial and logarithm identity") {
  CHECK(gauss_2f1(0.7, -1.3, 2.4, 0.0) == 1.0);
  // 2F1(1,1;2;z) = -ln(1-z)/z
  CHECK(gauss_2f1(1, 1, 2, 0.5) ==
        doctest::Approx(-std::log(0.5) / 0.5).epsilon(1e-12));
  CHECK(gauss_2f1(1, 1, 2, -0.5) ==
        doctest::Approx(-std::log(1.5) / -0.5).epsilon(1e-12));
}

TEST_CASE("gauss_2f1 matches brute-force series") {
  const double want = oracles::hyp2f1_series_bruteforce(1.0, 1.5, 2.5, 0.3);
  CHECK(gauss_2f1(1.0, 1.5, 2.5, 0.3) == doctest::Approx(want).epsilon(1e-10));
  // transform region against a slowly-converging direct summation
  const double want2 = oracles::hyp2f1_series_bruteforce(1.0, 2.5, 3.0, 0.96);
  CHECK(gauss_2f1(1.0, 2.5, 3.0, 0.96) ==
        doctest::Approx(want2).epsilon(1e-10));
}

TEST_CASE("gauss_2f1 error paths") {
  CHECK_THROWS_AS(gauss_2f1(1, 1, 0, 0.5), PoleAtC);
  CHECK_THROWS_AS(gauss_2f1(1, 1, -2, 0.5), PoleAtC);
  CHECK_THROWS_AS(gauss_2f1(1, 1, 2, 1.0), NonConvergent);
  CHECK_THROWS_AS(gauss_2f1(0.5, 0.5, 2, 1.3), NonConvergent);
}

TEST_CASE("phi_numeric fixed points") {
  CHECK(phi_numeric(1.0, 0.0) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(phi_numeric(3.7, 0.0) == doctest::Approx(0.5).epsilon(1e-14));
  // Rayleigh closed form (1/2)(1 - sqrt((g/2)/(1+g/2))) at g = 10
  const double rayleigh = 0.5 * (1.0 - std::sqrt(5.0 / 6.0));
  CHECK(phi_numeric(1.0, 10.0) == doctest::Approx(rayleigh).epsilon(1e-10));
  CHECK_THROWS_AS(phi_numeric(0.3, 1.0), InvalidShape);
}

TEST_CASE("phi_closed equals phi_numeric for integer m") {
  for (int m = 1; m <= 8; ++m) {
    for (double g : {0.01, 0.1, 1.0, 10.0, 100.0, 1000.0}) {
      CHECK(std::abs(phi_closed(m, g) - phi_numeric(m, g)) <= 1e-9);
    }
  }
  CHECK(phi_closed(1.0, 10.0) ==
        doctest::Approx(0.5 * (1.0 - std::sqrt(5.0 / 6.0))).epsilon(1e-10));
  CHECK(phi_closed(5.0, 0.0) == 0.5);
  CHECK(std::abs(phi_closed(2, 6) - phi_numeric(2, 6)) <= 1e-9);
}

TEST_CASE("phi_closed non-integer branch tracks quadrature") {
  for (double m : {0.5, 1.5, 2.5}) {
    for (double g : {0.01, 0.1, 1.0, 10.0, 100.0, 1000.0}) {
      CHECK(std::abs(phi_closed(m, g) - phi_numeric(m, g)) <= 1e-6);
    }
  }
  CHECK_THROWS_AS(phi_closed(0.49, 1.0), InvalidShape);
}

TEST_CASE("phi_closed monotone in snr and in shape") {
  for (int m = 1; m <= 6; ++m) {
    double prev = 0.5;
    for (double g : {1.0, 10.0, 100.0}) {
      const double p = phi_closed(m, g);
      CHECK(p > 0.0);
      CHECK(p < prev);
      prev = p;
    }
  }
  for (double g : {1.0, 10.0, 100.0}) {
    double prev = 1.0;
    for (int m = 1; m <= 6; ++m) {
      const double p = phi_closed(m, g);
      CHECK(p < prev);
      prev = p;
    }
  }
}

TEST_CASE("lambda_normal closed form") {
  CHECK(lambda_normal(0.0, 4.0) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(lambda_normal(1.0, 0.0) == doctest::Approx(q_func(1.0)).epsilon(1e-14));
  // mu=2, sigma2=3: argument 2/sqrt(4) = 1
  CHECK(lambda_normal(2.0, 3.0) == doctest::Approx(q_func(1.0)).epsilon(1e-14));
}

TEST_CASE("lambda_normal equals the direct integral") {
  for (double mu : {-5.0, -2.0, 0.0, 1.0, 3.0, 5.0}) {
    for (double s2 : {0.25, 1.0, 4.0, 10.0}) {
      const double sigma = std::sqrt(s2);
      const auto integrand = [mu, sigma](double w) {
        const double z = (w - mu) / sigma;
        return q_func(w) * std::exp(-0.5 * z * z) /
               (sigma * std::sqrt(2.0 * std::numbers::pi));
      };
      const double numeric =
          oracles::simpson(integrand, mu - 10.0 * sigma, mu + 10.0 * sigma);
      CHECK(std::abs(lambda_normal(mu, s2) - numeric) <= 1e-10);
    }
  }
}

TEST_CASE("lambda_normal monotone in mu, degenerates to q_func") {
  double prev = 1.0;
  for (double mu = -5.0; mu <= 5.0; mu += 0.5) {
    const double v = lambda_normal(mu, 2.0);
    CHECK(v < prev);
    prev = v;
  }
  for (double mu : {-1.0, 0.5, 2.0}) {
    CHECK(std::abs(lambda_normal(mu, 1e-14) - q_func(mu)) <= 1e-7);
  }
}
