#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "backnoma/analytic_ber.hpp"
#include "backnoma/rng.hpp"
#include "oracles.hpp"

using namespace backnoma;

namespace {

ClusterConfig make_cluster(double g1, double g2, double snr, double m1,
                           double o1, double m2, double o2) {
  return {{g1, snr, {m1, o1}}, {g2, snr, {m2, o2}}};
}

}  // namespace

TEST_CASE("effective_omegas unit mapping") {
  auto eo = effective_omegas(make_cluster(1.0, 1.0, 0.0, 1, 1, 1, 1));
  CHECK(eo.omega1 == doctest::Approx(2.0).epsilon(1e-14));
  eo = effective_omegas(make_cluster(0.5, 0.5, 10.0, 1, 1, 1, 1));
  CHECK(eo.omega1 == doctest::Approx(10.0).epsilon(1e-13));
  eo = effective_omegas(make_cluster(0.3, 0.3, 20.0, 1, 0.5, 1, 0.5));
  CHECK(eo.omega1 == doctest::Approx(30.0).epsilon(1e-13));
  CHECK_THROWS_AS(effective_omegas(make_cluster(1.5, 0.5, 0, 1, 1, 1, 1)),
                  ValidationError);
}

TEST_CASE("ber_u1_conditional closed form") {
  CHECK(ber_u1_conditional(2.0, 1.0) ==
        doctest::Approx(0.5 * (q_func(3.0) + q_func(1.0))).epsilon(1e-15));
  CHECK(ber_u1_conditional(2.0, 1.0) == doctest::Approx(0.080003).epsilon(1e-4));
  CHECK(ber_u1_conditional(1.7, 0.0) ==
        doctest::Approx(q_func(1.7)).epsilon(1e-15));
  CHECK(ber_u1_conditional(1.0, 1.0) ==
        doctest::Approx(0.5 * (q_func(2.0) + 0.5)).epsilon(1e-15));
}

TEST_CASE("ber_u2_conditional closed form and SIC limit") {
  CHECK(ber_u2_conditional(2.0, 1.0) ==
        doctest::Approx(0.2366333).epsilon(1e-6));
  // perfect SIC: strong user far above the weak one
  CHECK(ber_u2_conditional(40.0, 1.0) ==
        doctest::Approx(q_func(1.0)).epsilon(1e-12));
}

TEST_CASE("conditional BERs match the enumeration oracle") {
  TrialRng rng(77, 0);
  for (int i = 0; i < 20; ++i) {
    const double y1 = 4.0 * rng.next_double();
    const double y2 = 4.0 * rng.next_double();
    const auto oracle = oracles::enumerate_sic_ber(y1, y2);
    CHECK(std::abs(ber_u1_conditional(y1, y2) - oracle.ber1) <= 1e-9);
    CHECK(std::abs(ber_u2_conditional(y1, y2) - oracle.ber2) <= 1e-9);
  }
}

TEST_CASE("ber_u1_avg interference-free limit") {
  const auto c = make_cluster(1.0, 1e-9, 15.0, 4, 1, 1, 1);
  const auto eo = effective_omegas(c);
  CHECK(std::abs(ber_u1_avg(c) - phi_closed(4.0, eo.omega1)) <= 1e-3);
}

TEST_CASE("ber_u1_avg invariant under symmetric node swap") {
  const auto a = make_cluster(0.5, 0.5, 10.0, 2, 1, 2, 1);
  ClusterConfig b = a;
  std::swap(b.bsn1, b.bsn2);
  CHECK(ber_u1_avg(a) == doctest::Approx(ber_u1_avg(b)).epsilon(1e-14));
}

TEST_CASE("ber_u1_avg decreasing in SNR on the reference configurations") {
  for (double g2 : {0.9, 0.6, 0.3}) {
    double prev = 1.0;
    for (double snr = 0.0; snr <= 25.0; snr += 5.0) {
      const double b = ber_u1_avg(make_cluster(1.0, g2, snr, 4, 1, 1, 1));
      CHECK(b < prev);
      prev = b;
    }
  }
}

TEST_CASE("larger reflection separation lowers user-1 BER") {
  for (double snr : {10.0, 15.0, 20.0}) {
    CHECK(ber_u1_avg(make_cluster(1.0, 0.3, snr, 4, 1, 1, 1)) <
          ber_u1_avg(make_cluster(1.0, 0.9, snr, 4, 1, 1, 1)));
  }
}

TEST_CASE("ber_u2_avg perfect-SIC limit") {
  ClusterConfig c = make_cluster(1.0, 0.5, 15.0, 4, 1, 1, 1);
  c.bsn1.snr_db = 60.0;
  const auto eo = effective_omegas(c);
  CHECK(std::abs(ber_u2_avg(c) - phi_closed(1.0, eo.omega2)) <= 1e-3);
}

TEST_CASE("ber_u2_avg stays a probability with small pre-clamp excursion") {
  for (double snr : {0.0, 15.0, 30.0}) {
    for (int i = 1; i <= 10; ++i) {
      for (int j = 1; j <= 10; ++j) {
        const double g1 = i / 10.0;
        const double g2 = j / 10.0;
        const auto c = make_cluster(g1, g2, snr, 4, 1, 1, 0.5);
        double raw = 0.0;
        const double b = ber_u2_avg(c, &raw);
        CHECK(b >= 0.0);
        CHECK(b <= 1.0);
        CHECK(raw >= -0.02);
        CHECK(raw <= 1.02);
      }
    }
  }
}

TEST_CASE("averaged BERs are valid probabilities") {
  for (double snr : {-5.0, 0.0, 10.0, 25.0, 40.0}) {
    const auto c = make_cluster(0.8, 0.2, snr, 3, 1, 1, 0.5);
    const double b1 = ber_u1_avg(c);
    const double b2 = ber_u2_avg(c);
    CHECK(b1 >= 0.0);
    CHECK(b1 <= 1.0);
    CHECK(b2 >= 0.0);
    CHECK(b2 <= 1.0);
  }
}
