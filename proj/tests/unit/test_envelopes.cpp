#include <doctest.h>

#include <boost/math/special_functions/gamma.hpp>
#include <cmath>

#include "flock/envelopes.hpp"
#include "flock/error.hpp"
#include "flock/kinetic.hpp"
#include "gen.hpp"

using namespace flock;
using flock::testing::Gen;
using flock::testing::rel_diff;

namespace {

// int_0^inf exp(-C1 (1 + t)^p) dt = C1^(-1/p) Gamma(1/p, C1) / p with the
// upper incomplete gamma function.
double c2_oracle(double C1, double beta) {
  const double p = 1.0 - 2.0 * beta;
  return std::pow(C1, -1.0 / p) * boost::math::tgamma(1.0 / p, C1) / p;
}

}  // namespace

TEST_CASE("envelope_constants: kappa1 at the half exponent") {
  const auto p = envelope_constants(0.0, 1.0, 0.5, 1.0, 1.0);
  CHECK(p.require_kappa1() == 1.0);
  CHECK_FALSE(p.kappa2.has_value());
  CHECK_THROWS_AS(p.require_kappa2(), RegimeError);
  CHECK_THROWS_AS(p.require_C2(), RegimeError);
}

TEST_CASE("envelope_constants: zero exponent gives unit kappas") {
  const auto p = envelope_constants(3.7, 12.0, 0.0, 1.3, 2.0);
  CHECK(p.require_kappa1() == 1.0);
  CHECK(p.require_kappa2() == 1.0);
}

TEST_CASE("envelope_constants: hypothesis and domain errors") {
  CHECK_THROWS_AS(envelope_constants(1.0, 0.0, 0.3, 1.0, 1.0), HypothesisError);
  CHECK_THROWS_AS(envelope_constants(-1.0, 1.0, 0.3, 1.0, 1.0), DomainError);
  try {
    envelope_constants(1.0, 0.0, 0.3, 1.0, 1.0);
  } catch (const HypothesisError& e) {
    CHECK(std::string(e.what()) == "hypothesis EV0 > 0 violated");
  }
}

TEST_CASE("c2_integral: exponential case in closed form") {
  CHECK(rel_diff(c2_integral(2.0, 0.0), std::exp(-2.0) / 2.0) < 1e-10);
}

TEST_CASE("property: c2_integral agrees with the incomplete gamma oracle") {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    CAPTURE(seed);
    Gen g(seed);
    const double C1 = std::exp(g.uniform(std::log(0.05), std::log(20.0)));
    const double beta = g.uniform(0.0, 0.4);
    CAPTURE(C1);
    CAPTURE(beta);
    CHECK(rel_diff(c2_integral(C1, beta), c2_oracle(C1, beta)) < 1e-9);
  }
}

TEST_CASE("envelope_constants: kappa2 from the oracle C2") {
  const double X0 = 0.8, EV0 = 2.5, beta = 0.3, lambda = 1.2, K = 0.9;
  const auto p = envelope_constants(X0, EV0, beta, lambda, K);
  const double kappa1 = std::pow(std::max(1.0 + 4.0 * X0, EV0), -beta);
  const double C2 = c2_oracle(lambda * K * kappa1 / (1.0 - 2.0 * beta), beta);
  CHECK(rel_diff(p.require_kappa1(), kappa1) < 1e-15);
  CHECK(rel_diff(p.require_C2(), C2) < 1e-9);
  CHECK(rel_diff(p.require_kappa2(), std::pow(1.0 + 4.0 * X0 + 8.0 * C2 * C2, -beta)) < 1e-9);
  CHECK(rel_diff(diameter_envelope(p, X0), std::sqrt(2.0 * (4.0 * X0 + 8.0 * C2 * C2))) < 1e-9);
}

TEST_CASE("kinetic_kappa3: stated maximum") {
  CHECK(kinetic_kappa3(0.0, 1.0, 1.0, 1.0, 1.0) == 48.0);
  CHECK(kinetic_kappa3(2.0, 0.0, 1.0, 0.0, 1.0) == 49.0);
  CHECK(kinetic_kappa3(0.0, 0.0, 1.0, 10.0, 1.0) == 1200.0);
}

TEST_CASE("kappa4 and kappa5: formulas and regime gates") {
  CHECK(rel_diff(kappa4_constant(48.0, 0.2), 1.0 / (std::pow(144.0, 0.2) * 0.2)) < 1e-15);
  CHECK(kappa4_constant(48.0, 0.0) == 1.0);
  CHECK_THROWS_AS(kappa4_constant(48.0, 0.25), RegimeError);
  // 2 lambda K / (3 kappa3)^(1/4) = 2 / 144^(1/4) = 2 / sqrt(12)
  CHECK(rel_diff(kappa5_constant(48.0, 1.0, 1.0, 0.25), 2.0 / std::sqrt(12.0)) < 1e-15);
  CHECK_THROWS_AS(kappa5_constant(48.0, 1.0, 1.0, 0.2), RegimeError);

  auto p = envelope_constants(1.0, 1.0, 0.25, 1.0, 1.0);
  attach_kinetic_constants(p, 48.0);
  CHECK(p.kappa5.has_value());
  CHECK_FALSE(p.kappa4.has_value());
  CHECK_THROWS_AS(p.require_kappa4(), RegimeError);
  auto q = envelope_constants(1.0, 1.0, 0.2, 1.0, 1.0);
  attach_kinetic_constants(q, 48.0);
  CHECK(q.kappa4.has_value());
  CHECK_FALSE(q.kappa5.has_value());
}

TEST_CASE("velocity_envelope: examples") {
  const auto p0 = envelope_constants(0.0, 1.0, 0.0, 1.0, 1.0);
  CHECK(velocity_envelope(p0, 1.0, 0.0) == 1.0);
  CHECK(velocity_envelope(p0, 1.0, 1.0) == doctest::Approx(0.1353352832366127).epsilon(1e-14));

  const auto ph = envelope_constants(0.0, 1.0, 0.5, 1.0, 1.0);
  CHECK(velocity_envelope(ph, 4.0, 0.0) == 4.0);
  CHECK(velocity_envelope(ph, 4.0, 3.0) == doctest::Approx(0.25).epsilon(1e-14));

  const auto pl = envelope_constants(0.0, 1.0, 0.75, 1.0, 1.0);
  CHECK_THROWS_AS(velocity_envelope(pl, 1.0, 1.0), RegimeError);

  CHECK(velocity_envelope_sharp(3.0, 2.0, 0.0) == 3.0);
  CHECK(velocity_envelope_sharp(3.0, 0.5, std::log(2.0)) == doctest::Approx(1.5).epsilon(1e-15));
}

TEST_CASE("position and phi envelopes") {
  CHECK(position_envelope(1.5, 2.0, 3.0) == 2.0 * 1.5 + 2.0 * 9.0 / 2.0);
  const Kernel k{1.0, 0.5, {}};
  CHECK(phi_lower_envelope(k, 0.5, 1.0, 1.0) == doctest::Approx(1.0 / 2.0).epsilon(1e-15));
}

TEST_CASE("kinetic envelopes: examples") {
  CHECK(phi_kinetic_envelope(48.0, 1.0, 0.0, 7.0) == 1.0);
  CHECK(phi_kinetic_envelope(48.0, 1.0, 0.25, 0.0) == doctest::Approx(1.0 / std::sqrt(std::sqrt(48.0))).epsilon(1e-14));
  CHECK(lambda_envelope_sharp(2.5, 1.0, 1.0, 0.0) == 2.5);
  CHECK(lambda_envelope_sharp(2.5, 1.0, 2.0, std::log(2.0) / 4.0) == doctest::Approx(1.25).epsilon(1e-15));

  auto p = envelope_constants(1.0, 1.0, 0.25, 1.0, 1.0);
  attach_kinetic_constants(p, 48.0);
  CHECK(lambda_envelope(p, 2.0, 0.0) == 2.0);
  CHECK(rel_diff(lambda_envelope(p, 2.0, 3.0), 2.0 * std::pow(4.0, -2.0 / std::sqrt(12.0))) < 1e-15);

  auto q = envelope_constants(1.0, 1.0, 0.0, 1.0, 1.0);
  attach_kinetic_constants(q, 48.0);
  CHECK(rel_diff(lambda_envelope(q, 2.0, 3.0), 2.0 * std::exp(-3.0)) < 1e-15);

  auto r = envelope_constants(1.0, 1.0, 0.3, 1.0, 1.0);
  attach_kinetic_constants(r, 48.0);
  CHECK_THROWS_AS(lambda_envelope(r, 2.0, 1.0), RegimeError);
}

TEST_CASE("m2_lower_bound: limits") {
  CHECK(m2_lower_bound(3.0, 1.0, 2.0, 1.0, 1.0, 0.0) == 3.0);
  CHECK(m2_lower_bound(3.0, 1.0, 2.0, 1.0, 1.0, 1e3) == doctest::Approx(0.5).epsilon(1e-15));
  const double e = std::exp(-2.0 * 1.0 * 2.0 * 0.5 * 1.5);
  CHECK(rel_diff(m2_lower_bound(3.0, 1.0, 2.0, 1.0, 0.5, 1.5), 3.0 * e + 0.5 * (1.0 - e)) < 1e-15);
}
