#include <doctest.h>

#include <cmath>

#include "flock/diagnostics.hpp"
#include "flock/error.hpp"
#include "flock/particle.hpp"
#include "gen.hpp"

using namespace flock;
using flock::testing::Gen;
using flock::testing::rel_diff;

namespace {

DiagnosticSeries series_of(const std::vector<double>& t, const std::vector<double>& phi) {
  DiagnosticSeries s(t.size());
  for (std::size_t k = 0; k < t.size(); ++k) {
    s[k].t = t[k];
    s[k].phi = phi[k];
  }
  return s;
}

}  // namespace

TEST_CASE("moments: direct sums") {
  ParticleState one(1, 2);
  one.v = {3.0, 4.0};
  const auto m = moments(one);
  CHECK(m.m0 == 1.0);
  CHECK(m.m1 == std::vector<double>{3.0, 4.0});
  CHECK(m.m2 == 25.0);

  const auto z = moments(ParticleState(5, 3));
  CHECK(z.m1 == std::vector<double>{0.0, 0.0, 0.0});
  CHECK(z.m2 == 0.0);

  ParticleState pair(2, 1);
  pair.v = {1.0, -1.0};
  const auto p = moments(pair);
  CHECK(p.m0 == 2.0);
  CHECK(p.m1[0] == 0.0);
  CHECK(p.m2 == 2.0);
}

TEST_CASE("fluctuations: examples") {
  ParticleState s(2, 1);
  CHECK(fluctuation_positions(s) == 0.0);
  s.x = {-1.0, 1.0};
  s.v = {1.0, -1.0};
  CHECK(fluctuation_positions(s) == 2.0);
  CHECK(fluctuation_velocities(s) == 2.0);
  s.v = {0.3, 0.3};
  CHECK(fluctuation_velocities(s) == 0.0);
  CHECK_THROWS_AS(fluctuation_positions(ParticleState(0, 1)), IntegrityError);
}

TEST_CASE("min_interaction: examples") {
  const Kernel k{1.0, 0.5, {}};
  ParticleState one(1, 2);
  one.x = {5.0, 5.0};
  CHECK(min_interaction(one, k) == 1.0);
  ParticleState pair(2, 1);
  pair.x = {0.0, std::sqrt(3.0)};
  CHECK(min_interaction(pair, k) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(min_interaction(pair, k, Backend::serial) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("accumulate_Phi: trapezoid examples") {
  auto c = series_of({0.0, 0.5, 1.25, 3.0}, {0.7, 0.7, 0.7, 0.7});
  accumulate_Phi(c);
  CHECK(c.back().Phi == doctest::Approx(0.7 * 3.0).epsilon(1e-15));

  auto one = series_of({2.0}, {0.4});
  accumulate_Phi(one);
  CHECK(one[0].Phi == 0.0);

  auto lin = series_of({0.0, 1.0, 2.0}, {0.0, 1.0, 2.0});
  accumulate_Phi(lin);
  CHECK(lin[0].Phi == 0.0);
  CHECK(lin[1].Phi == 0.5);
  CHECK(lin[2].Phi == 2.0);

  auto bad = series_of({0.0, 2.0, 1.0}, {1.0, 1.0, 1.0});
  CHECK_THROWS_AS(accumulate_Phi(bad), IntegrityError);
}

TEST_CASE("fit_decay_rate: exact data") {
  std::vector<double> t, y, ya;
  for (int k = 0; k <= 40; ++k) {
    t.push_back(0.1 * k);
    y.push_back(std::exp(-3.0 * t.back()));
    ya.push_back(std::pow(1.0 + t.back(), -2.0));
  }
  CHECK(std::abs(fit_decay_rate(t, y, DecayModel::exponential).rate + 3.0) < 1e-9);
  CHECK(std::abs(fit_decay_rate(t, ya, DecayModel::algebraic).rate + 2.0) < 1e-9);
  y[3] = 0.0;
  CHECK_THROWS_AS(fit_decay_rate(t, y, DecayModel::exponential), DomainError);
  CHECK_THROWS_AS(fit_decay_rate(std::vector<double>{1.0}, std::vector<double>{1.0}, DecayModel::exponential),
                  DomainError);
}

TEST_CASE("fit_decay_rate: two-body velocity fluctuation decays at 2 lambda K") {
  const double lambda = 0.8, K = 1.5;
  ParticleState s(2, 1);
  s.v = {1.0, -1.0};
  SimConfig cfg{lambda, Kernel{K, 0.0, {}}, 1e-3, 4.0, 100};
  const auto traj = simulate(cfg, s);
  const auto fit = fit_decay_rate(traj.series, "EV", 0.0, 4.0);
  CHECK(rel_diff(fit.rate, -2.0 * lambda * K) < 0.01);
  CHECK_THROWS_AS(fit_decay_rate(traj.series, "nope", 0.0, 1.0), DomainError);
}

TEST_CASE("property: EV equals m2 - |m1|^2 / m0") {
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    CAPTURE(seed);
    Gen g(seed);
    const auto s = g.state(g.index(1, 50), g.index(1, 4), 1.0, g.uniform(0.1, 3.0));
    const auto m = moments(s);
    double m1sq = 0.0;
    for (double a : m.m1) m1sq += a * a;
    CHECK(std::abs(fluctuation_velocities(s) - (m.m2 - m1sq / m.m0)) <= 1e-12 * (1.0 + m.m2));
  }
}

TEST_CASE("property: X is translation invariant") {
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    CAPTURE(seed);
    Gen g(1000 + seed);
    const std::size_t d = g.index(1, 3);
    auto s = g.state(g.index(1, 40), d);
    const double X = fluctuation_positions(s);
    const auto shift = g.vec(d, 1.0);
    for (std::size_t i = 0; i < s.count(); ++i) {
      for (std::size_t k = 0; k < d; ++k) s.x[i * d + k] += shift[k];
    }
    CHECK(std::abs(fluctuation_positions(s) - X) < 1e-12);
  }
}

TEST_CASE("property: phi is at least r(sqrt(2 X))") {
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    CAPTURE(seed);
    Gen g(2000 + seed);
    const Kernel k{g.uniform(0.5, 2.0), g.uniform(0.0, 1.5), {}};
    const auto s = g.state(g.index(1, 40), g.index(1, 3), g.uniform(0.1, 5.0));
    CHECK(min_interaction(s, k) >= kernel_eval(k, std::sqrt(2.0 * fluctuation_positions(s))) * (1.0 - 1e-12));
  }
}

TEST_CASE("property: Phi is nondecreasing and phi stays below the amplitude") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    CAPTURE(seed);
    Gen g(3000 + seed);
    const Kernel k{g.uniform(0.5, 2.0), g.uniform(0.0, 1.0), {}};
    SimConfig cfg{1.0, k, 1e-2, 2.0, 5};
    const auto traj = simulate(cfg, g.state(g.index(2, 20), 2));
    for (std::size_t i = 1; i < traj.series.size(); ++i) CHECK(traj.series[i].Phi >= traj.series[i - 1].Phi);
    for (const auto& r : traj.series) {
      CHECK(r.phi <= k.amplitude);
      double m1sq = 0.0;
      for (double a : r.m1) m1sq += a * a;
      CHECK(r.m2 >= m1sq / r.m0 - 1e-12);
    }
  }
}
