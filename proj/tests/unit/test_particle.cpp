#include <doctest.h>

#include <cmath>
#include <limits>

#include "flock/diagnostics.hpp"
#include "flock/error.hpp"
#include "flock/particle.hpp"
#include "gen.hpp"

using namespace flock;
using flock::testing::Gen;
using flock::testing::rel_diff;

namespace {

ParticleState two_body(double v1, double v2) {
  ParticleState s(2, 1);
  s.v = {v1, v2};
  return s;
}

// |v1 - v2|(t) for two agents under a constant kernel, written out by hand:
// d(v1 - v2)/dt = -(lambda/2) K 2 (v1 - v2).
double two_body_gap(double gap0, double lambda, double K, double t) { return gap0 * std::exp(-lambda * K * t); }

double endpoint_error(double dt) {
  SimConfig cfg;
  cfg.kernel = {1.0, 0.0, {}};
  cfg.dt = dt;
  cfg.t_end = 5.0;
  cfg.record_stride = 1000000;
  const auto traj = simulate(cfg, two_body(1.0, -1.0));
  const double gap = traj.final_state.v[0] - traj.final_state.v[1];
  return std::abs(gap - two_body_gap(2.0, 1.0, 1.0, 5.0));
}

}  // namespace

TEST_CASE("cs_rhs: single agent feels no force") {
  ParticleState s(1, 3);
  s.v = {1.0, -2.0, 0.5};
  const auto d = cs_rhs(s, 1.0, Kernel{1.0, 0.3, {}});
  CHECK(d.dv == std::vector<double>{0.0, 0.0, 0.0});
  CHECK(d.dx == s.v);
}

TEST_CASE("cs_rhs: equal velocities are a fixed point") {
  ParticleState s(2, 2);
  s.x = {0.0, 0.0, 3.0, -1.0};
  s.v = {0.7, 0.2, 0.7, 0.2};
  const auto d = cs_rhs(s, 2.0, Kernel{1.0, 0.5, {}});
  for (double a : d.dv) CHECK(a == 0.0);
}

TEST_CASE("cs_rhs: two-body hand evaluation") {
  const auto d = cs_rhs(two_body(1.0, -1.0), 1.0, Kernel{1.0, 0.0, {}});
  CHECK(d.dv[0] == doctest::Approx(-1.0).epsilon(1e-15));
  CHECK(d.dv[1] == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("cs_rhs: non-finite state is rejected") {
  auto s = two_body(1.0, std::numeric_limits<double>::quiet_NaN());
  CHECK_THROWS_AS(cs_rhs(s, 1.0, Kernel{}), IntegrityError);
}

TEST_CASE("step_rk4: free streaming for one agent") {
  ParticleState s(1, 2);
  s.x = {1.0, 2.0};
  s.v = {0.25, -0.5};
  const auto next = step_rk4(s, 1.0, Kernel{1.0, 0.5, {}}, 0.125);
  CHECK(next.x[0] == 1.0 + 0.25 * 0.125);
  CHECK(next.x[1] == 2.0 - 0.5 * 0.125);
  CHECK(next.v == s.v);
  CHECK(next.t == 0.125);
}

TEST_CASE("step_rk4: one step matches the two-body solution to local order") {
  const double dt = 0.01;
  const auto next = step_rk4(two_body(1.0, -1.0), 1.0, Kernel{1.0, 0.0, {}}, dt);
  CHECK(std::abs((next.v[0] - next.v[1]) - two_body_gap(2.0, 1.0, 1.0, dt)) < 1e-11);
}

TEST_CASE("step_rk4: overflow names the step") {
  ParticleState s(2, 1);
  s.x = {0.0, 1.0};
  s.v = {1e308, -1e308};
  try {
    simulate(SimConfig{1.0, Kernel{1.0, 0.0, {}}, 1.0, 3.0, 1}, s);
    FAIL("expected OverflowError");
  } catch (const OverflowError& e) {
    CHECK(e.step() == 1);
    CHECK(e.time() == 1.0);
  }
}

TEST_CASE("step_rk4: fourth-order convergence against the two-body oracle") {
  const double e1 = endpoint_error(0.05);
  const double e2 = endpoint_error(0.025);
  CHECK(e1 / e2 == doctest::Approx(16.0).epsilon(0.05));
}

TEST_CASE("simulate: t_end = 0 records only the initial state") {
  SimConfig cfg;
  cfg.t_end = 0.0;
  const auto traj = simulate(cfg, two_body(1.0, -1.0));
  REQUIRE(traj.series.size() == 1);
  CHECK(traj.series[0].t == 0.0);
  CHECK(traj.series[0].Phi == 0.0);
}

TEST_CASE("simulate: two-body gap at t = 5") {
  SimConfig cfg;
  cfg.kernel = {1.0, 0.0, {}};
  cfg.dt = 1e-3;
  cfg.t_end = 5.0;
  cfg.record_stride = 100;
  const auto traj = simulate(cfg, two_body(1.0, -1.0));
  CHECK(traj.final_state.t == 5.0);
  CHECK(traj.series.back().t == 5.0);
  const double gap = traj.final_state.v[0] - traj.final_state.v[1];
  CHECK(rel_diff(gap, 2.0 * std::exp(-5.0)) < 1e-6);
}

TEST_CASE("simulate: records every stride and always the end") {
  SimConfig cfg;
  cfg.dt = 0.1;
  cfg.t_end = 1.05;
  cfg.record_stride = 3;
  const auto traj = simulate(cfg, two_body(1.0, 0.0));
  std::vector<double> t;
  for (const auto& r : traj.series) t.push_back(r.t);
  REQUIRE(t.size() == 5);
  CHECK(t.front() == 0.0);
  CHECK(t[1] == doctest::Approx(0.3));
  CHECK(t.back() == 1.05);
}

TEST_CASE("simulate: observer sees every recorded state") {
  SimConfig cfg;
  cfg.dt = 0.1;
  cfg.t_end = 1.0;
  cfg.record_stride = 2;
  std::size_t seen = 0;
  const auto traj = simulate(cfg, two_body(1.0, 0.0), [&](const ParticleState&) { ++seen; });
  CHECK(seen == traj.series.size());
}

TEST_CASE("two_body_closed_form") {
  const std::vector<double> dv0{2.0, -1.0};
  CHECK(two_body_closed_form(dv0, 1.0, 1.0, 0.0) == dv0);
  const auto half = two_body_closed_form(std::vector<double>{2.0}, 1.0, 1.0, std::log(2.0));
  CHECK(half[0] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(two_body_closed_form(dv0, 0.0, 1.0, 123.0) == dv0);
  CHECK_THROWS_AS(two_body_closed_form(dv0, 1.0, 1.0, -1.0), DomainError);
}

TEST_CASE("center_of_mass") {
  ParticleState one(1, 2);
  one.x = {3.0, 4.0};
  one.v = {-1.0, 0.5};
  const auto c1 = center_of_mass(one);
  CHECK(c1.xc == one.x);
  CHECK(c1.vc == one.v);

  ParticleState pair(2, 1);
  pair.x = {-1.0, 1.0};
  pair.v = {-2.0, 2.0};
  const auto c2 = center_of_mass(pair);
  CHECK(c2.xc[0] == 0.0);
  CHECK(c2.vc[0] == 0.0);
}

TEST_CASE("property: mean velocity is conserved along trajectories") {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    CAPTURE(seed);
    Gen g(seed);
    const std::size_t n = g.index(2, 24);
    const std::size_t d = g.index(1, 3);
    const auto s0 = g.state(n, d);
    SimConfig cfg{g.uniform(0.2, 2.0), Kernel{g.uniform(0.5, 2.0), g.uniform(0.0, 1.0), {}}, 1e-2, 2.0, 50};
    const auto traj = simulate(cfg, s0);
    const auto a = center_of_mass(s0).vc;
    const auto b = center_of_mass(traj.final_state).vc;
    for (std::size_t k = 0; k < d; ++k) CHECK(std::abs(a[k] - b[k]) <= 1e-10 * (1.0 + std::abs(a[k])));
  }
}

TEST_CASE("property: kinetic energy never increases between records") {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    CAPTURE(seed);
    Gen g(100 + seed);
    const auto s0 = g.state(g.index(2, 32), g.index(1, 3));
    SimConfig cfg{1.0, Kernel{1.0, g.uniform(0.0, 1.0), {}}, 1e-2, 3.0, 10};
    const auto traj = simulate(cfg, s0);
    const double floor = [&] {
      const auto m = moments(s0);
      double s = 0.0;
      for (double a : m.m1) s += a * a;
      return s / m.m0;
    }();
    for (std::size_t k = 1; k < traj.series.size(); ++k) {
      CHECK(traj.series[k].m2 <= traj.series[k - 1].m2 * (1.0 + 1e-9));
      CHECK(traj.series[k].m2 >= floor - 1e-9);
    }
  }
}

TEST_CASE("property: a Galilean boost leaves X and EV records unchanged") {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    CAPTURE(seed);
    Gen g(200 + seed);
    const std::size_t d = g.index(1, 3);
    const auto s0 = g.state(g.index(2, 16), d);
    auto boosted = s0;
    const auto w = g.vec(d, 0.5);
    for (std::size_t i = 0; i < boosted.count(); ++i) {
      for (std::size_t k = 0; k < d; ++k) boosted.v[i * d + k] += w[k];
    }
    SimConfig cfg{1.0, Kernel{1.0, 0.4, {}}, 1e-2, 1.0, 10};
    const auto a = simulate(cfg, s0);
    const auto b = simulate(cfg, boosted);
    REQUIRE(a.series.size() == b.series.size());
    for (std::size_t k = 0; k < a.series.size(); ++k) {
      CHECK(std::abs(a.series[k].EV - b.series[k].EV) <= 1e-12 * (1.0 + a.series[k].EV));
      CHECK(std::abs(a.series[k].X - b.series[k].X) <= 1e-12 * (1.0 + a.series[k].X));
    }
    for (std::size_t i = 0; i < s0.count(); ++i) {
      for (std::size_t k = 0; k < d; ++k) {
        const double shift = b.final_state.v[i * d + k] - a.final_state.v[i * d + k];
        CHECK(shift == doctest::Approx(w[k]).epsilon(1e-12));
      }
    }
  }
}
