#pragma once

// Hand-rolled random generators for property tests. Every case draws from
// its own seeded engine so a failure can be replayed from the printed seed.

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "flock/state.hpp"

namespace flock::testing {

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  double normal(double sigma = 1.0) { return std::normal_distribution<double>(0.0, sigma)(rng_); }
  std::size_t index(std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng_);
  }
  bool coin() { return index(0, 1) == 1; }

  std::vector<double> vec(std::size_t n, double sigma) {
    std::vector<double> out(n);
    for (double& a : out) a = normal(sigma);
    return out;
  }

  ParticleState state(std::size_t n, std::size_t d, double x_sigma = 1.0, double v_sigma = 1.0) {
    ParticleState s(n, d);
    s.x = vec(n * d, x_sigma);
    s.v = vec(n * d, v_sigma);
    return s;
  }

  Ensemble ensemble(std::size_t m, std::size_t d, double x_sigma = 1.0, double v_sigma = 1.0) {
    Ensemble e;
    e.dim = d;
    e.x = vec(m * d, x_sigma);
    e.v = vec(m * d, v_sigma);
    e.w.resize(m);
    for (double& w : e.w) w = uniform(0.1, 1.0);
    return e;
  }

 private:
  std::mt19937_64 rng_;
};

inline double rel_diff(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

}  // namespace flock::testing
