#include <doctest.h>

#include <omp.h>

#include <cmath>

#include "flock/pairwise.hpp"
#include "gen.hpp"

using namespace flock;
using flock::testing::Gen;

namespace {

double max_abs(const std::vector<double>& a) {
  double m = 0.0;
  for (double x : a) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

TEST_CASE("property: parallel sweeps agree with the serial reference") {
  const double betas[] = {0.0, 0.25, 0.5, 1.0, 0.2, 0.37, 0.98, 1.4};
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    CAPTURE(seed);
    Gen g(seed);
    const std::size_t n = seed < 4 ? g.index(300, 700) : g.index(1, 80);
    const std::size_t d = g.index(1, 4);
    const auto e = g.ensemble(n, d, g.uniform(0.1, 20.0));
    const Kernel k{g.uniform(0.3, 3.0), betas[seed % 8], {}};
    CAPTURE(k.beta);
    std::vector<double> a(n * d), b(n * d);
    serial::alignment(k, e.view(), a);
    parallel::alignment(k, e.view(), b);
    const double scale = max_abs(a) + 1e-300;
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(std::abs(a[i] - b[i]) <= 1e-12 * scale);

    const auto s = serial::pair_sums(k, e.view());
    const auto p = parallel::pair_sums(k, e.view());
    CHECK(std::abs(s.rate - p.rate) <= 1e-12 * s.rate);
    CHECK(std::abs(s.dissipation - p.dissipation) <= 1e-12 * (s.dissipation + 1e-300));
    CHECK(flock::testing::rel_diff(serial::max_pair_distance(e.view()), parallel::max_pair_distance(e.view())) <= 1e-14);
  }
}

TEST_CASE("custom kernel profiles run on both backends") {
  Gen g(1);
  const auto e = g.ensemble(40, 2);
  const Kernel k{1.0, 0.0, [](double s) { return 1.0 / (1.0 + s); }};
  std::vector<double> a(80), b(80);
  serial::alignment(k, e.view(), a);
  parallel::alignment(k, e.view(), b);
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(std::abs(a[i] - b[i]) <= 1e-12 * max_abs(a));
}

TEST_CASE("property: alignment conserves the weighted momentum") {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    CAPTURE(seed);
    Gen g(100 + seed);
    const std::size_t n = g.index(1, 600);
    const std::size_t d = g.index(1, 3);
    const auto e = g.ensemble(n, d);
    std::vector<double> out(n * d);
    parallel::alignment(Kernel{1.0, g.uniform(0.0, 1.0), {}}, e.view(), out);
    for (std::size_t k = 0; k < d; ++k) {
      double total = 0.0, scale = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        total += e.w[i] * out[i * d + k];
        scale += std::abs(e.w[i] * out[i * d + k]);
      }
      CHECK(std::abs(total) <= 1e-13 * (1.0 + scale));
    }
  }
}

TEST_CASE("parallel sweeps are bit-identical across thread counts") {
  Gen g(42);
  const auto e = g.ensemble(1100, 2);
  const Kernel k{1.0, 0.2, {}};
  const int saved = omp_get_max_threads();
  std::vector<std::vector<double>> outs;
  std::vector<PairSums> sums;
  for (int threads : {1, 3, 8}) {
    omp_set_num_threads(threads);
    std::vector<double> out(e.count() * 2);
    parallel::alignment(k, e.view(), out);
    outs.push_back(out);
    sums.push_back(parallel::pair_sums(k, e.view()));
  }
  omp_set_num_threads(saved);
  for (std::size_t i = 1; i < outs.size(); ++i) {
    CHECK(outs[i] == outs[0]);
    CHECK(sums[i].rate == sums[0].rate);
    CHECK(sums[i].dissipation == sums[0].dissipation);
  }
}

TEST_CASE("empty cloud is a no-op") {
  CloudView c{0, 2, {}, {}, {}};
  std::vector<double> out;
  parallel::alignment(Kernel{}, c, out);
  serial::alignment(Kernel{}, c, out);
  CHECK(parallel::pair_sums(Kernel{}, c).rate == 0.0);
}
