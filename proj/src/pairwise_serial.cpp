#include <algorithm>
#include <cmath>

#include "flock/pairwise.hpp"

namespace flock::serial {

namespace {

double distance(const CloudView& c, std::size_t i, std::size_t j) {
  double s2 = 0.0;
  for (std::size_t k = 0; k < c.dim; ++k) {
    const double d = c.x[i * c.dim + k] - c.x[j * c.dim + k];
    s2 += d * d;
  }
  return std::sqrt(s2);
}

}  // namespace

void alignment(const Kernel& kernel, const CloudView& cloud, std::span<double> out) {
  const std::size_t n = cloud.count;
  const std::size_t d = cloud.dim;
  std::fill(out.begin(), out.end(), 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) {
        continue;
      }
      const double c = cloud.weight(j) * kernel_eval(kernel, distance(cloud, i, j));
      for (std::size_t k = 0; k < d; ++k) {
        out[i * d + k] += c * (cloud.v[j * d + k] - cloud.v[i * d + k]);
      }
    }
  }
}

PairSums pair_sums(const Kernel& kernel, const CloudView& cloud) {
  const std::size_t n = cloud.count;
  const std::size_t d = cloud.dim;
  PairSums sums;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double c = cloud.weight(i) * cloud.weight(j) * kernel_eval(kernel, distance(cloud, i, j));
      double dv2 = 0.0;
      for (std::size_t k = 0; k < d; ++k) {
        const double dv = cloud.v[i * d + k] - cloud.v[j * d + k];
        dv2 += dv * dv;
      }
      sums.rate += c;
      sums.dissipation += c * dv2;
    }
  }
  return sums;
}

double max_pair_distance(const CloudView& cloud) {
  double best = 0.0;
  for (std::size_t i = 0; i < cloud.count; ++i) {
    for (std::size_t j = i + 1; j < cloud.count; ++j) {
      best = std::max(best, distance(cloud, i, j));
    }
  }
  return best;
}

}  // namespace flock::serial
