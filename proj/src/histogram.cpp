#include "flock/histogram.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>

#include "flock/error.hpp"
#include "sum.hpp"

namespace flock {

std::size_t default_cells_per_dim(std::size_t samples, std::size_t dim) {
  if (dim == 0) throw DomainError("default_cells_per_dim: dim must be positive");
  const double n = std::floor(std::pow(static_cast<double>(samples) / 20.0, 1.0 / (2.0 * static_cast<double>(dim))));
  std::size_t cells = n < 1.0 ? 1 : static_cast<std::size_t>(n);
  auto total = [&](std::size_t c) {
    std::size_t p = 1;
    for (std::size_t k = 0; k < 2 * dim; ++k) p *= c;
    return p;
  };
  while (cells > 1 && samples < 20 * total(cells)) --cells;
  return cells;
}

PhaseHistogram phase_histogram(const Ensemble& e, std::size_t cells_per_dim) {
  e.validate();
  if (cells_per_dim == 0) throw DomainError("phase_histogram: cells_per_dim must be positive");
  const std::size_t d = e.dim;
  const std::size_t axes = 2 * d;
  const std::size_t n = e.count();

  std::uint64_t total = 1;
  for (std::size_t k = 0; k < axes; ++k) {
    if (total > std::numeric_limits<std::uint64_t>::max() / cells_per_dim)
      throw DomainError("phase_histogram: too many cells");
    total *= cells_per_dim;
  }

  auto coord = [&](std::size_t i, std::size_t k) { return k < d ? e.x[i * d + k] : e.v[i * d + (k - d)]; };
  std::vector<double> lo(axes, std::numeric_limits<double>::infinity());
  std::vector<double> hi(axes, -std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < axes; ++k) {
      lo[k] = std::min(lo[k], coord(i, k));
      hi[k] = std::max(hi[k], coord(i, k));
    }
  std::vector<double> width(axes);
  double volume = 1.0;
  for (std::size_t k = 0; k < axes; ++k) {
    const double span = hi[k] - lo[k];
    width[k] = span > 0.0 ? span / static_cast<double>(cells_per_dim) * (1.0 + 1e-9) : 1.0;
    volume *= width[k];
  }

  std::vector<std::pair<std::uint64_t, std::size_t>> keys(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::uint64_t key = 0;
    for (std::size_t k = 0; k < axes; ++k) {
      auto c = static_cast<std::uint64_t>((coord(i, k) - lo[k]) / width[k]);
      c = std::min<std::uint64_t>(c, cells_per_dim - 1);
      key = key * cells_per_dim + c;
    }
    keys[i] = {key, i};
  }
  std::sort(keys.begin(), keys.end());

  PhaseHistogram h;
  h.cells_per_dim = cells_per_dim;
  h.cell_volume = volume;
  detail::CompensatedSum entropy;
  for (std::size_t a = 0; a < n;) {
    std::size_t b = a;
    detail::CompensatedSum mass;
    while (b < n && keys[b].first == keys[a].first) mass.add(e.w[keys[b++].second]);
    const double m = mass.value();
    entropy.add(m * std::log(m / volume));
    h.max_density = std::max(h.max_density, m / volume);
    ++h.occupied;
    a = b;
  }
  h.entropy = entropy.value();
  return h;
}

SupNormReport sup_norm_growth_check(std::span<const double> t, std::span<const double> max_density, double lambda,
                                    std::size_t dim, double K, double M0, double factor) {
  if (t.size() != max_density.size() || t.empty())
    throw DomainError("sup_norm_growth_check: series must be nonempty and of equal length");
  SupNormReport r;
  r.factor = factor;
  const double base = max_density[0];
  for (std::size_t k = 0; k < t.size(); ++k) {
    const double envelope = std::exp(lambda * static_cast<double>(dim) * K * M0 * t[k]) * base;
    const double ratio = max_density[k] / envelope;
    if (k == 0 || ratio > r.worst_ratio) {
      r.worst_ratio = ratio;
      r.worst_index = k;
    }
  }
  r.passed = r.worst_ratio <= factor;
  return r;
}

EntropyTrend entropy_trend(const std::vector<std::vector<double>>& entropy, double z_tol) {
  const std::size_t seeds = entropy.size();
  if (seeds < 2) throw DomainError("entropy_trend: need at least two seeds");
  const std::size_t records = entropy[0].size();
  for (const auto& s : entropy)
    if (s.size() != records) throw DomainError("entropy_trend: seeds have different record counts");

  EntropyTrend r;
  r.worst_z = std::numeric_limits<double>::infinity();
  r.passed = true;
  const double sn = static_cast<double>(seeds);
  for (std::size_t k = 1; k < records; ++k) {
    std::vector<double> inc(seeds);
    for (std::size_t s = 0; s < seeds; ++s) inc[s] = entropy[s][k] - entropy[s][k - 1];
    const double mean = std::accumulate(inc.begin(), inc.end(), 0.0) / sn;
    double var = 0.0;
    for (double x : inc) var += (x - mean) * (x - mean);
    const double se = std::sqrt(var / (sn - 1.0)) / std::sqrt(sn);
    if (mean < -z_tol * se - 1e-12) r.passed = false;
    const double z = se > 0.0 ? mean / se : (mean < 0.0 ? -std::numeric_limits<double>::infinity()
                                                        : std::numeric_limits<double>::infinity());
    if (z < r.worst_z) {
      r.worst_z = z;
      r.worst_index = k;
    }
  }
  double total = 0.0;
  for (const auto& s : entropy) total += s.back() - s.front();
  r.mean_total_change = total / sn;
  return r;
}

}  // namespace flock
