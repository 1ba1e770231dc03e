#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "flock/state.hpp"

namespace flock {

/// Piecewise-constant density estimate of an ensemble on a uniform grid over
/// its phase-space bounding box (2d axes, n cells each).
struct PhaseHistogram {
  std::size_t cells_per_dim = 0;
  double cell_volume = 0.0;
  double entropy = 0.0;      // sum_c m_c log(m_c / V), the integral of f log f for the estimate
  double max_density = 0.0;  // max_c m_c / V
  std::size_t occupied = 0;
};

/// floor((M / 20)^(1 / 2d)), at least 1, so that M / n^{2d} >= 20.
std::size_t default_cells_per_dim(std::size_t samples, std::size_t dim);

/// Throws DomainError if cells_per_dim is 0 or n^{2d} overflows.
PhaseHistogram phase_histogram(const Ensemble& ensemble, std::size_t cells_per_dim);

struct SupNormReport {
  double factor = 2.0;
  double worst_ratio = 0.0;  // max_k max_density(t_k) / (e^{lambda d K M0 t_k} max_density(0))
  std::size_t worst_index = 0;
  bool passed = false;
};

/// Checks max_density(t_k) <= factor e^{lambda d K M0 t_k} max_density(0).
SupNormReport sup_norm_growth_check(std::span<const double> t, std::span<const double> max_density, double lambda,
                                    std::size_t dim, double K, double M0, double factor = 2.0);

struct EntropyTrend {
  double worst_z = 0.0;  // min_k mean(dH_k) / (std(dH_k) / sqrt(S)); +inf when every increment is exact
  std::size_t worst_index = 0;
  double mean_total_change = 0.0;
  bool passed = false;
};

/// entropy[s][k] is the histogram entropy of seed s at record k. Each
/// increment H(k) - H(k-1) must have a seed mean no lower than -z_tol
/// standard errors.
EntropyTrend entropy_trend(const std::vector<std::vector<double>>& entropy, double z_tol = 3.0);

}  // namespace flock
