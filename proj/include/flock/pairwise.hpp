#pragma once

// All-pairs sweeps over a point cloud. These are the O(N^2) hot loops of the
// particle and kinetic solvers.
//
// Two implementations share one interface:
//   flock::serial    plain ordered double loops over kernel_eval; the
//                    reference the tests hold the fast path against.
//   flock::parallel  OpenMP over symmetric tile pairs, each pair rate
//                    computed once with a vectorized power function. Per-tile partial
//                    sums land in fixed slots and are combined in tile order,
//                    so results are bit-identical for any thread count.
//
// The two agree to rounding (~1e-13 relative), not bit for bit.

#include <span>

#include "flock/kernel.hpp"
#include "flock/state.hpp"

namespace flock {

struct PairSums {
  double rate = 0.0;         // sum_{i,j} w_i w_j r_ij, diagonal included
  double dissipation = 0.0;  // sum_{i,j} w_i w_j r_ij |v_i - v_j|^2
};

namespace serial {

/// out_i = sum_j w_j r(|x_i - x_j|) (v_j - v_i); `out` is count x dim.
void alignment(const Kernel& kernel, const CloudView& cloud, std::span<double> out);

PairSums pair_sums(const Kernel& kernel, const CloudView& cloud);

double max_pair_distance(const CloudView& cloud);

}  // namespace serial

namespace parallel {

void alignment(const Kernel& kernel, const CloudView& cloud, std::span<double> out);

PairSums pair_sums(const Kernel& kernel, const CloudView& cloud);

double max_pair_distance(const CloudView& cloud);

}  // namespace parallel

enum class Backend { serial, parallel };

inline void alignment(Backend b, const Kernel& kernel, const CloudView& cloud, std::span<double> out) {
  b == Backend::serial ? serial::alignment(kernel, cloud, out) : parallel::alignment(kernel, cloud, out);
}

inline PairSums pair_sums(Backend b, const Kernel& kernel, const CloudView& cloud) {
  return b == Backend::serial ? serial::pair_sums(kernel, cloud) : parallel::pair_sums(kernel, cloud);
}

inline double max_pair_distance(Backend b, const CloudView& cloud) {
  return b == Backend::serial ? serial::max_pair_distance(cloud) : parallel::max_pair_distance(cloud);
}

}  // namespace flock
