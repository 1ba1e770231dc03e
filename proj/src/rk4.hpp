#pragma once

#include <span>
#include <vector>

#include "flock/kernel.hpp"
#include "flock/pairwise.hpp"

namespace flock::detail {

// Buffers reused across steps so the hot loop does not allocate.
struct Rk4Scratch {
  std::vector<double> xs, vs;
  std::vector<double> kv1, kv2, kv3, kv4;
  std::vector<double> kx2, kx3, kx4;
};

// One classical RK4 step of
//     dx/dt = v,   dv/dt = coupling * sum_j w_j r(|x_i - x_j|) (v_j - v_i)
// with every stage evaluated against the whole stage-s cloud. Empty w means
// unit weights.
void rk4_step(std::size_t dim, std::vector<double>& x, std::vector<double>& v, std::span<const double> w,
              double coupling, const Kernel& kernel, double dt, Backend backend, Rk4Scratch& scratch);

bool all_finite(std::span<const double> a);

// Fixed-step schedule over [0, t_end]: t_k = k dt, except that the last
// step is shortened to land exactly on t_end.
struct TimeGrid {
  double dt;
  double t_end;
  std::size_t steps;

  TimeGrid(double step, double end);
  double time(std::size_t k) const { return k >= steps ? t_end : static_cast<double>(k) * dt; }
  double step_size(std::size_t k) const { return time(k + 1) - time(k); }
};

}  // namespace flock::detail
