#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "flock/diagnostics.hpp"
#include "flock/kernel.hpp"
#include "flock/pairwise.hpp"
#include "flock/state.hpp"

namespace flock {

struct SimConfig {
  double lambda = 1.0;
  Kernel kernel;
  double dt = 1e-3;
  double t_end = 1.0;
  std::size_t record_stride = 1;
  Backend backend = Backend::parallel;

  /// Throws DomainError on dt <= 0, t_end < 0, lambda < 0 or a zero stride.
  void validate() const;
};

struct Derivative {
  std::vector<double> dx;
  std::vector<double> dv;
};

/// Right-hand side of the N-body system
///     dx_i = v_i,   dv_i = (lambda / N) sum_j r(|x_i - x_j|) (v_j - v_i).
Derivative cs_rhs(const ParticleState& state, double lambda, const Kernel& kernel,
                  Backend backend = Backend::parallel);

/// One RK4 step. Throws OverflowError carrying `step_index` if the result is
/// not finite.
ParticleState step_rk4(const ParticleState& state, double lambda, const Kernel& kernel, double dt,
                       Backend backend = Backend::parallel, std::size_t step_index = 0);

struct Trajectory {
  DiagnosticSeries series;
  ParticleState final_state;
};

/// Integrates from initial.t = 0 to config.t_end, recording every
/// record_stride steps and always at the final time. The observer, if set,
/// sees each recorded state.
Trajectory simulate(const SimConfig& config, const ParticleState& initial,
                    const std::function<void(const ParticleState&)>& observer = {});

/// Exact velocity difference of two agents under a constant kernel:
/// dv0 * exp(-lambda K t).
std::vector<double> two_body_closed_form(std::span<const double> dv0, double lambda, double K, double t);

struct CenterOfMass {
  std::vector<double> xc;
  std::vector<double> vc;
};

CenterOfMass center_of_mass(const ParticleState& state);

}  // namespace flock
