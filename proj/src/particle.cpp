#include "flock/particle.hpp"

#include <cmath>

#include "flock/error.hpp"
#include "rk4.hpp"

namespace flock {

void SimConfig::validate() const {
  flock::validate(kernel);
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw DomainError("lambda must be nonnegative and finite");
  if (!(dt > 0.0) || !std::isfinite(dt)) throw DomainError("dt must be positive and finite");
  if (!(t_end >= 0.0) || !std::isfinite(t_end)) throw DomainError("t_end must be nonnegative and finite");
  if (record_stride == 0) throw DomainError("record_stride must be >= 1");
}

Derivative cs_rhs(const ParticleState& state, double lambda, const Kernel& kernel, Backend backend) {
  state.validate();
  Derivative d{state.v, std::vector<double>(state.v.size())};
  alignment(backend, kernel, state.view(), d.dv);
  const double coupling = lambda / static_cast<double>(state.count());
  for (double& value : d.dv) value *= coupling;
  return d;
}

ParticleState step_rk4(const ParticleState& state, double lambda, const Kernel& kernel, double dt, Backend backend,
                       std::size_t step_index) {
  if (!(dt > 0.0)) throw DomainError("dt must be positive");
  state.validate();
  ParticleState next = state;
  detail::Rk4Scratch scratch;
  const double coupling = lambda / static_cast<double>(state.count());
  detail::rk4_step(state.dim, next.x, next.v, {}, coupling, kernel, dt, backend, scratch);
  next.t = state.t + dt;
  if (!detail::all_finite(next.x) || !detail::all_finite(next.v)) throw OverflowError(step_index, next.t);
  return next;
}

Trajectory simulate(const SimConfig& config, const ParticleState& initial,
                    const std::function<void(const ParticleState&)>& observer) {
  config.validate();
  initial.validate();

  Trajectory out;
  ParticleState state = initial;
  state.t = 0.0;
  const detail::TimeGrid grid(config.dt, config.t_end);
  const double coupling = config.lambda / static_cast<double>(state.count());
  detail::Rk4Scratch scratch;

  auto record = [&] {
    out.series.push_back(make_record(state, config.kernel, config.backend));
    if (observer) observer(state);
  };

  record();
  for (std::size_t k = 0; k < grid.steps; ++k) {
    detail::rk4_step(state.dim, state.x, state.v, {}, coupling, config.kernel, grid.step_size(k), config.backend,
                     scratch);
    state.t = grid.time(k + 1);
    if (!detail::all_finite(state.x) || !detail::all_finite(state.v)) throw OverflowError(k + 1, state.t);
    if ((k + 1) % config.record_stride == 0 || k + 1 == grid.steps) record();
  }
  accumulate_Phi(out.series);
  out.final_state = std::move(state);
  return out;
}

std::vector<double> two_body_closed_form(std::span<const double> dv0, double lambda, double K, double t) {
  if (!(t >= 0.0)) throw DomainError("two_body_closed_form: t must be nonnegative");
  const double decay = std::exp(-lambda * K * t);
  std::vector<double> out(dv0.begin(), dv0.end());
  for (double& value : out) value *= decay;
  return out;
}

CenterOfMass center_of_mass(const ParticleState& state) {
  const std::size_t n = state.count();
  const std::size_t d = state.dim;
  if (n == 0) throw IntegrityError("center_of_mass: empty state");
  CenterOfMass c{std::vector<double>(d, 0.0), std::vector<double>(d, 0.0)};
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < d; ++k) {
      c.xc[k] += state.x[i * d + k];
      c.vc[k] += state.v[i * d + k];
    }
  }
  for (std::size_t k = 0; k < d; ++k) {
    c.xc[k] /= static_cast<double>(n);
    c.vc[k] /= static_cast<double>(n);
  }
  return c;
}

}  // namespace flock
