#include "flock/kinetic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "flock/error.hpp"
#include "rk4.hpp"
#include "sum.hpp"

namespace flock {

KineticStats kinetic_stats(const Ensemble& e) {
  const std::size_t n = e.count();
  const std::size_t d = e.dim;
  if (n == 0) throw IntegrityError("kinetic_stats: empty ensemble");
  KineticStats s;
  detail::CompensatedSum m0, m2;
  std::vector<detail::CompensatedSum> m1(d);
  for (std::size_t i = 0; i < n; ++i) {
    const double w = e.w[i];
    m0.add(w);
    double x2 = 0.0, v2 = 0.0;
    for (std::size_t k = 0; k < d; ++k) {
      const double vk = e.v[i * d + k];
      const double xk = e.x[i * d + k];
      m1[k].add(w * vk);
      v2 += vk * vk;
      x2 += xk * xk;
    }
    m2.add(w * v2);
    s.zeta = std::max(s.zeta, std::sqrt(x2));
    s.eta = std::max(s.eta, std::sqrt(v2));
  }
  s.M0 = m0.value();
  s.M2 = m2.value();
  s.M1.resize(d);
  s.u_c.resize(d);
  for (std::size_t k = 0; k < d; ++k) {
    s.M1[k] = m1[k].value();
    s.u_c[k] = s.M1[k] / s.M0;
  }
  detail::CompensatedSum lam;
  for (std::size_t i = 0; i < n; ++i) {
    double dv2 = 0.0;
    for (std::size_t k = 0; k < d; ++k) {
      const double dv = e.v[i * d + k] - s.u_c[k];
      dv2 += dv * dv;
    }
    lam.add(e.w[i] * dv2);
  }
  s.Lambda = lam.value();
  s.I0 = s.M0;
  s.J0 = std::sqrt(s.M0 * s.M2);
  return s;
}

std::vector<double> q_force(const Ensemble& e, const Kernel& kernel, std::span<const double> x,
                            std::span<const double> v) {
  const std::size_t d = e.dim;
  if (x.size() != d || v.size() != d) throw DomainError("q_force: query has the wrong dimension");
  std::vector<double> q(d, 0.0);
  for (std::size_t j = 0; j < e.count(); ++j) {
    const double c = e.w[j] * pair_rate(kernel, x, e.position(j));
    for (std::size_t k = 0; k < d; ++k) q[k] += c * (e.v[j * d + k] - v[k]);
  }
  return q;
}

Ensemble step_ensemble(const Ensemble& ensemble, double lambda, const Kernel& kernel, double dt, Backend backend,
                       std::size_t step_index) {
  if (!(dt > 0.0)) throw DomainError("dt must be positive");
  ensemble.validate();
  Ensemble next = ensemble;
  detail::Rk4Scratch scratch;
  detail::rk4_step(next.dim, next.x, next.v, next.w, lambda, kernel, dt, backend, scratch);
  next.t = ensemble.t + dt;
  if (!detail::all_finite(next.x) || !detail::all_finite(next.v)) throw OverflowError(step_index, next.t);
  return next;
}

VelocityBound velocity_trajectory_bounds(const KineticStats& s0, const Kernel& kernel, double lambda, double t) {
  if (!(t >= 0.0)) throw DomainError("velocity_trajectory_bounds: t must be nonnegative");
  if (!(s0.I0 > 0.0)) throw DomainError("velocity_trajectory_bounds: I0 must be positive");
  const double b = s0.eta + s0.J0 / s0.I0 + lambda * kernel.amplitude * s0.J0 * t;
  return {-b, b};
}

double phi_kinetic_envelope(double kappa3, double K, double beta, double t) {
  if (!(t >= 0.0)) throw DomainError("phi_kinetic_envelope: t must be nonnegative");
  if (!(kappa3 >= 1.0)) throw DomainError("phi_kinetic_envelope: kappa3 must be >= 1");
  const double t2 = t * t;
  return K * std::pow(kappa3, -beta) * std::pow(1.0 + t2 + t2 * t2, -beta);
}

double lambda_envelope(const EnvelopeParams& params, double Lambda0, double t) {
  if (!(t >= 0.0)) throw DomainError("lambda_envelope: t must be nonnegative");
  if (params.beta < 0.25) return Lambda0 * std::exp(-params.require_kappa4() * std::pow(t, 1.0 - 4.0 * params.beta));
  if (params.beta == 0.25) return Lambda0 * std::pow(1.0 + t, -params.require_kappa5());
  throw RegimeError("the energy-fluctuation decay rate is stated only for beta <= 1/4");
}

double lambda_envelope_sharp(double Lambda0, double lambda, double M0, double Phi) {
  if (!(Phi >= 0.0)) throw DomainError("lambda_envelope_sharp: Phi must be nonnegative");
  return Lambda0 * std::exp(-2.0 * lambda * M0 * Phi);
}

double entropy_production_rate(const Ensemble& ensemble, const Kernel& kernel, double lambda, Backend backend) {
  if (lambda == 0.0) return 0.0;
  return lambda * pair_sums(backend, kernel, ensemble.view()).rate;
}

double m2_lower_bound(double M2_0, double M1_norm2, double M0, double K, double c, double t) {
  const double decay = std::exp(-2.0 * K * M0 * c * t);
  return M2_0 * decay + (M1_norm2 / M0) * (1.0 - decay);
}

KineticRecord make_kinetic_record(const Ensemble& ensemble, const Kernel& kernel, double lambda, Backend backend) {
  const KineticStats s = kinetic_stats(ensemble);
  const PairSums ps = pair_sums(backend, kernel, ensemble.view());
  KineticRecord r;
  r.t = ensemble.t;
  r.M0 = s.M0;
  r.M1 = s.M1;
  r.M2 = s.M2;
  r.Lambda = s.Lambda;
  r.zeta = s.zeta;
  r.eta = s.eta;
  r.phi_min = kernel_eval(kernel, max_pair_distance(backend, ensemble.view()));
  r.entropy_rate = lambda * ps.rate;
  r.dissipation = ps.dissipation;
  return r;
}

KineticRun run_kinetic(const SimConfig& config, const Ensemble& initial,
                       const std::function<void(const Ensemble&, const KineticRecord&)>& observer) {
  config.validate();
  initial.validate();

  KineticRun out;
  Ensemble e = initial;
  e.t = 0.0;
  out.initial = kinetic_stats(e);
  const detail::TimeGrid grid(config.dt, config.t_end);
  detail::Rk4Scratch scratch;

  auto record = [&] {
    KineticRecord r = make_kinetic_record(e, config.kernel, config.lambda, config.backend);
    if (!out.series.empty()) {
      const KineticRecord& prev = out.series.back();
      r.Phi = prev.Phi + 0.5 * (r.t - prev.t) * (r.phi_min + prev.phi_min);
    }
    out.series.push_back(std::move(r));
    if (observer) observer(e, out.series.back());
  };

  record();
  for (std::size_t k = 0; k < grid.steps; ++k) {
    detail::rk4_step(e.dim, e.x, e.v, e.w, config.lambda, config.kernel, grid.step_size(k), config.backend, scratch);
    e.t = grid.time(k + 1);
    if (!detail::all_finite(e.x) || !detail::all_finite(e.v)) throw OverflowError(k + 1, e.t);
    if ((k + 1) % config.record_stride == 0 || k + 1 == grid.steps) record();
  }
  out.final_state = std::move(e);
  return out;
}

DissipationCheck dissipation_identity(const std::vector<KineticRecord>& series, double lambda) {
  DissipationCheck c;
  for (std::size_t k = 0; k + 1 < series.size(); ++k) {
    const KineticRecord& p = series[k];
    const KineticRecord& n = series[k + 1];
    const double dt = n.t - p.t;
    if (!(dt > 0.0)) continue;
    const double lhs = (n.Lambda - p.Lambda) / dt;
    const double rhs = -0.5 * lambda * (p.dissipation + n.dissipation);
    double rel = 0.0;
    if (rhs != 0.0)
      rel = std::abs(lhs - rhs) / std::abs(rhs);
    else if (lhs != 0.0)
      rel = std::numeric_limits<double>::infinity();
    ++c.intervals;
    if (rel > c.max_relative_mismatch) {
      c.max_relative_mismatch = rel;
      c.worst_index = k;
    }
  }
  return c;
}

}  // namespace flock
