#include "flock/diagnostics.hpp"

#include <cmath>

#include "flock/error.hpp"

namespace flock {

namespace {

std::vector<double> mean_rows(std::span<const double> a, std::size_t n, std::size_t d) {
  std::vector<double> m(d, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < d; ++k) m[k] += a[i * d + k];
  }
  for (double& value : m) value /= static_cast<double>(n);
  return m;
}

double spread(std::span<const double> a, std::size_t n, std::size_t d) {
  const std::vector<double> c = mean_rows(a, n, d);
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < d; ++k) {
      const double diff = a[i * d + k] - c[k];
      sum += diff * diff;
    }
  }
  return sum;
}

}  // namespace

Moments moments(const ParticleState& state) {
  const std::size_t n = state.count();
  const std::size_t d = state.dim;
  Moments m{static_cast<double>(n), std::vector<double>(d, 0.0), 0.0};
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < d; ++k) {
      const double vk = state.v[i * d + k];
      m.m1[k] += vk;
      m.m2 += vk * vk;
    }
  }
  return m;
}

double fluctuation_positions(const ParticleState& state) {
  if (state.count() == 0) throw IntegrityError("fluctuation_positions: empty state");
  return spread(state.x, state.count(), state.dim);
}

double fluctuation_velocities(const ParticleState& state) {
  if (state.count() == 0) throw IntegrityError("fluctuation_velocities: empty state");
  return spread(state.v, state.count(), state.dim);
}

double min_interaction(const ParticleState& state, const Kernel& kernel, Backend backend) {
  if (state.count() == 0) throw IntegrityError("min_interaction: empty state");
  return kernel_eval(kernel, max_pair_distance(backend, state.view()));
}

DiagnosticRecord make_record(const ParticleState& state, const Kernel& kernel, Backend backend) {
  Moments m = moments(state);
  DiagnosticRecord r;
  r.t = state.t;
  r.m0 = m.m0;
  r.m1 = std::move(m.m1);
  r.m2 = m.m2;
  r.X = fluctuation_positions(state);
  r.EV = fluctuation_velocities(state);
  r.diameter = max_pair_distance(backend, state.view());
  r.phi = kernel_eval(kernel, r.diameter);
  return r;
}

std::vector<double> cumulative_trapezoid(std::span<const double> t, std::span<const double> y) {
  if (t.size() != y.size()) throw IntegrityError("cumulative_trapezoid: length mismatch");
  std::vector<double> out(t.size(), 0.0);
  for (std::size_t k = 1; k < t.size(); ++k) {
    if (!(t[k] >= t[k - 1])) throw IntegrityError("records are not sorted by time");
    out[k] = out[k - 1] + 0.5 * (t[k] - t[k - 1]) * (y[k] + y[k - 1]);
  }
  return out;
}

void accumulate_Phi(DiagnosticSeries& series) {
  std::vector<double> t, phi;
  t.reserve(series.size());
  phi.reserve(series.size());
  for (const auto& r : series) {
    t.push_back(r.t);
    phi.push_back(r.phi);
  }
  const std::vector<double> Phi = cumulative_trapezoid(t, phi);
  for (std::size_t k = 0; k < series.size(); ++k) series[k].Phi = Phi[k];
}

DecayFit fit_decay_rate(std::span<const double> t, std::span<const double> y, DecayModel model) {
  if (t.size() != y.size()) throw DomainError("fit_decay_rate: length mismatch");
  if (t.size() < 2) throw DomainError("fit_decay_rate: need at least two points");
  const std::size_t n = t.size();
  std::vector<double> s(n), ly(n);
  for (std::size_t k = 0; k < n; ++k) {
    if (!(y[k] > 0.0)) throw DomainError("fit_decay_rate: values must be positive");
    s[k] = model == DecayModel::exponential ? t[k] : std::log1p(t[k]);
    ly[k] = std::log(y[k]);
  }
  double ms = 0.0, my = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    ms += s[k];
    my += ly[k];
  }
  ms /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    sxx += (s[k] - ms) * (s[k] - ms);
    sxy += (s[k] - ms) * (ly[k] - my);
  }
  if (!(sxx > 0.0)) throw DomainError("fit_decay_rate: abscissae are all equal");
  DecayFit fit;
  fit.rate = sxy / sxx;
  fit.intercept = my - fit.rate * ms;
  fit.points = n;
  double ss = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double e = ly[k] - (fit.intercept + fit.rate * s[k]);
    ss += e * e;
  }
  fit.residual = std::sqrt(ss / static_cast<double>(n));
  return fit;
}

DecayFit fit_decay_rate(const DiagnosticSeries& series, const std::string& column, double t0, double t1,
                        DecayModel model) {
  double DiagnosticRecord::*field = nullptr;
  if (column == "m2") field = &DiagnosticRecord::m2;
  else if (column == "X") field = &DiagnosticRecord::X;
  else if (column == "EV") field = &DiagnosticRecord::EV;
  else if (column == "phi") field = &DiagnosticRecord::phi;
  else if (column == "Phi") field = &DiagnosticRecord::Phi;
  else throw DomainError("fit_decay_rate: unknown column '" + column + "'");
  std::vector<double> t, y;
  for (const auto& r : series) {
    if (r.t >= t0 && r.t <= t1) {
      t.push_back(r.t);
      y.push_back(r.*field);
    }
  }
  return fit_decay_rate(t, y, model);
}

}  // namespace flock
