#include "flock/hydro.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "flock/error.hpp"
#include "sum.hpp"

namespace flock {

double GridSpec::cell_volume() const { return std::pow(h, static_cast<double>(dim)); }

GridSpec bounding_grid(const Ensemble& e, std::size_t cells_per_dim) {
  e.validate();
  if (cells_per_dim == 0) throw DomainError("bounding_grid: cells_per_dim must be positive");
  const std::size_t d = e.dim;
  std::vector<double> lo(d, std::numeric_limits<double>::infinity());
  std::vector<double> hi(d, -std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < e.count(); ++i)
    for (std::size_t k = 0; k < d; ++k) {
      lo[k] = std::min(lo[k], e.x[i * d + k]);
      hi[k] = std::max(hi[k], e.x[i * d + k]);
    }
  double width = 0.0;
  for (std::size_t k = 0; k < d; ++k) width = std::max(width, hi[k] - lo[k]);
  GridSpec g;
  g.dim = d;
  g.origin = lo;
  g.cells_per_dim = cells_per_dim;
  g.h = width > 0.0 ? width / static_cast<double>(cells_per_dim) * (1.0 + 1e-9) : 1.0;
  return g;
}

HydroField deposit_fields(const Ensemble& e, const GridSpec& grid) {
  e.validate();
  const std::size_t d = e.dim;
  if (grid.dim != d || grid.origin.size() != d || !(grid.h > 0.0) || grid.cells_per_dim == 0)
    throw DomainError("deposit_fields: grid does not match the ensemble");
  const std::size_t n = grid.cells_per_dim;
  const std::size_t count = e.count();

  std::vector<std::pair<std::size_t, std::size_t>> keys(count);
  for (std::size_t i = 0; i < count; ++i) {
    std::size_t key = 0;
    for (std::size_t k = 0; k < d; ++k) {
      const double c = std::floor((e.x[i * d + k] - grid.origin[k]) / grid.h);
      if (!(c >= 0.0 && c < static_cast<double>(n))) throw CoverageError(i);
      key = key * n + static_cast<std::size_t>(c);
    }
    keys[i] = {key, i};
  }
  std::sort(keys.begin(), keys.end());

  HydroField f;
  f.grid = grid;
  const double vol = grid.cell_volume();
  for (std::size_t a = 0; a < count;) {
    std::size_t b = a;
    while (b < count && keys[b].first == keys[a].first) ++b;
    HydroCell c;
    c.index = keys[a].first;
    c.center.resize(d);
    for (std::size_t k = d, idx = c.index; k-- > 0; idx /= n)
      c.center[k] = grid.origin[k] + (static_cast<double>(idx % n) + 0.5) * grid.h;

    detail::CompensatedSum mass;
    std::vector<detail::CompensatedSum> mom(d);
    for (std::size_t s = a; s < b; ++s) {
      const std::size_t i = keys[s].second;
      mass.add(e.w[i]);
      for (std::size_t k = 0; k < d; ++k) mom[k].add(e.w[i] * e.v[i * d + k]);
    }
    c.mass = mass.value();
    c.rho = c.mass / vol;
    c.u.resize(d);
    for (std::size_t k = 0; k < d; ++k) c.u[k] = mom[k].value() / c.mass;

    std::vector<double> P(d * d, 0.0), q(d, 0.0);
    double spread = 0.0;
    std::vector<double> dv(d);
    for (std::size_t s = a; s < b; ++s) {
      const std::size_t i = keys[s].second;
      const double w = e.w[i];
      double dv2 = 0.0;
      for (std::size_t k = 0; k < d; ++k) {
        dv[k] = e.v[i * d + k] - c.u[k];
        dv2 += dv[k] * dv[k];
      }
      spread += w * dv2;
      for (std::size_t k = 0; k < d; ++k) {
        for (std::size_t l = k; l < d; ++l) P[k * d + l] += w * dv[k] * dv[l];
        q[k] += w * dv[k] * dv2;
      }
    }
    c.e = spread / (2.0 * c.mass);
    double u2 = 0.0;
    for (double uk : c.u) u2 += uk * uk;
    c.E = c.e + 0.5 * u2;
    for (std::size_t k = 0; k < d; ++k)
      for (std::size_t l = 0; l < k; ++l) P[k * d + l] = P[l * d + k];
    for (double& p : P) p /= vol;
    for (double& x : q) x /= vol;
    c.P = std::move(P);
    c.q = std::move(q);
    f.cells.push_back(std::move(c));
    a = b;
  }
  return f;
}

namespace {

double dist2(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += (a[k] - b[k]) * (a[k] - b[k]);
  return s;
}

}  // namespace

GammaPair gamma_functional(const HydroField& f) {
  if (f.cells.empty()) throw DomainError("gamma_functional: no occupied cells");
  const std::size_t d = f.grid.dim;
  detail::CompensatedSum pair, m0, energy;
  std::vector<detail::CompensatedSum> m1(d);
  for (const HydroCell& a : f.cells) {
    m0.add(a.mass);
    energy.add(a.mass * a.E);
    for (std::size_t k = 0; k < d; ++k) m1[k].add(a.mass * a.u[k]);
    for (const HydroCell& b : f.cells)
      pair.add((0.5 * dist2(a.u, b.u) + a.e + b.e) * a.mass * b.mass);
  }
  double m1sq = 0.0;
  for (auto& s : m1) m1sq += s.value() * s.value();
  return {pair.value(), 2.0 * energy.value() * m0.value() - m1sq};
}

GammaPair gamma_ensemble(const Ensemble& e, Backend backend) {
  const KineticStats s = kinetic_stats(e);
  const Kernel unit{1.0, 0.0, {}};
  double m1sq = 0.0;
  for (double m : s.M1) m1sq += m * m;
  return {0.5 * pair_sums(backend, unit, e.view()).dissipation, s.M0 * s.M2 - m1sq};
}

SourceTerms source_terms(const HydroField& f, const Kernel& kernel, double lambda) {
  validate(kernel);
  const std::size_t d = f.grid.dim;
  const std::size_t n = f.cells.size();
  const double vol = f.grid.cell_volume();
  SourceTerms s;
  s.S1.assign(n, std::vector<double>(d, 0.0));
  s.S2.assign(n, 0.0);
  s.S2_total_energy.assign(n, 0.0);
#pragma omp parallel for schedule(static)
  for (std::size_t a = 0; a < n; ++a) {
    const HydroCell& ca = f.cells[a];
    double s2 = 0.0, s2e = 0.0;
    for (std::size_t b = 0; b < n; ++b) {
      const HydroCell& cb = f.cells[b];
      const double r = kernel_eval(kernel, std::sqrt(dist2(ca.center, cb.center)));
      const double rr = r * ca.rho * cb.rho * vol;
      double dot = 0.0;
      for (std::size_t k = 0; k < d; ++k) {
        s.S1[a][k] -= lambda * rr * (ca.u[k] - cb.u[k]);
        dot += ca.u[k] * cb.u[k];
      }
      s2 -= lambda * rr * (0.5 * dist2(ca.u, cb.u) + ca.e + cb.e);
      s2e -= lambda * rr * (ca.E + cb.E - dot);
    }
    s.S2[a] = s2;
    s.S2_total_energy[a] = s2e;
  }
  return s;
}

double gamma_envelope(double Gamma0, double I0, double lambda, double Phi) {
  if (!(Phi >= 0.0)) throw DomainError("gamma_envelope: Phi must be nonnegative");
  return Gamma0 * std::exp(-2.0 * I0 * lambda * Phi);
}

EnergySplit energy_split(const HydroField& f, const Ensemble& e) {
  EnergySplit s;
  s.total = 0.5 * kinetic_stats(e).M2;
  detail::CompensatedSum k, p;
  for (const HydroCell& c : f.cells) {
    double u2 = 0.0;
    for (double uk : c.u) u2 += uk * uk;
    k.add(0.5 * c.mass * u2);
    p.add(c.mass * c.e);
  }
  s.kinetic = k.value();
  s.internal = p.value();
  return s;
}

GammaReport gamma_report(const HydroField& f, const Ensemble& e, const Kernel& kernel, double lambda) {
  GammaReport r;
  const GammaPair g = gamma_functional(f);
  r.Gamma_pairwise = g.pairwise;
  r.Gamma_identity = g.identity;
  const EnergySplit es = energy_split(f, e);
  r.E_total = es.total;
  r.E_kinetic = es.kinetic;
  r.E_internal = es.internal;

  const SourceTerms st = source_terms(f, kernel, lambda);
  const std::size_t d = f.grid.dim;
  const double vol = f.grid.cell_volume();
  std::vector<detail::CompensatedSum> total(d);
  for (std::size_t a = 0; a < f.cells.size(); ++a) {
    for (std::size_t k = 0; k < d; ++k) total[k].add(st.S1[a][k] * vol);
    r.S2_form_gap = std::max(r.S2_form_gap, std::abs(st.S2[a] - st.S2_total_energy[a]));
    r.S2_max_mass = std::max(r.S2_max_mass, std::abs(st.S2[a]) * vol);
  }
  r.S1_total.resize(d);
  for (std::size_t k = 0; k < d; ++k) r.S1_total[k] = total[k].value();
  r.S2_values = st.S2;
  return r;
}

EnergyBudget energy_budget(const std::vector<KineticRecord>& series, double lambda) {
  EnergyBudget b;
  for (std::size_t k = 0; k + 1 < series.size(); ++k) {
    const KineticRecord& p = series[k];
    const KineticRecord& n = series[k + 1];
    const double dt = n.t - p.t;
    if (!(dt > 0.0)) continue;
    const double lhs = 0.5 * (n.M2 - p.M2) / dt;
    const double rhs = -0.25 * lambda * (p.dissipation + n.dissipation);
    double rel = 0.0;
    if (rhs != 0.0)
      rel = std::abs(lhs - rhs) / std::abs(rhs);
    else if (lhs != 0.0)
      rel = std::numeric_limits<double>::infinity();
    ++b.intervals;
    if (rel > b.max_relative_mismatch) {
      b.max_relative_mismatch = rel;
      b.worst_index = k;
    }
  }
  return b;
}

}  // namespace flock
