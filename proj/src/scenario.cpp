#include "flock/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "flock/diagnostics.hpp"
#include "flock/envelopes.hpp"
#include "flock/error.hpp"
#include "flock/histogram.hpp"
#include "flock/hydro.hpp"
#include "flock/io.hpp"
#include "flock/kinetic.hpp"

namespace flock {

using nlohmann::json;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// ---- config parsing --------------------------------------------------------

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

void only_keys(const json& obj, const std::string& path, std::initializer_list<const char*> keys) {
  if (!obj.is_object()) throw ConfigError(path.empty() ? "<root>" : path, "expected an object");
  for (const auto& [key, value] : obj.items()) {
    if (std::none_of(keys.begin(), keys.end(), [&](const char* k) { return key == k; }))
      throw ConfigError(join(path, key), "unknown field");
  }
}

const json& require(const json& obj, const std::string& path, const std::string& key) {
  const auto it = obj.find(key);
  if (it == obj.end()) throw ConfigError(join(path, key), "missing required field");
  return *it;
}

double as_real(const json& v, const std::string& path) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    const std::string& s = v.get_ref<const std::string&>();
    double x = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), x);
    if (res.ec == std::errc() && res.ptr == s.data() + s.size() && !s.empty()) return x;
  }
  throw ConfigError(path, "expected a decimal number");
}

std::uint64_t as_integer(const json& v, const std::string& path) {
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer() && v.get<std::int64_t>() >= 0) return static_cast<std::uint64_t>(v.get<std::int64_t>());
  if (v.is_string()) {
    const std::string& s = v.get_ref<const std::string&>();
    std::uint64_t x = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), x);
    if (res.ec == std::errc() && res.ptr == s.data() + s.size() && !s.empty()) return x;
  }
  throw ConfigError(path, "expected a nonnegative integer");
}

std::vector<double> as_vector(const json& v, const std::string& path) {
  if (!v.is_array()) throw ConfigError(path, "expected an array");
  std::vector<double> out;
  for (std::size_t k = 0; k < v.size(); ++k) out.push_back(as_real(v[k], path + "[" + std::to_string(k) + "]"));
  return out;
}

double real_field(const json& obj, const std::string& path, const std::string& key) {
  return as_real(require(obj, path, key), join(path, key));
}

template <class T, class F>
void optional_field(const json& obj, const std::string& path, const std::string& key, T& out, F convert) {
  const auto it = obj.find(key);
  if (it != obj.end()) out = static_cast<T>(convert(*it, join(path, key)));
}

Mode parse_mode(const json& v) {
  if (v.is_string()) {
    const std::string& s = v.get_ref<const std::string&>();
    if (s == "particle") return Mode::particle;
    if (s == "kinetic") return Mode::kinetic;
    if (s == "hydro-diagnostics") return Mode::hydro;
  }
  throw ConfigError("mode", "expected one of particle, kinetic, hydro-diagnostics");
}

const char* mode_name(Mode m) {
  switch (m) {
    case Mode::particle: return "particle";
    case Mode::kinetic: return "kinetic";
    case Mode::hydro: return "hydro-diagnostics";
  }
  return "";
}

const std::vector<std::string>& optional_checks(Mode m) {
  static const std::vector<std::string> none;
  static const std::vector<std::string> kinetic{"entropy-trend"};
  return m == Mode::particle ? none : kinetic;
}

// ---- small helpers ---------------------------------------------------------

double norm2(const std::vector<double>& a) {
  double s = 0.0;
  for (double x : a) s += x * x;
  return s;
}

double drift(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += (a[k] - b[k]) * (a[k] - b[k]);
  return std::sqrt(s);
}

std::string regime_beta(double beta) { return "beta=" + format_double(beta); }

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw SpecError("cannot write " + path.string());
  out << text;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

json optional_number(const std::optional<double>& x) { return x ? json(*x) : json(nullptr); }

CheckResult skipped(const std::string& name, const std::string& anchor, const std::string& regime,
                    const std::string& reason) {
  CheckResult c;
  c.name = name;
  c.anchor = anchor;
  c.status = CheckStatus::skipped;
  c.regime = regime;
  c.note = "skipped: " + reason;
  return c;
}

// Pass iff measured <= bound + tolerance (NaN fails).
CheckResult upper(const std::string& name, const std::string& anchor, const std::string& regime, double measured,
                  double bound, double tolerance) {
  CheckResult c;
  c.name = name;
  c.anchor = anchor;
  c.regime = regime;
  c.measured = measured;
  c.bound = bound;
  c.tolerance = tolerance;
  c.status = measured <= bound + tolerance ? CheckStatus::pass : CheckStatus::fail;
  return c;
}

// Pass iff measured >= bound - tolerance.
CheckResult lower(const std::string& name, const std::string& anchor, const std::string& regime, double measured,
                  double bound, double tolerance) {
  CheckResult c = upper(name, anchor, regime, measured, bound, tolerance);
  c.status = measured >= bound - tolerance ? CheckStatus::pass : CheckStatus::fail;
  return c;
}

// max_k (y_k - y_{k-1}) / |y_{k-1}|, or the absolute increase when y_{k-1} = 0.
double worst_relative_increase(const std::vector<double>& y) {
  double worst = 0.0;
  for (std::size_t k = 1; k < y.size(); ++k) {
    const double inc = y[k] - y[k - 1];
    worst = std::max(worst, y[k - 1] != 0.0 ? inc / std::abs(y[k - 1]) : inc);
  }
  return worst;
}

// max_k y_k / env_k, with 0/0 read as 0.
double worst_ratio(const std::vector<double>& y, const std::vector<double>& env) {
  double worst = 0.0;
  for (std::size_t k = 0; k < y.size(); ++k) {
    double r = 0.0;
    if (env[k] > 0.0)
      r = y[k] / env[k];
    else if (y[k] != 0.0)
      r = kInf;
    worst = std::max(worst, r);
  }
  return worst;
}

// ---- initial data ----------------------------------------------------------

ParticleState initial_particles(const Scenario& s) {
  ParticleState p = s.initial_csv ? read_state_csv(s.initial_csv->string())
                                  : sample_particles(s.generator, s.count, s.seed);
  try {
    p.validate();
  } catch (const IntegrityError& e) {
    throw ConfigError("initial", e.what());
  }
  return p;
}

Ensemble initial_ensemble(const Scenario& s, std::uint64_t seed) {
  if (s.initial_csv) {
    const ParticleState p = read_state_csv(s.initial_csv->string());
    Ensemble e;
    e.dim = p.dim;
    e.x = p.x;
    e.v = p.v;
    e.w.assign(p.count(), s.csv_mass / static_cast<double>(p.count()));
    try {
      e.validate();
    } catch (const IntegrityError& err) {
      throw ConfigError("initial", err.what());
    }
    return e;
  }
  return sample_initial(s.generator, s.count, seed);
}

// ---- particle mode ---------------------------------------------------------

struct ParticleOutput {
  Trajectory run;
  std::vector<std::vector<double>> velocity_gap;  // v_1 - v_2 per record when N = 2
};

std::optional<EnvelopeParams> particle_envelopes(const SimConfig& sim, double X0, double EV0, std::string& why) {
  try {
    return envelope_constants(X0, EV0, sim.kernel.beta, sim.lambda, sim.kernel.amplitude);
  } catch (const HypothesisError& e) {
    why = e.what();
    return std::nullopt;
  }
}

std::vector<CheckResult> particle_checks(const Scenario& s, const ParticleOutput& out,
                                         const std::vector<std::string>& names) {
  const DiagnosticSeries& series = out.run.series;
  const DiagnosticRecord& first = series.front();
  const SimConfig& sim = s.sim;
  const double beta = sim.kernel.beta;
  const double K = sim.kernel.amplitude;
  const double lambda = sim.lambda;
  const double N = first.m0;
  const std::string regime = regime_beta(beta);
  std::string hypothesis;
  const std::optional<EnvelopeParams> params = particle_envelopes(sim, first.X, first.EV, hypothesis);

  std::map<std::string, std::function<CheckResult()>> table;
  table["two-body"] = [&] {
    const std::string anchor = "Two-body-closed-form";
    if (out.velocity_gap.empty() || beta != 0.0)
      return skipped("two-body", anchor, regime, "requires N = 2 and beta = 0");
    double worst = 0.0;
    for (std::size_t k = 0; k < series.size(); ++k) {
      const std::vector<double> exact = two_body_closed_form(out.velocity_gap[0], lambda, K, series[k].t);
      const double scale = std::sqrt(norm2(exact));
      const double err = drift(out.velocity_gap[k], exact);
      worst = std::max(worst, scale > 0.0 ? err / scale : err);
    }
    return upper("two-body", anchor, regime, worst, 0.0, 1e-6);
  };
  table["momentum"] = [&] {
    double worst = 0.0;
    for (const auto& r : series) worst = std::max(worst, drift(r.m1, first.m1));
    const double scale = 1.0 + std::sqrt(norm2(first.m1));
    return upper("momentum", "B5a-momentum", regime, worst / scale, 0.0, 1e-10);
  };
  table["energy-monotone"] = [&] {
    std::vector<double> m2;
    for (const auto& r : series) m2.push_back(r.m2);
    return upper("energy-monotone", "B5b-energy", regime, worst_relative_increase(m2), 0.0, 1e-9);
  };
  table["energy-floor"] = [&] {
    return lower("energy-floor", "B5c-energy-floor", regime, series.back().m2, norm2(first.m1) / N, 1e-9);
  };
  table["velocity-fluctuation"] = [&] {
    std::vector<double> ev, env;
    for (const auto& r : series) {
      ev.push_back(r.EV);
      env.push_back(velocity_envelope_sharp(first.EV, lambda, r.Phi));
    }
    return upper("velocity-fluctuation", "Lem-velocity-fluctuation", regime, worst_ratio(ev, env), 1.0, 1e-6);
  };
  table["position-fluctuation"] = [&] {
    double worst = -kInf;
    for (const auto& r : series) worst = std::max(worst, r.X - position_envelope(first.X, first.EV, r.t));
    return upper("position-fluctuation", "Lem-position-fluctuation", regime, worst, 0.0, 1e-9);
  };
  table["phi-lower"] = [&] {
    double worst = kInf;
    for (const auto& r : series) worst = std::min(worst, r.phi - phi_lower_envelope(sim.kernel, first.X, first.EV, r.t));
    return lower("phi-lower", "Cor-phi-lower", regime, worst, 0.0, 1e-12);
  };
  table["flock-decay"] = [&] {
    if (beta > 0.5) return skipped("flock-decay", "Thm-flk", regime, "β > 1/2 unconditional regime not covered");
    const std::string anchor = beta < 0.5 ? "Thm-flk-beta-lt-half" : "Thm-flk-beta-eq-half";
    if (!params) return skipped("flock-decay", anchor, regime, hypothesis);
    if (lambda == 0.0) return skipped("flock-decay", anchor, regime, "no coupling (lambda = 0)");
    if (beta < 0.5) {
      std::vector<double> t, ev;
      for (const auto& r : series)
        if (r.EV > 0.0) {
          t.push_back(r.t);
          ev.push_back(r.EV);
        }
      const double rate_bound = -2.0 * lambda * K * params->require_kappa2();
      if (t.size() < 2) return skipped("flock-decay", anchor, regime, "fewer than two records with EV > 0");
      const DecayFit fit = fit_decay_rate(t, ev, DecayModel::exponential);
      CheckResult c = upper("flock-decay", anchor, regime, fit.rate, rate_bound, -0.1 * rate_bound);
      c.note = "fitted exponential rate of EV";
      return c;
    }
    std::vector<double> ev, env;
    for (const auto& r : series) {
      ev.push_back(r.EV);
      env.push_back(velocity_envelope(*params, first.EV, r.t));
    }
    return upper("flock-decay", anchor, regime, worst_ratio(ev, env), 1.0, 1e-6);
  };
  table["flock-diameter"] = [&] {
    const std::string anchor = "Thm-flk-diameter";
    if (beta > 0.5) return skipped("flock-diameter", anchor, regime, "β > 1/2 unconditional regime not covered");
    if (beta == 0.5) return skipped("flock-diameter", anchor, regime, "diameter bound is stated for beta < 1/2");
    if (!params) return skipped("flock-diameter", anchor, regime, hypothesis);
    if (lambda == 0.0) return skipped("flock-diameter", anchor, regime, "no coupling (lambda = 0)");
    double worst = 0.0;
    for (const auto& r : series) worst = std::max(worst, r.diameter);
    return upper("flock-diameter", anchor, regime, worst, diameter_envelope(*params, first.X), 0.0);
  };

  std::vector<CheckResult> results;
  for (const auto& name : names) results.push_back(table.at(name)());
  return results;
}

json particle_envelope_json(const SimConfig& sim, double X0, double EV0) {
  json j;
  j["X0"] = X0;
  j["EV0"] = EV0;
  j["beta"] = sim.kernel.beta;
  j["lambda"] = sim.lambda;
  j["K"] = sim.kernel.amplitude;
  std::string why;
  const auto p = particle_envelopes(sim, X0, EV0, why);
  if (!p) {
    j["note"] = why;
    return j;
  }
  j["kappa1"] = optional_number(p->kappa1);
  j["C1"] = optional_number(p->C1);
  j["C2"] = optional_number(p->C2);
  j["kappa2"] = optional_number(p->kappa2);
  if (p->C2) j["diameter_bound"] = diameter_envelope(*p, X0);
  return j;
}

// ---- kinetic and hydro modes -----------------------------------------------

struct HydroSnapshot {
  GammaReport report;
  double gamma_samples = 0.0;  // M0 M2 - |M1|^2
  double gamma_samples_pairwise = 0.0;
  double h_volume = 0.0;
};

struct KineticOutput {
  KineticRun run;
  std::vector<PhaseHistogram> histograms;
  std::vector<HydroSnapshot> hydro;
  HydroField final_field;
  double refinement_gap = 0.0;
  double refinement_scale = 0.0;
};

std::size_t histogram_cells(const Scenario& s, std::size_t count, std::size_t dim) {
  return s.histogram_cells ? s.histogram_cells : default_cells_per_dim(count, dim);
}

KineticOutput run_kinetic_mode(const Scenario& s, const Ensemble& initial) {
  KineticOutput out;
  const std::size_t cells = histogram_cells(s, initial.count(), initial.dim);
  const bool hydro = s.mode == Mode::hydro;
  out.run = run_kinetic(s.sim, initial, [&](const Ensemble& e, const KineticRecord&) {
    out.histograms.push_back(phase_histogram(e, cells));
    if (!hydro) return;
    const HydroField field = deposit_fields(e, bounding_grid(e, s.hydro_cells));
    HydroSnapshot snap;
    snap.report = gamma_report(field, e, s.sim.kernel, s.sim.lambda);
    const GammaPair g = gamma_ensemble(e, s.sim.backend);
    snap.gamma_samples = g.identity;
    snap.gamma_samples_pairwise = g.pairwise;
    snap.h_volume = field.grid.cell_volume();
    out.hydro.push_back(std::move(snap));
  });
  if (hydro) {
    const Ensemble& e = out.run.final_state;
    out.final_field = deposit_fields(e, bounding_grid(e, s.hydro_cells));
    const HydroField fine = deposit_fields(e, bounding_grid(e, 2 * s.hydro_cells));
    const double coarse = gamma_functional(out.final_field).pairwise;
    out.refinement_gap = std::abs(gamma_functional(fine).pairwise - coarse);
    out.refinement_scale = coarse;
  }
  return out;
}

std::vector<double> entropy_series(const Scenario& s, std::uint64_t seed) {
  const Ensemble initial = initial_ensemble(s, seed);
  const std::size_t cells = histogram_cells(s, initial.count(), initial.dim);
  std::vector<double> h;
  run_kinetic(s.sim, initial, [&](const Ensemble& e, const KineticRecord&) { h.push_back(phase_histogram(e, cells).entropy); });
  return h;
}

std::vector<CheckResult> kinetic_checks(const Scenario& s, const KineticOutput& out,
                                        const std::vector<std::string>& names) {
  const std::vector<KineticRecord>& series = out.run.series;
  const KineticRecord& first = series.front();
  const KineticStats& s0 = out.run.initial;
  const SimConfig& sim = s.sim;
  const double beta = sim.kernel.beta;
  const double K = sim.kernel.amplitude;
  const double lambda = sim.lambda;
  const double M0 = first.M0;
  const std::string regime = regime_beta(beta);
  const double kappa3 = kinetic_kappa3(s0.zeta, s0.eta, s0.I0, s0.J0, lambda);

  std::map<std::string, std::function<CheckResult()>> table;
  table["mass"] = [&] {
    double worst = 0.0;
    for (const auto& r : series) worst = std::max(worst, std::abs(r.M0 - M0));
    return upper("mass", "moremom-mass", regime, worst, 0.0, 0.0);
  };
  table["momentum"] = [&] {
    double worst = 0.0;
    for (const auto& r : series) worst = std::max(worst, drift(r.M1, first.M1));
    return upper("momentum", "moremoma-momentum", regime, worst / (1.0 + std::sqrt(norm2(first.M1))), 0.0, 1e-10);
  };
  table["energy-monotone"] = [&] {
    std::vector<double> m2;
    for (const auto& r : series) m2.push_back(r.M2);
    return upper("energy-monotone", "moremomb-energy", regime, worst_relative_increase(m2), 0.0, 1e-9);
  };
  auto floor_check = [&](const std::string& name, const std::string& anchor, double c) {
    double worst = kInf;
    for (const auto& r : series)
      worst = std::min(worst, r.M2 - m2_lower_bound(first.M2, norm2(first.M1), M0, K, c, r.t));
    CheckResult res = lower(name, anchor, regime, worst, 0.0, 1e-6);
    res.note = "min over records of M2 minus the lower bound";
    return res;
  };
  table["energy-floor-displayed"] = [&] { return floor_check("energy-floor-displayed", "B5mac-displayed", 1.0); };
  table["energy-floor-lambda"] = [&] { return floor_check("energy-floor-lambda", "B5mac-lambda", lambda); };
  table["dissipation"] = [&] {
    if (lambda == 0.0) return skipped("dissipation", "Lem-yzt-dissipation", regime, "no coupling (lambda = 0)");
    const DissipationCheck d = dissipation_identity(series, lambda);
    if (d.intervals == 0) return skipped("dissipation", "Lem-yzt-dissipation", regime, "fewer than two records");
    return upper("dissipation", "Lem-yzt-dissipation", regime, d.max_relative_mismatch, 0.0, 0.01);
  };
  table["lambda-sharp"] = [&] {
    std::vector<double> y, env;
    for (const auto& r : series) {
      y.push_back(r.Lambda);
      env.push_back(lambda_envelope_sharp(first.Lambda, lambda, M0, r.Phi));
    }
    return upper("lambda-sharp", "E5-sharp", regime, worst_ratio(y, env), 1.0, 1e-6);
  };
  table["velocity-support"] = [&] {
    double worst = -kInf;
    for (const auto& r : series) worst = std::max(worst, r.eta - velocity_trajectory_bounds(s0, sim.kernel, lambda, r.t).upper);
    return upper("velocity-support", "yyz-velocity-support", regime, worst, 0.0, 1e-9);
  };
  table["phi-kinetic"] = [&] {
    double worst = kInf;
    for (const auto& r : series) worst = std::min(worst, r.phi_min - phi_kinetic_envelope(kappa3, K, beta, r.t));
    return lower("phi-kinetic", "Lem-Tdecay", regime, worst, 0.0, 1e-9);
  };
  table["asy-decay"] = [&] {
    if (beta > 0.25) return skipped("asy-decay", "Thm-asy", regime, "β > 1/4 decay rate not stated");
    const std::string anchor = beta < 0.25 ? "Thm-asy-beta-lt-quarter" : "Thm-asy-beta-eq-quarter";
    if (lambda == 0.0) return skipped("asy-decay", anchor, regime, "no coupling (lambda = 0)");
    const double T = series.back().t;
    if (T < 2.0) return skipped("asy-decay", anchor, regime, "run shorter than t = 2");
    EnvelopeParams p;
    p.beta = beta;
    p.lambda = lambda;
    p.K = K;
    attach_kinetic_constants(p, kappa3);
    double head = -kInf, tail = -kInf;
    bool finite = true;
    for (const auto& r : series) {
      if (r.t < 1.0) continue;
      const double corr = beta < 0.25 ? p.require_kappa4() * std::pow(r.t, 1.0 - 4.0 * beta)
                                      : p.require_kappa5() * std::log1p(r.t);
      const double g = std::log(r.Lambda) + corr;
      if (std::isnan(g) || g == kInf) finite = false;
      double& slot = r.t <= 0.5 * T ? head : tail;
      slot = std::max(slot, g);
    }
    CheckResult c = upper("asy-decay", anchor, regime, tail, head, 1e-6);
    c.note = "max of the log-corrected energy fluctuation over [T/2, T] against [1, T/2]";
    if (!finite) c.status = CheckStatus::fail;
    if (head == -kInf && tail == -kInf && finite) c.status = CheckStatus::pass;
    return c;
  };
  table["entropy-rate"] = [&] {
    const double scale = lambda * K * M0 * M0;
    double worst = kInf;
    for (const auto& r : series) {
      const double lo = lambda * r.phi_min * M0 * M0;
      double margin = std::min(r.entropy_rate - lo, scale - r.entropy_rate);
      margin = std::min(margin, r.entropy_rate);
      worst = std::min(worst, scale > 0.0 ? margin / scale : margin);
    }
    CheckResult c = lower("entropy-rate", "Reversed-H-rate", regime, worst, 0.0, 1e-12);
    c.note = "min relative margin inside [lambda phi M0^2, lambda K M0^2]";
    return c;
  };
  table["sup-norm"] = [&] {
    std::vector<double> t, mx;
    for (std::size_t k = 0; k < series.size(); ++k) {
      t.push_back(series[k].t);
      mx.push_back(out.histograms[k].max_density);
    }
    const SupNormReport r = sup_norm_growth_check(t, mx, lambda, out.run.final_state.dim, K, M0, 2.0);
    return upper("sup-norm", "Sup-norm-growth", regime, r.worst_ratio, r.factor, 0.0);
  };
  table["entropy-trend"] = [&] {
    const std::string anchor = "Reversed-H-trend";
    if (s.initial_csv) return skipped("entropy-trend", anchor, regime, "requires generated initial data");
    if (s.entropy_seeds < 2) return skipped("entropy-trend", anchor, regime, "needs at least two seeds");
    std::vector<std::vector<double>> h;
    std::vector<double> first_h;
    for (const auto& hist : out.histograms) first_h.push_back(hist.entropy);
    h.push_back(first_h);
    for (std::size_t k = 1; k < s.entropy_seeds; ++k) h.push_back(entropy_series(s, s.seed + k));
    const EntropyTrend tr = entropy_trend(h, 3.0);
    CheckResult c = lower("entropy-trend", anchor, regime, tr.worst_z, -3.0, 0.0);
    c.note = "worst standardized per-record entropy increment over " + std::to_string(s.entropy_seeds) + " seeds";
    c.status = tr.passed ? CheckStatus::pass : CheckStatus::fail;
    return c;
  };

  // hydro
  const std::vector<HydroSnapshot>& hy = out.hydro;
  table["source-S1"] = [&] {
    double worst = 0.0;
    for (const auto& h : hy) worst = std::max(worst, std::sqrt(norm2(h.report.S1_total)));
    return upper("source-S1", "Sone-total-mass", regime, worst, 0.0, 1e-12);
  };
  table["source-S2"] = [&] {
    double worst = -kInf;
    for (const auto& h : hy)
      for (double v : h.report.S2_values) worst = std::max(worst, v);
    return upper("source-S2", "Stwo-sign", regime, worst, 0.0, 0.0);
  };
  table["source-forms"] = [&] {
    double worst = 0.0;
    for (const auto& h : hy) {
      double scale = 0.0;
      for (double v : h.report.S2_values) scale = std::max(scale, std::abs(v));
      worst = std::max(worst, scale > 0.0 ? h.report.S2_form_gap / scale : h.report.S2_form_gap);
    }
    return upper("source-forms", "Stwo-equivalent-forms", regime, worst, 0.0, 1e-10);
  };
  table["gamma-identity"] = [&] {
    double worst = 0.0;
    for (const auto& h : hy) {
      const double gap = std::abs(h.report.Gamma_pairwise - h.report.Gamma_identity);
      worst = std::max(worst, h.report.Gamma_identity > 0.0 ? gap / h.report.Gamma_identity : gap);
    }
    return upper("gamma-identity", "Gamma-identity", regime, worst, 0.0, 1e-10);
  };
  table["gamma-ensemble"] = [&] {
    double worst = 0.0;
    for (const auto& h : hy) {
      const double gap = std::max(std::abs(h.gamma_samples_pairwise - h.gamma_samples),
                                  std::abs(h.report.Gamma_pairwise - h.gamma_samples));
      worst = std::max(worst, h.gamma_samples > 0.0 ? gap / h.gamma_samples : gap);
      if (h.gamma_samples_pairwise < 0.0) worst = kInf;
    }
    return upper("gamma-ensemble", "Cauchy-Schwarz-gamma", regime, worst, 0.0, 1e-12);
  };
  table["gamma-monotone"] = [&] {
    std::vector<double> g;
    for (const auto& h : hy) g.push_back(h.report.Gamma_pairwise);
    return upper("gamma-monotone", "Gamma-monotone", regime, worst_relative_increase(g), 0.0, 1e-6);
  };
  table["gamma-envelope"] = [&] {
    std::vector<double> g, env;
    for (std::size_t k = 0; k < hy.size(); ++k) {
      g.push_back(hy[k].report.Gamma_pairwise);
      env.push_back(gamma_envelope(hy[0].report.Gamma_pairwise, M0, lambda, series[k].Phi));
    }
    return upper("gamma-envelope", "Thm-fundamental", regime, worst_ratio(g, env), 1.0, 0.05);
  };
  table["source-decay"] = [&] {
    double worst = 0.0;
    for (const auto& h : hy) {
      const double cap = lambda * K * h.report.Gamma_pairwise;
      worst = std::max(worst, cap > 0.0 ? h.report.S2_max_mass / cap : (h.report.S2_max_mass > 0.0 ? kInf : 0.0));
    }
    return upper("source-decay", "Stwo-source-decay", regime, worst, 1.0, 1e-12);
  };
  table["energy-split"] = [&] {
    double worst = 0.0;
    for (const auto& h : hy) {
      const GammaReport& r = h.report;
      worst = std::max(worst, std::abs(r.E_total - (r.E_kinetic + r.E_internal)) / std::max(1.0, r.E_total));
    }
    return upper("energy-split", "En-energy-split", regime, worst, 0.0, 1e-12);
  };
  table["energy-budget"] = [&] {
    if (lambda == 0.0) return skipped("energy-budget", "Lem-fabc-energy", regime, "no coupling (lambda = 0)");
    const EnergyBudget b = energy_budget(series, lambda);
    if (b.intervals == 0) return skipped("energy-budget", "Lem-fabc-energy", regime, "fewer than two records");
    return upper("energy-budget", "Lem-fabc-energy", regime, b.max_relative_mismatch, 0.0, 0.02);
  };
  table["deposition-refinement"] = [&] {
    const double rel = out.refinement_scale > 0.0 ? out.refinement_gap / out.refinement_scale : out.refinement_gap;
    CheckResult c = upper("deposition-refinement", "Gamma-refinement", regime, rel, 0.0, 1e-10);
    c.note = "relative change of Gamma at the final record when h is halved";
    return c;
  };

  std::vector<CheckResult> results;
  for (const auto& name : names) results.push_back(table.at(name)());
  return results;
}

json kinetic_envelope_json(const SimConfig& sim, const KineticStats& s0) {
  json j;
  j["beta"] = sim.kernel.beta;
  j["lambda"] = sim.lambda;
  j["K"] = sim.kernel.amplitude;
  j["M0"] = s0.M0;
  j["Lambda0"] = s0.Lambda;
  j["zeta0"] = s0.zeta;
  j["eta0"] = s0.eta;
  j["I0"] = s0.I0;
  j["J0"] = s0.J0;
  EnvelopeParams p;
  p.beta = sim.kernel.beta;
  p.lambda = sim.lambda;
  p.K = sim.kernel.amplitude;
  attach_kinetic_constants(p, kinetic_kappa3(s0.zeta, s0.eta, s0.I0, s0.J0, sim.lambda));
  j["kappa3"] = optional_number(p.kappa3);
  j["kappa4"] = optional_number(p.kappa4);
  j["kappa5"] = optional_number(p.kappa5);
  return j;
}

json gamma_json(const GammaReport& r) {
  json j;
  j["Gamma_pairwise"] = r.Gamma_pairwise;
  j["Gamma_identity"] = r.Gamma_identity;
  j["E_total"] = r.E_total;
  j["E_kinetic"] = r.E_kinetic;
  j["E_internal"] = r.E_internal;
  j["S1_total"] = r.S1_total;
  j["S2_values"] = r.S2_values;
  return j;
}

const char* status_name(CheckStatus s) {
  switch (s) {
    case CheckStatus::pass: return "pass";
    case CheckStatus::fail: return "fail";
    case CheckStatus::skipped: return "skipped";
  }
  return "";
}

}  // namespace

std::vector<std::string> default_checks(Mode mode) {
  std::vector<std::string> particle{"two-body",          "momentum",          "energy-monotone",
                                    "energy-floor",      "velocity-fluctuation", "position-fluctuation",
                                    "phi-lower",         "flock-decay",       "flock-diameter"};
  std::vector<std::string> kinetic{"mass",         "momentum",         "energy-monotone", "energy-floor-displayed",
                                   "energy-floor-lambda", "dissipation", "lambda-sharp",   "velocity-support",
                                   "phi-kinetic",  "asy-decay",        "entropy-rate",    "sup-norm"};
  if (mode == Mode::particle) return particle;
  if (mode == Mode::kinetic) return kinetic;
  for (const char* name : {"source-S1", "source-S2", "source-forms", "gamma-identity", "gamma-ensemble",
                           "gamma-monotone", "gamma-envelope", "source-decay", "energy-split", "energy-budget",
                           "deposition-refinement"})
    kinetic.push_back(name);
  return kinetic;
}

Scenario parse_scenario(const std::string& json_text, const std::filesystem::path& base_dir) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError("<root>", std::string("invalid JSON: ") + e.what());
  }
  only_keys(doc, "",
            {"mode", "kernel", "sim", "initial", "envelopes", "output_dir", "hydro", "histogram", "entropy_trend"});

  Scenario s;
  s.mode = parse_mode(require(doc, "", "mode"));

  const json& kernel = require(doc, "", "kernel");
  only_keys(kernel, "kernel", {"amplitude", "beta"});
  s.sim.kernel.amplitude = real_field(kernel, "kernel", "amplitude");
  s.sim.kernel.beta = real_field(kernel, "kernel", "beta");
  if (!(s.sim.kernel.amplitude > 0.0)) throw ConfigError("kernel.amplitude", "must be positive");
  if (!(s.sim.kernel.beta >= 0.0)) throw ConfigError("kernel.beta", "must be nonnegative");

  const json& sim = require(doc, "", "sim");
  only_keys(sim, "sim", {"lambda", "dt", "t_end", "record_stride"});
  s.sim.lambda = real_field(sim, "sim", "lambda");
  s.sim.dt = real_field(sim, "sim", "dt");
  s.sim.t_end = real_field(sim, "sim", "t_end");
  s.sim.record_stride = 1;
  optional_field(sim, "sim", "record_stride", s.sim.record_stride, as_integer);
  if (!(s.sim.lambda >= 0.0)) throw ConfigError("sim.lambda", "must be nonnegative");
  if (!(s.sim.dt > 0.0)) throw ConfigError("sim.dt", "must be positive");
  if (!(s.sim.t_end >= 0.0)) throw ConfigError("sim.t_end", "must be nonnegative");
  if (s.sim.record_stride == 0) throw ConfigError("sim.record_stride", "must be at least 1");

  const json& init = require(doc, "", "initial");
  only_keys(init, "initial",
            {"csv", "mass", "count", "dim", "seed", "position_center", "position_half_width", "velocity_law",
             "velocity_mean", "velocity_sigma", "velocity_radius"});
  if (init.contains("csv")) {
    if (!init["csv"].is_string()) throw ConfigError("initial.csv", "expected a path string");
    for (const char* key : {"count", "dim", "seed", "position_center", "position_half_width", "velocity_law",
                            "velocity_mean", "velocity_sigma", "velocity_radius"})
      if (init.contains(key)) throw ConfigError(std::string("initial.") + key, "not allowed together with initial.csv");
    s.initial_csv = base_dir / init["csv"].get<std::string>();
    optional_field(init, "initial", "mass", s.csv_mass, as_real);
    if (!(s.csv_mass > 0.0)) throw ConfigError("initial.mass", "must be positive");
  } else {
    InitialDensitySpec& g = s.generator;
    s.count = as_integer(require(init, "initial", "count"), "initial.count");
    s.seed = as_integer(require(init, "initial", "seed"), "initial.seed");
    if (s.count == 0) throw ConfigError("initial.count", "must be at least 1");
    optional_field(init, "initial", "dim", g.dim, as_integer);
    if (g.dim == 0) throw ConfigError("initial.dim", "must be at least 1");
    optional_field(init, "initial", "mass", g.mass, as_real);
    optional_field(init, "initial", "position_half_width", g.position_half_width, as_real);
    optional_field(init, "initial", "velocity_sigma", g.velocity_sigma, as_real);
    if (init.contains("velocity_radius")) {
      const json& r = init["velocity_radius"];
      g.velocity_radius = r.is_string() && r.get<std::string>() == "inf" ? kInf : as_real(r, "initial.velocity_radius");
    }
    if (init.contains("position_center")) g.position_center = as_vector(init["position_center"], "initial.position_center");
    if (init.contains("velocity_mean")) g.velocity_mean = as_vector(init["velocity_mean"], "initial.velocity_mean");
    if (!g.position_center.empty() && g.position_center.size() != g.dim)
      throw ConfigError("initial.position_center", "length must equal initial.dim");
    if (!g.velocity_mean.empty() && g.velocity_mean.size() != g.dim)
      throw ConfigError("initial.velocity_mean", "length must equal initial.dim");
    if (init.contains("velocity_law")) {
      const json& law = init["velocity_law"];
      if (law == "gaussian")
        g.velocity_law = VelocityLaw::gaussian;
      else if (law == "uniform_ball")
        g.velocity_law = VelocityLaw::uniform_ball;
      else
        throw ConfigError("initial.velocity_law", "expected gaussian or uniform_ball");
    }
    if (!(g.mass > 0.0)) throw ConfigError("initial.mass", "must be positive");
    if (!(g.position_half_width >= 0.0)) throw ConfigError("initial.position_half_width", "must be nonnegative");
    if (!(g.velocity_sigma >= 0.0)) throw ConfigError("initial.velocity_sigma", "must be nonnegative");
    if (!(g.velocity_radius >= 0.0)) throw ConfigError("initial.velocity_radius", "must be nonnegative");
    if (s.mode != Mode::particle && !std::isfinite(g.velocity_radius))
      throw ConfigError("initial.velocity_radius", "kinetic data must have compact velocity support");
  }

  if (doc.contains("envelopes")) {
    const json& list = doc["envelopes"];
    if (!list.is_array()) throw ConfigError("envelopes", "expected an array of check names");
    std::vector<std::string> allowed = default_checks(s.mode);
    for (const auto& name : optional_checks(s.mode)) allowed.push_back(name);
    std::set<std::string> seen;
    for (std::size_t k = 0; k < list.size(); ++k) {
      const std::string path = "envelopes[" + std::to_string(k) + "]";
      if (!list[k].is_string()) throw ConfigError(path, "expected a check name");
      const std::string name = list[k].get<std::string>();
      if (std::find(allowed.begin(), allowed.end(), name) == allowed.end())
        throw ConfigError(path, "unknown check '" + name + "' for mode " + mode_name(s.mode));
      if (!seen.insert(name).second) throw ConfigError(path, "check '" + name + "' listed twice");
      s.checks.push_back(name);
    }
  }

  if (doc.contains("output_dir")) {
    if (!doc["output_dir"].is_string()) throw ConfigError("output_dir", "expected a path string");
    s.output_dir = base_dir / doc["output_dir"].get<std::string>();
  } else {
    s.output_dir = base_dir / "out";
  }
  if (doc.contains("hydro")) {
    only_keys(doc["hydro"], "hydro", {"cells_per_dim"});
    optional_field(doc["hydro"], "hydro", "cells_per_dim", s.hydro_cells, as_integer);
    if (s.hydro_cells == 0) throw ConfigError("hydro.cells_per_dim", "must be at least 1");
  }
  if (doc.contains("histogram")) {
    only_keys(doc["histogram"], "histogram", {"cells_per_dim"});
    optional_field(doc["histogram"], "histogram", "cells_per_dim", s.histogram_cells, as_integer);
  }
  if (doc.contains("entropy_trend")) {
    only_keys(doc["entropy_trend"], "entropy_trend", {"seeds"});
    optional_field(doc["entropy_trend"], "entropy_trend", "seeds", s.entropy_seeds, as_integer);
  }
  return s;
}

Scenario load_scenario(const std::filesystem::path& config_path) {
  std::ifstream in(config_path, std::ios::binary);
  if (!in) throw ConfigError("<file>", "cannot read " + config_path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str(), config_path.parent_path().empty() ? "." : config_path.parent_path());
}

bool VerificationReport::passed() const {
  return std::none_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.status == CheckStatus::fail; });
}

std::string report_json(const VerificationReport& report) {
  json j;
  j["mode"] = report.mode;
  j["passed"] = report.passed();
  json list = json::array();
  for (const CheckResult& c : report.checks) {
    json e;
    e["name"] = c.name;
    e["anchor"] = c.anchor;
    e["status"] = status_name(c.status);
    e["measured"] = optional_number(c.measured);
    e["bound"] = optional_number(c.bound);
    e["tolerance"] = optional_number(c.tolerance);
    e["regime"] = c.regime;
    e["note"] = c.note;
    list.push_back(std::move(e));
  }
  j["checks"] = std::move(list);
  return dump(j);
}

std::string envelope_report(const Scenario& s) {
  if (s.mode == Mode::particle) {
    const ParticleState p = initial_particles(s);
    return dump(particle_envelope_json(s.sim, fluctuation_positions(p), fluctuation_velocities(p)));
  }
  const Ensemble e = initial_ensemble(s, s.seed);
  return dump(kinetic_envelope_json(s.sim, kinetic_stats(e)));
}

VerificationReport verify_suite(const Scenario& s) {
  const std::vector<std::string> names = s.checks.empty() ? default_checks(s.mode) : s.checks;
  VerificationReport report;
  report.mode = mode_name(s.mode);
  std::filesystem::create_directories(s.output_dir);
  std::ostringstream diagnostics, final_state;

  if (s.mode == Mode::particle) {
    const ParticleState initial = initial_particles(s);
    ParticleOutput out;
    const bool pair = initial.count() == 2;
    out.run = simulate(s.sim, initial, [&](const ParticleState& st) {
      if (!pair) return;
      std::vector<double> gap(st.dim);
      for (std::size_t k = 0; k < st.dim; ++k) gap[k] = st.v[k] - st.v[st.dim + k];
      out.velocity_gap.push_back(std::move(gap));
    });
    report.checks = particle_checks(s, out, names);
    write_diagnostics_csv(diagnostics, out.run.series, initial.dim);
    write_state_csv(final_state, out.run.final_state);
    write_text(s.output_dir / "envelopes.json",
               dump(particle_envelope_json(s.sim, out.run.series.front().X, out.run.series.front().EV)));
  } else {
    const Ensemble initial = initial_ensemble(s, s.seed);
    const KineticOutput out = run_kinetic_mode(s, initial);
    report.checks = kinetic_checks(s, out, names);
    write_kinetic_csv(diagnostics, out.run.series, initial.dim);
    write_ensemble_csv(final_state, out.run.final_state);
    write_text(s.output_dir / "envelopes.json", dump(kinetic_envelope_json(s.sim, out.run.initial)));
    if (s.mode == Mode::hydro) {
      std::ostringstream field;
      write_hydro_csv(field, out.final_field);
      write_text(s.output_dir / "hydro_field.csv", field.str());
      write_text(s.output_dir / "gamma_report.json", dump(gamma_json(out.hydro.back().report)));
    }
  }
  write_text(s.output_dir / "diagnostics.csv", diagnostics.str());
  write_text(s.output_dir / "final_state.csv", final_state.str());
  write_text(s.output_dir / "verification.json", report_json(report));
  return report;
}

int run_scenario(const std::filesystem::path& config_path, std::optional<std::uint64_t> seed,
                 std::optional<std::filesystem::path> output_dir) {
  try {
    Scenario s = load_scenario(config_path);
    if (seed) s.seed = *seed;
    if (output_dir) s.output_dir = *output_dir;
    const VerificationReport report = verify_suite(s);
    return report.passed() ? kExitPass : kExitCheckFailed;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const SpecError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const OverflowError& e) {
    std::cerr << "numerical failure at t = " << format_double(e.time()) << ": " << e.what() << "\n";
    return kExitNumeric;
  } catch (const Error& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumeric;
  }
}

}  // namespace flock
