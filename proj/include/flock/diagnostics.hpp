#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "flock/kernel.hpp"
#include "flock/pairwise.hpp"
#include "flock/state.hpp"

namespace flock {

/// One row of the particle diagnostics table.
struct DiagnosticRecord {
  double t = 0.0;
  double m0 = 0.0;
  std::vector<double> m1;
  double m2 = 0.0;
  double X = 0.0;    // sum_i |x_i - x_c|^2
  double EV = 0.0;   // sum_i |v_i - v_c|^2
  double phi = 0.0;  // min_{i,j} r(|x_i - x_j|)
  double Phi = 0.0;  // trapezoid integral of phi from 0 to t
  double diameter = 0.0;  // max_{i,j} |x_i - x_j|; not written to CSV
};

using DiagnosticSeries = std::vector<DiagnosticRecord>;

struct Moments {
  double m0 = 0.0;
  std::vector<double> m1;
  double m2 = 0.0;
};

Moments moments(const ParticleState& state);

double fluctuation_positions(const ParticleState& state);

double fluctuation_velocities(const ParticleState& state);

/// min over all ordered pairs (i = j included) of r(|x_i - x_j|), i.e. r at
/// the largest pair distance.
double min_interaction(const ParticleState& state, const Kernel& kernel, Backend backend = Backend::parallel);

/// Snapshot of every column except Phi.
DiagnosticRecord make_record(const ParticleState& state, const Kernel& kernel, Backend backend = Backend::parallel);

/// Cumulative trapezoid integral of y over t, starting at 0. Throws
/// IntegrityError unless t is nondecreasing.
std::vector<double> cumulative_trapezoid(std::span<const double> t, std::span<const double> y);

/// Fills the Phi column from phi and t.
void accumulate_Phi(DiagnosticSeries& series);

enum class DecayModel {
  exponential,  // log y = a + rate * t
  algebraic,    // log y = a + rate * log(1 + t)
};

struct DecayFit {
  double rate = 0.0;
  double intercept = 0.0;
  double residual = 0.0;  // root-mean-square residual of the log fit
  std::size_t points = 0;
};

/// Least-squares slope of log y. Throws DomainError on a nonpositive y or
/// fewer than two points.
DecayFit fit_decay_rate(std::span<const double> t, std::span<const double> y, DecayModel model);

/// Same, on one column ("m2", "X", "EV", "phi") restricted to t in [t0, t1].
DecayFit fit_decay_rate(const DiagnosticSeries& series, const std::string& column, double t0, double t1,
                        DecayModel model = DecayModel::exponential);

}  // namespace flock
