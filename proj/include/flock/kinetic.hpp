#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "flock/envelopes.hpp"
#include "flock/kernel.hpp"
#include "flock/pairwise.hpp"
#include "flock/particle.hpp"
#include "flock/state.hpp"

namespace flock {

/// Moments and support radii of an ensemble snapshot.
struct KineticStats {
  double M0 = 0.0;
  std::vector<double> M1;
  double M2 = 0.0;
  double Lambda = 0.0;  // sum_i w_i |v_i - u_c|^2
  std::vector<double> u_c;
  double zeta = 0.0;  // max_i |x_i|
  double eta = 0.0;   // max_i |v_i|
  double I0 = 0.0;    // total mass
  double J0 = 0.0;    // sqrt(M0 M2) of this snapshot
};

KineticStats kinetic_stats(const Ensemble& ensemble);

/// Empirical alignment force sum_j w_j r(|x - y_j|) (v_j - v) at (x, v).
std::vector<double> q_force(const Ensemble& ensemble, const Kernel& kernel, std::span<const double> x,
                            std::span<const double> v);

/// One RK4 step of the characteristics dx = v, dv = lambda Q, all samples
/// moving through each stage together. Weights are carried unchanged.
Ensemble step_ensemble(const Ensemble& ensemble, double lambda, const Kernel& kernel, double dt,
                       Backend backend = Backend::parallel, std::size_t step_index = 0);

struct VelocityBound {
  double lower = 0.0;
  double upper = 0.0;
};

/// +-(eta0 + J0/I0 + lambda K J0 t), a bound on every velocity component
/// and on |v| along characteristics.
VelocityBound velocity_trajectory_bounds(const KineticStats& initial, const Kernel& kernel, double lambda, double t);

/// K kappa3^-beta (1 + t^2 + t^4)^-beta.
double phi_kinetic_envelope(double kappa3, double K, double beta, double t);

/// Lambda0 exp(-kappa4 t^(1-4beta)) for beta < 1/4 and Lambda0 (1 + t)^-kappa5
/// for beta = 1/4; the unspecified prefactor C3 is taken as 1.
double lambda_envelope(const EnvelopeParams& params, double Lambda0, double t);

/// Lambda0 exp(-2 lambda M0 Phi).
double lambda_envelope_sharp(double Lambda0, double lambda, double M0, double Phi);

/// lambda sum_{i,j} w_i w_j r(|x_i - x_j|), diagonal included.
double entropy_production_rate(const Ensemble& ensemble, const Kernel& kernel, double lambda,
                               Backend backend = Backend::parallel);

/// M2(0) e^{-2 K M0 c t} + |M1|^2/M0 (1 - e^{-2 K M0 c t}) with c = 1 for the
/// rate as displayed or c = lambda for the rate carried through the
/// derivation.
double m2_lower_bound(double M2_0, double M1_norm2, double M0, double K, double c, double t);

/// One row of the kinetic diagnostics table.
struct KineticRecord {
  double t = 0.0;
  double M0 = 0.0;
  std::vector<double> M1;
  double M2 = 0.0;
  double Lambda = 0.0;
  double zeta = 0.0;
  double eta = 0.0;
  double phi_min = 0.0;
  double Phi = 0.0;
  double entropy_rate = 0.0;
  double dissipation = 0.0;  // sum_{i,j} w_i w_j r_ij |v_i - v_j|^2
};

struct KineticRun {
  std::vector<KineticRecord> series;
  KineticStats initial;
  Ensemble final_state;
};

KineticRecord make_kinetic_record(const Ensemble& ensemble, const Kernel& kernel, double lambda,
                                  Backend backend = Backend::parallel);

/// Integrates the ensemble with the same schedule as simulate(). The
/// observer sees every recorded snapshot together with its record.
KineticRun run_kinetic(const SimConfig& config, const Ensemble& initial,
                       const std::function<void(const Ensemble&, const KineticRecord&)>& observer = {});

struct DissipationCheck {
  double max_relative_mismatch = 0.0;
  std::size_t worst_index = 0;
  std::size_t intervals = 0;
};

/// Compares (Lambda_{k+1} - Lambda_k)/(t_{k+1} - t_k) against
/// -lambda (D_k + D_{k+1})/2 on consecutive records.
DissipationCheck dissipation_identity(const std::vector<KineticRecord>& series, double lambda);

}  // namespace flock
