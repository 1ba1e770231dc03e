#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "flock/kernel.hpp"
#include "flock/kinetic.hpp"
#include "flock/state.hpp"

namespace flock {

/// Uniform cubic cells of side h: cell k along an axis covers
/// [origin + k h, origin + (k + 1) h).
struct GridSpec {
  std::size_t dim = 1;
  std::vector<double> origin;
  double h = 1.0;
  std::size_t cells_per_dim = 16;

  double cell_volume() const;
};

/// n^d cells covering the position bounding box of the ensemble.
GridSpec bounding_grid(const Ensemble& ensemble, std::size_t cells_per_dim = 16);

/// Moments of one occupied cell. P and q are densities (per unit volume).
struct HydroCell {
  std::size_t index = 0;  // row-major cell index
  std::vector<double> center;
  double mass = 0.0;
  double rho = 0.0;
  std::vector<double> u;
  double e = 0.0;  // specific internal energy, sum w |v - u|^2 / (2 mass)
  double E = 0.0;  // e + |u|^2 / 2
  std::vector<double> P;  // d x d, row-major
  std::vector<double> q;
};

/// Occupied cells only, in increasing index order; empty cells are implied.
struct HydroField {
  GridSpec grid;
  std::vector<HydroCell> cells;
};

/// Nearest-cell deposition. Throws CoverageError naming the first sample
/// outside the grid.
HydroField deposit_fields(const Ensemble& ensemble, const GridSpec& grid);

struct GammaPair {
  double pairwise = 0.0;
  double identity = 0.0;
};

/// Double sum over occupied cell pairs (equal pairs included) of
/// (|u_a - u_b|^2 / 2 + e_a + e_b) m_a m_b, and 2 E M0 - |M1|^2 from the same
/// cells.
GammaPair gamma_functional(const HydroField& field);

/// Sample-level values: half of sum_{i,j} w_i w_j |v_i - v_j|^2, and
/// M0 M2 - |M1|^2.
GammaPair gamma_ensemble(const Ensemble& ensemble, Backend backend = Backend::parallel);

struct SourceTerms {
  std::vector<std::vector<double>> S1;  // per occupied cell
  std::vector<double> S2;               // (|u_a - u_b|^2 / 2 + e_a + e_b) form
  std::vector<double> S2_total_energy;  // (E_a + E_b - u_a . u_b) form
};

/// Cell-pair sums of the momentum and energy sources, kernel evaluated at
/// cell-center distances.
SourceTerms source_terms(const HydroField& field, const Kernel& kernel, double lambda);

/// Gamma0 exp(-2 I0 lambda Phi).
double gamma_envelope(double Gamma0, double I0, double lambda, double Phi);

struct EnergySplit {
  double total = 0.0;     // M2 / 2 from the samples
  double kinetic = 0.0;   // sum_a m_a |u_a|^2 / 2
  double internal = 0.0;  // sum_a m_a e_a
};

EnergySplit energy_split(const HydroField& field, const Ensemble& ensemble);

struct GammaReport {
  double Gamma_pairwise = 0.0;
  double Gamma_identity = 0.0;
  double E_total = 0.0;
  double E_kinetic = 0.0;
  double E_internal = 0.0;
  std::vector<double> S1_total;  // sum_a S1_a h^d
  std::vector<double> S2_values;
  double S2_form_gap = 0.0;  // max_a |S2_a - S2_total_energy_a|
  double S2_max_mass = 0.0;  // max_a |S2_a| h^d
};

GammaReport gamma_report(const HydroField& field, const Ensemble& ensemble, const Kernel& kernel, double lambda);

struct EnergyBudget {
  double max_relative_mismatch = 0.0;  // over consecutive record pairs
  std::size_t worst_index = 0;
  std::size_t intervals = 0;
};

/// Compares (E_{k+1} - E_k)/(t_{k+1} - t_k), E = M2/2, against
/// -(lambda/2) (D_k + D_{k+1})/2 with D the recorded dissipation.
/// Intervals where both sides vanish count as exact.
EnergyBudget energy_budget(const std::vector<KineticRecord>& series, double lambda);

}  // namespace flock
