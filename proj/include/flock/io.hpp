#pragma once

#include <iosfwd>
#include <string>

#include "flock/diagnostics.hpp"
#include "flock/hydro.hpp"
#include "flock/kinetic.hpp"
#include "flock/state.hpp"

namespace flock {

/// Shortest decimal string that round-trips to the same double.
std::string format_double(double x);

/// t, m0, m1_1..m1_d, m2, X, EV, phi, Phi
void write_diagnostics_csv(std::ostream& out, const DiagnosticSeries& series, std::size_t dim);

/// t, M0, M1_1..M1_d, M2, Lambda, zeta, eta, phi_min, Phi, entropy_rate
void write_kinetic_csv(std::ostream& out, const std::vector<KineticRecord>& series, std::size_t dim);

/// x_1..x_d, v_1..v_d
void write_state_csv(std::ostream& out, const ParticleState& state);

/// x_1..x_d, v_1..v_d, w
void write_ensemble_csv(std::ostream& out, const Ensemble& ensemble);

/// Occupied cells: center_1..center_d, rho, u_*, e, E, P_11..P_dd, q_*
void write_hydro_csv(std::ostream& out, const HydroField& field);

/// Reads x_1..x_d, v_1..v_d rows (header required). Throws SpecError on a
/// malformed file.
ParticleState read_state_csv(std::istream& in);
ParticleState read_state_csv(const std::string& path);

}  // namespace flock
