#pragma once

#include <optional>
#include <string>

#include "flock/kernel.hpp"

namespace flock {

/// Decay-theorem constants for the kernel K / (1 + s^2)^beta. A constant is
/// present only in the beta regime where the theorems define it; the
/// checked accessors throw RegimeError otherwise.
struct EnvelopeParams {
  double beta = 0.0;
  double lambda = 1.0;
  double K = 1.0;

  std::optional<double> kappa1;  // (max{1 + 4 X0, EV0})^-beta
  std::optional<double> C1;      // lambda K kappa1 / (1 - 2 beta),      beta < 1/2
  std::optional<double> C2;      // int_0^inf exp(-C1 (1+t)^(1-2beta)),   beta < 1/2
  std::optional<double> kappa2;  // (1 + 4 X0 + 8 C2^2)^-beta,            beta < 1/2
  std::optional<double> kappa3;  // kinetic support constant
  std::optional<double> kappa4;  // 1 / ((3 kappa3)^beta (1 - 4 beta)),   beta < 1/4
  std::optional<double> kappa5;  // 2 lambda K / (3 kappa3)^(1/4),        beta = 1/4

  double require_kappa1() const;
  double require_C2() const;
  double require_kappa2() const;
  double require_kappa3() const;
  double require_kappa4() const;
  double require_kappa5() const;
};

/// Particle-level constants from the initial fluctuations. Throws
/// HypothesisError when EV0 <= 0 and DomainError on negative inputs.
EnvelopeParams envelope_constants(double X0, double EV0, double beta, double lambda, double K);

/// int_0^inf exp(-C1 (1 + t)^(1 - 2 beta)) dt by double-exponential
/// quadrature, relative accuracy 1e-10. Requires C1 > 0, 0 <= beta < 1/2.
double c2_integral(double C1, double beta);

/// max{1 + 12 zeta0^2, 12 (eta0 + J0/I0)^2, 3 lambda^2 J0^2}.
double kinetic_kappa3(double zeta0, double eta0, double I0, double J0, double lambda);

/// Throws RegimeError unless beta < 1/4.
double kappa4_constant(double kappa3, double beta);

/// Throws RegimeError unless beta == 1/4.
double kappa5_constant(double kappa3, double lambda, double K, double beta);

/// Stores kappa3 and whichever of kappa4 / kappa5 the regime defines.
void attach_kinetic_constants(EnvelopeParams& params, double kappa3);

/// EV0 exp(-2 lambda K kappa2 t) for beta < 1/2 and
/// EV0 (1 + t)^(-2 lambda K kappa1) for beta = 1/2. Throws RegimeError for
/// beta > 1/2.
double velocity_envelope(const EnvelopeParams& params, double EV0, double t);

/// EV0 exp(-2 lambda Phi), valid for every beta.
double velocity_envelope_sharp(double EV0, double lambda, double Phi);

/// 2 X0 + EV0 t^2 / 2.
double position_envelope(double X0, double EV0, double t);

/// r(sqrt(4 X0 + EV0 t^2)).
double phi_lower_envelope(const Kernel& kernel, double X0, double EV0, double t);

/// sqrt(2 (4 X0 + 8 C2^2)), the flock-diameter ceiling for beta < 1/2.
double diameter_envelope(const EnvelopeParams& params, double X0);

}  // namespace flock
