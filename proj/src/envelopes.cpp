#include "flock/envelopes.hpp"

#include <algorithm>
#include <boost/math/quadrature/exp_sinh.hpp>
#include <cmath>
#include <limits>

#include "flock/error.hpp"

namespace flock {

namespace {

double require(const std::optional<double>& value, const char* what) {
  if (!value) throw RegimeError(std::string(what));
  return *value;
}

}  // namespace

double EnvelopeParams::require_kappa1() const { return require(kappa1, "kappa1 is not available"); }
double EnvelopeParams::require_C2() const { return require(C2, "C2 is defined only for beta < 1/2"); }
double EnvelopeParams::require_kappa2() const { return require(kappa2, "kappa2 is defined only for beta < 1/2"); }
double EnvelopeParams::require_kappa3() const { return require(kappa3, "kappa3 needs kinetic initial data"); }
double EnvelopeParams::require_kappa4() const { return require(kappa4, "kappa4 is defined only for beta < 1/4"); }
double EnvelopeParams::require_kappa5() const { return require(kappa5, "kappa5 is defined only for beta = 1/4"); }

double c2_integral(double C1, double beta) {
  if (!(C1 > 0.0)) throw DomainError("c2_integral: C1 must be positive");
  if (!(beta >= 0.0 && beta < 0.5)) throw RegimeError("c2_integral: needs 0 <= beta < 1/2");
  const double p = 1.0 - 2.0 * beta;
  boost::math::quadrature::exp_sinh<double> integrator;
  auto f = [&](double t) { return std::exp(-C1 * std::pow(1.0 + t, p)); };
  double error = 0.0;
  const double value = integrator.integrate(f, 0.0, std::numeric_limits<double>::infinity(), 1e-12, &error);
  if (!(error <= 1e-10 * value)) throw DomainError("c2_integral: quadrature did not converge");
  return value;
}

EnvelopeParams envelope_constants(double X0, double EV0, double beta, double lambda, double K) {
  if (!(X0 >= 0.0)) throw DomainError("envelope_constants: X0 must be nonnegative");
  if (!(EV0 > 0.0)) throw HypothesisError("hypothesis EV0 > 0 violated");
  if (!(beta >= 0.0)) throw DomainError("envelope_constants: beta must be nonnegative");
  if (!(lambda >= 0.0) || !(K > 0.0)) throw DomainError("envelope_constants: need lambda >= 0 and K > 0");

  EnvelopeParams p;
  p.beta = beta;
  p.lambda = lambda;
  p.K = K;
  p.kappa1 = std::pow(std::max(1.0 + 4.0 * X0, EV0), -beta);
  if (beta < 0.5 && lambda > 0.0) {
    p.C1 = lambda * K * *p.kappa1 / (1.0 - 2.0 * beta);
    p.C2 = c2_integral(*p.C1, beta);
    p.kappa2 = std::pow(1.0 + 4.0 * X0 + 8.0 * *p.C2 * *p.C2, -beta);
  }
  return p;
}

double kinetic_kappa3(double zeta0, double eta0, double I0, double J0, double lambda) {
  if (!(I0 > 0.0)) throw DomainError("kinetic_kappa3: I0 must be positive");
  const double a = 1.0 + 12.0 * zeta0 * zeta0;
  const double b = 12.0 * (eta0 + J0 / I0) * (eta0 + J0 / I0);
  const double c = 3.0 * lambda * lambda * J0 * J0;
  return std::max({a, b, c});
}

double kappa4_constant(double kappa3, double beta) {
  if (!(beta >= 0.0 && beta < 0.25)) throw RegimeError("kappa4 is defined only for beta < 1/4");
  return 1.0 / (std::pow(3.0 * kappa3, beta) * (1.0 - 4.0 * beta));
}

double kappa5_constant(double kappa3, double lambda, double K, double beta) {
  if (beta != 0.25) throw RegimeError("kappa5 is defined only for beta = 1/4");
  return 2.0 * lambda * K / std::pow(3.0 * kappa3, 0.25);
}

void attach_kinetic_constants(EnvelopeParams& params, double kappa3) {
  params.kappa3 = kappa3;
  params.kappa4.reset();
  params.kappa5.reset();
  if (params.beta < 0.25) params.kappa4 = kappa4_constant(kappa3, params.beta);
  if (params.beta == 0.25) params.kappa5 = kappa5_constant(kappa3, params.lambda, params.K, params.beta);
}

double velocity_envelope(const EnvelopeParams& params, double EV0, double t) {
  if (!(t >= 0.0)) throw DomainError("velocity_envelope: t must be nonnegative");
  const double rate = 2.0 * params.lambda * params.K;
  if (params.beta < 0.5) {
    if (params.lambda == 0.0) return EV0;
    return EV0 * std::exp(-rate * params.require_kappa2() * t);
  }
  if (params.beta == 0.5) return EV0 * std::pow(1.0 + t, -rate * params.require_kappa1());
  throw RegimeError("beta > 1/2 unconditional regime not covered");
}

double velocity_envelope_sharp(double EV0, double lambda, double Phi) {
  if (!(Phi >= 0.0)) throw DomainError("velocity_envelope_sharp: Phi must be nonnegative");
  return EV0 * std::exp(-2.0 * lambda * Phi);
}

double position_envelope(double X0, double EV0, double t) { return 2.0 * X0 + 0.5 * EV0 * t * t; }

double phi_lower_envelope(const Kernel& kernel, double X0, double EV0, double t) {
  return kernel_eval(kernel, std::sqrt(4.0 * X0 + EV0 * t * t));
}

double diameter_envelope(const EnvelopeParams& params, double X0) {
  const double c2 = params.require_C2();
  return std::sqrt(2.0 * (4.0 * X0 + 8.0 * c2 * c2));
}

}  // namespace flock
