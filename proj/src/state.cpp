#include "flock/state.hpp"

#include <cmath>

#include "flock/error.hpp"

namespace flock {

namespace {

bool all_finite(const std::vector<double>& a) {
  for (double value : a) {
    if (!std::isfinite(value)) return false;
  }
  return true;
}

}  // namespace

void ParticleState::validate() const {
  if (dim == 0) throw IntegrityError("particle state: dimension must be >= 1");
  if (x.empty() || x.size() % dim != 0) throw IntegrityError("particle state: need N >= 1 rows of length d");
  if (v.size() != x.size()) throw IntegrityError("particle state: positions and velocities differ in shape");
  if (!all_finite(x) || !all_finite(v)) throw IntegrityError("particle state: non-finite entry");
}

void Ensemble::validate() const {
  if (dim == 0) throw IntegrityError("ensemble: dimension must be >= 1");
  if (w.empty()) throw IntegrityError("ensemble: need M >= 1 samples");
  if (x.size() != w.size() * dim || v.size() != x.size()) throw IntegrityError("ensemble: shape mismatch");
  if (!all_finite(x) || !all_finite(v)) throw IntegrityError("ensemble: non-finite entry");
  for (double wi : w) {
    if (!(wi > 0.0) || !std::isfinite(wi)) throw IntegrityError("ensemble: weights must be positive and finite");
  }
}

}  // namespace flock
