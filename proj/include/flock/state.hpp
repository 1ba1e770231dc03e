#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace flock {

/// Read-only view of a point cloud in phase space. Coordinates are row-major
/// (count x dim). An empty weight span means every point has unit weight.
struct CloudView {
  std::size_t count = 0;
  std::size_t dim = 0;
  std::span<const double> x;
  std::span<const double> v;
  std::span<const double> w;

  double weight(std::size_t i) const noexcept { return w.empty() ? 1.0 : w[i]; }
};

/// N agents in d dimensions at one instant.
struct ParticleState {
  double t = 0.0;
  std::size_t dim = 1;
  std::vector<double> x;
  std::vector<double> v;

  ParticleState() = default;
  ParticleState(std::size_t count, std::size_t dimension)
      : dim(dimension), x(count * dimension, 0.0), v(count * dimension, 0.0) {}

  std::size_t count() const noexcept { return dim == 0 ? 0 : x.size() / dim; }

  std::span<const double> position(std::size_t i) const { return {x.data() + i * dim, dim}; }
  std::span<const double> velocity(std::size_t i) const { return {v.data() + i * dim, dim}; }
  std::span<double> position(std::size_t i) { return {x.data() + i * dim, dim}; }
  std::span<double> velocity(std::size_t i) { return {v.data() + i * dim, dim}; }

  CloudView view() const { return {count(), dim, x, v, {}}; }

  /// Throws IntegrityError unless N >= 1, d >= 1, shapes agree and all
  /// entries are finite.
  void validate() const;
};

/// Weighted phase-space samples standing in for the kinetic density f(x, v, t).
struct Ensemble {
  double t = 0.0;
  std::size_t dim = 1;
  std::vector<double> x;
  std::vector<double> v;
  std::vector<double> w;

  std::size_t count() const noexcept { return w.size(); }

  std::span<const double> position(std::size_t i) const { return {x.data() + i * dim, dim}; }
  std::span<const double> velocity(std::size_t i) const { return {v.data() + i * dim, dim}; }

  CloudView view() const { return {count(), dim, x, v, w}; }

  /// Throws IntegrityError unless M >= 1, shapes agree, weights are positive
  /// and every entry is finite.
  void validate() const;
};

}  // namespace flock
