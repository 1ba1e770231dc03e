#include "rk4.hpp"

#include <cmath>

namespace flock::detail {

namespace {

void force(std::size_t dim, const std::vector<double>& x, const std::vector<double>& v, std::span<const double> w,
           double coupling, const Kernel& kernel, Backend backend, std::vector<double>& out) {
  const CloudView cloud{v.size() / dim, dim, x, v, w};
  out.resize(v.size());
  alignment(backend, kernel, cloud, out);
  for (double& value : out) value *= coupling;
}

// out = a + h * b
void axpy(const std::vector<double>& a, double h, const std::vector<double>& b, std::vector<double>& out) {
  out.resize(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + h * b[i];
}

}  // namespace

void rk4_step(std::size_t dim, std::vector<double>& x, std::vector<double>& v, std::span<const double> w,
              double coupling, const Kernel& kernel, double dt, Backend backend, Rk4Scratch& s) {
  const double half = 0.5 * dt;

  force(dim, x, v, w, coupling, kernel, backend, s.kv1);

  axpy(x, half, v, s.xs);
  axpy(v, half, s.kv1, s.vs);
  s.kx2 = s.vs;
  force(dim, s.xs, s.vs, w, coupling, kernel, backend, s.kv2);

  axpy(x, half, s.kx2, s.xs);
  axpy(v, half, s.kv2, s.vs);
  s.kx3 = s.vs;
  force(dim, s.xs, s.vs, w, coupling, kernel, backend, s.kv3);

  axpy(x, dt, s.kx3, s.xs);
  axpy(v, dt, s.kv3, s.vs);
  s.kx4 = s.vs;
  force(dim, s.xs, s.vs, w, coupling, kernel, backend, s.kv4);

  const double sixth = dt / 6.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    x[i] += sixth * (v[i] + 2.0 * s.kx2[i] + 2.0 * s.kx3[i] + s.kx4[i]);
    v[i] += sixth * (s.kv1[i] + 2.0 * s.kv2[i] + 2.0 * s.kv3[i] + s.kv4[i]);
  }
}

bool all_finite(std::span<const double> a) {
  for (double value : a) {
    if (!std::isfinite(value)) return false;
  }
  return true;
}

TimeGrid::TimeGrid(double step, double end) : dt(step), t_end(end), steps(0) {
  if (end > 0.0) steps = static_cast<std::size_t>(std::ceil(end / step - 1e-9));
}

}  // namespace flock::detail
