// Tiled all-pairs sweeps.

#include <omp.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <vector>

#include "flock/pairwise.hpp"

namespace flock::parallel {

namespace {

constexpr std::size_t kTile = 256;
constexpr double kFastBetaMax = 0.98;  // keeps beta * log(u) above -700 in pow_neg

enum class Form { constant, inverse, inv_sqrt, inv_quarter, general, large, custom };

Form classify(const Kernel& k) {
  if (!k.is_power_family()) return Form::custom;
  if (k.beta == 0.0) return Form::constant;
  if (k.beta == 1.0) return Form::inverse;
  if (k.beta == 0.5) return Form::inv_sqrt;
  if (k.beta == 0.25) return Form::inv_quarter;
  if (k.beta <= kFastBetaMax) return Form::general;
  return Form::large;
}

// u^-beta for finite u >= 1 and 0 < beta <= kFastBetaMax, branch-free so it
// vectorizes inside `omp simd` loops. Works in base 2: log2 via a minimax fit
// of atanh on a mantissa folded into [sqrt(2)/2, sqrt(2)), exp2 via a
// degree-9 minimax polynomial on [-1/2, 1/2]. Relative error below 1e-13.
[[gnu::always_inline]] inline double pow_neg(double u, double beta) {
  constexpr std::uint64_t kFold = 0x3fe6a09e667f3bcdULL;  // bits of sqrt(2)/2
  constexpr double kTwo52 = 4503599627370496.0;
  constexpr double kShifter = 6755399441055744.0;  // 1.5 * 2^52
  const std::uint64_t t = std::bit_cast<std::uint64_t>(u) - kFold;
  const double e = std::bit_cast<double>((t >> 52) | 0x4330000000000000ULL) - kTwo52;
  const double m = std::bit_cast<double>((t & 0x000fffffffffffffULL) + kFold);
  const double z = (m - 1.0) / (m + 1.0);
  const double z2 = z * z;
  double p = 0.28287909588880783;
  p = p * z2 + 0.3199072380585464;
  p = p * z2 + 0.41220921127617105;
  p = p * z2 + 0.5770779428488465;
  p = p * z2 + 0.9617966941110634;
  p = p * z2 + 2.8853900817778517;
  const double y = -beta * e - beta * (z * p);
  const double shifted = y + kShifter;
  const double n = shifted - kShifter;
  const double f = y - n;
  double q = 1.0175023219685917e-07;
  q = q * f + 1.3255148622048907e-06;
  q = q * f + 1.5252826804283427e-05;
  q = q * f + 0.00015403456182859065;
  q = q * f + 0.001333355796163828;
  q = q * f + 0.009618129158989772;
  q = q * f + 0.05550410866583298;
  q = q * f + 0.24022650695814277;
  q = q * f + 0.693147180559937;
  q = q * f + 1.0;
  const std::uint64_t ni = std::bit_cast<std::uint64_t>(shifted) - std::bit_cast<std::uint64_t>(kShifter);
  return q * std::bit_cast<double>((ni + 1023ULL) << 52);
}

// Structure-of-arrays copy of a cloud: coordinate k of point i sits at
// [k * n + i], so the inner j-loops stream contiguous memory.
struct Soa {
  std::size_t n = 0;
  std::size_t d = 0;
  std::vector<double> x;
  std::vector<double> v;
  std::vector<double> w;

  explicit Soa(const CloudView& c) : n(c.count), d(c.dim), x(n * d), v(n * d), w(n) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t k = 0; k < d; ++k) {
        x[k * n + i] = c.x[i * d + k];
        v[k * n + i] = c.v[i * d + k];
      }
      w[i] = c.weight(i);
    }
  }
};

struct TilePair {
  std::size_t a;
  std::size_t b;
};

std::vector<TilePair> tile_pairs(std::size_t tiles) {
  std::vector<TilePair> pairs;
  pairs.reserve(tiles * (tiles + 1) / 2);
  for (std::size_t a = 0; a < tiles; ++a) {
    for (std::size_t b = a; b < tiles; ++b) {
      pairs.push_back({a, b});
    }
  }
  return pairs;
}

// Squared distances from point i to points [j0, j0 + len).
void squared_distances(const Soa& s, std::size_t i, std::size_t j0, std::size_t len, double* s2) {
  for (std::size_t j = 0; j < len; ++j) s2[j] = 0.0;
  for (std::size_t k = 0; k < s.d; ++k) {
    const double* xk = s.x.data() + k * s.n;
    const double xi = xk[i];
#pragma omp simd
    for (std::size_t j = 0; j < len; ++j) {
      const double diff = xi - xk[j0 + j];
      s2[j] += diff * diff;
    }
  }
}

template <Form F>
void rates(const Kernel& k, const double* s2, double* r, std::size_t len) {
  const double amp = k.amplitude;
  const double beta = k.beta;
  if constexpr (F == Form::constant) {
    for (std::size_t j = 0; j < len; ++j) r[j] = amp;
  } else if constexpr (F == Form::inverse) {
#pragma omp simd
    for (std::size_t j = 0; j < len; ++j) r[j] = amp / (1.0 + s2[j]);
  } else if constexpr (F == Form::inv_sqrt) {
#pragma omp simd
    for (std::size_t j = 0; j < len; ++j) r[j] = amp / std::sqrt(1.0 + s2[j]);
  } else if constexpr (F == Form::inv_quarter) {
#pragma omp simd
    for (std::size_t j = 0; j < len; ++j) r[j] = amp / std::sqrt(std::sqrt(1.0 + s2[j]));
  } else if constexpr (F == Form::general) {
#pragma omp simd
    for (std::size_t j = 0; j < len; ++j) r[j] = amp * pow_neg(1.0 + s2[j], beta);
  } else if constexpr (F == Form::large) {
    for (std::size_t j = 0; j < len; ++j) r[j] = amp * std::pow(1.0 + s2[j], -beta);
  } else {
    for (std::size_t j = 0; j < len; ++j) r[j] = k.profile(std::sqrt(s2[j]));
  }
}

std::size_t tile_begin(std::size_t t) { return t * kTile; }
std::size_t tile_len(std::size_t t, std::size_t n) { return std::min(kTile, n - t * kTile); }

template <Form F>
inline double rate_of(const Kernel& k, double s2) {
  if constexpr (F == Form::constant) {
    return k.amplitude;
  } else if constexpr (F == Form::inverse) {
    return k.amplitude / (1.0 + s2);
  } else if constexpr (F == Form::inv_sqrt) {
    return k.amplitude / std::sqrt(1.0 + s2);
  } else if constexpr (F == Form::inv_quarter) {
    return k.amplitude / std::sqrt(std::sqrt(1.0 + s2));
  } else if constexpr (F == Form::general) {
    return k.amplitude * pow_neg(1.0 + s2, k.beta);
  } else {
    return k.amplitude * std::pow(1.0 + s2, -k.beta);
  }
}

// One row of a tile pair with the dimension (1..3) fixed at compile time, so
// the distance, rate and both accumulations fuse into a single vector loop.
// Covers columns [jstart, blen); `col` receives the mirrored terms.
template <Form F, std::size_t D>
void fused_row(const Kernel& kernel, const Soa& s, std::size_t i, std::size_t b0, std::size_t jstart,
               std::size_t blen, double* row, double* __restrict col) {
  static_assert(D >= 1 && D <= 3);
  const std::size_t n = s.n;
  const Kernel k = {kernel.amplitude, kernel.beta, {}};
  const double* __restrict wb = s.w.data() + b0;
  const double wi = s.w[i];
  const double* __restrict x0 = s.x.data() + b0;
  const double* __restrict x1 = s.x.data() + (D > 1 ? n : 0) + b0;
  const double* __restrict x2 = s.x.data() + (D > 2 ? 2 * n : 0) + b0;
  const double* __restrict v0 = s.v.data() + b0;
  const double* __restrict v1 = s.v.data() + (D > 1 ? n : 0) + b0;
  const double* __restrict v2 = s.v.data() + (D > 2 ? 2 * n : 0) + b0;
  double* __restrict c0 = col;
  double* __restrict c1 = col + (D > 1 ? kTile : 0);
  double* __restrict c2 = col + (D > 2 ? 2 * kTile : 0);
  const double xi0 = s.x[i], xi1 = D > 1 ? s.x[n + i] : 0.0, xi2 = D > 2 ? s.x[2 * n + i] : 0.0;
  const double vi0 = s.v[i], vi1 = D > 1 ? s.v[n + i] : 0.0, vi2 = D > 2 ? s.v[2 * n + i] : 0.0;
  double a0 = 0.0, a1 = 0.0, a2 = 0.0;
#pragma omp simd reduction(+ : a0, a1, a2)
  for (std::size_t j = jstart; j < blen; ++j) {
    double s2 = (xi0 - x0[j]) * (xi0 - x0[j]);
    if constexpr (D > 1) s2 += (xi1 - x1[j]) * (xi1 - x1[j]);
    if constexpr (D > 2) s2 += (xi2 - x2[j]) * (xi2 - x2[j]);
    const double r = rate_of<F>(k, s2);
    const double r0 = r * (v0[j] - vi0);
    a0 += wb[j] * r0;
    c0[j] -= wi * r0;
    if constexpr (D > 1) {
      const double r1 = r * (v1[j] - vi1);
      a1 += wb[j] * r1;
      c1[j] -= wi * r1;
    }
    if constexpr (D > 2) {
      const double r2 = r * (v2[j] - vi2);
      a2 += wb[j] * r2;
      c2[j] -= wi * r2;
    }
  }
  row[0] = a0;
  if constexpr (D > 1) row[1] = a1;
  if constexpr (D > 2) row[2] = a2;
}

// Any dimension; rates go through a scratch buffer.
template <Form F>
void generic_row(const Kernel& kernel, const Soa& s, std::size_t i, std::size_t b0, std::size_t jstart,
                 std::size_t blen, double* row, double* col, double* s2, double* r) {
  const std::size_t n = s.n;
  const std::size_t len = blen - jstart;
  squared_distances(s, i, b0 + jstart, len, s2);
  rates<F>(kernel, s2, r, len);
  const double wi = s.w[i];
  const double* wb = s.w.data() + b0 + jstart;
  for (std::size_t k = 0; k < s.d; ++k) {
    const double* vk = s.v.data() + k * n + b0 + jstart;
    const double vik = s.v[k * n + i];
    double* colk = col + k * kTile + jstart;
    double acc = 0.0;
#pragma omp simd reduction(+ : acc)
    for (std::size_t j = 0; j < len; ++j) {
      const double rd = r[j] * (vk[j] - vik);
      acc += wb[j] * rd;
      colk[j] -= wi * rd;
    }
    row[k] = acc;
  }
}

template <Form F>
void alignment_impl(const Kernel& kernel, const Soa& s, std::span<double> out) {
  const std::size_t n = s.n;
  const std::size_t d = s.d;
  const std::size_t tiles = (n + kTile - 1) / kTile;
  const auto pairs = tile_pairs(tiles);
  // partial[(i * tiles + t) * d + k]: contribution of tile t to point i.
  std::vector<double> partial(n * tiles * d, 0.0);

#pragma omp parallel
  {
    std::vector<double> s2(kTile), r(kTile), col(kTile * d);
#pragma omp for schedule(dynamic, 1)
    for (std::size_t p = 0; p < pairs.size(); ++p) {
      const std::size_t ta = pairs[p].a;
      const std::size_t tb = pairs[p].b;
      const std::size_t a0 = tile_begin(ta), alen = tile_len(ta, n);
      const std::size_t b0 = tile_begin(tb), blen = tile_len(tb, n);
      const bool diagonal = ta == tb;
      std::fill(col.begin(), col.end(), 0.0);
      for (std::size_t i = a0; i < a0 + alen; ++i) {
        double* row = partial.data() + (i * tiles + tb) * d;
        // Diagonal tiles visit each pair once; the self term vanishes.
        const std::size_t jstart = diagonal ? i - a0 + 1 : 0;
        if constexpr (F != Form::custom) {
          if (d == 1) {
            fused_row<F, 1>(kernel, s, i, b0, jstart, blen, row, col.data());
            continue;
          }
          if (d == 2) {
            fused_row<F, 2>(kernel, s, i, b0, jstart, blen, row, col.data());
            continue;
          }
          if (d == 3) {
            fused_row<F, 3>(kernel, s, i, b0, jstart, blen, row, col.data());
            continue;
          }
        }
        generic_row<F>(kernel, s, i, b0, jstart, blen, row, col.data(), s2.data(), r.data());
      }
      for (std::size_t j = 0; j < blen; ++j) {
        for (std::size_t k = 0; k < d; ++k) {
          double& slot = partial[((b0 + j) * tiles + ta) * d + k];
          slot = diagonal ? slot + col[k * kTile + j] : col[k * kTile + j];
        }
      }
    }

#pragma omp for schedule(static)
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t k = 0; k < d; ++k) {
        double acc = 0.0;
        for (std::size_t t = 0; t < tiles; ++t) acc += partial[(i * tiles + t) * d + k];
        out[i * d + k] = acc;
      }
    }
  }
}

template <Form F>
PairSums pair_sums_impl(const Kernel& kernel, const Soa& s) {
  const std::size_t n = s.n;
  const std::size_t d = s.d;
  const std::size_t tiles = (n + kTile - 1) / kTile;
  const auto pairs = tile_pairs(tiles);
  std::vector<PairSums> partial(pairs.size());

#pragma omp parallel
  {
    std::vector<double> s2(kTile), r(kTile), dv2(kTile);
#pragma omp for schedule(dynamic, 1)
    for (std::size_t p = 0; p < pairs.size(); ++p) {
      const std::size_t a0 = tile_begin(pairs[p].a), alen = tile_len(pairs[p].a, n);
      const std::size_t b0 = tile_begin(pairs[p].b), blen = tile_len(pairs[p].b, n);
      double rate = 0.0;
      double diss = 0.0;
      for (std::size_t i = a0; i < a0 + alen; ++i) {
        squared_distances(s, i, b0, blen, s2.data());
        rates<F>(kernel, s2.data(), r.data(), blen);
        std::fill(dv2.begin(), dv2.begin() + static_cast<std::ptrdiff_t>(blen), 0.0);
        for (std::size_t k = 0; k < d; ++k) {
          const double* vk = s.v.data() + k * n + b0;
          const double vik = s.v[k * n + i];
#pragma omp simd
          for (std::size_t j = 0; j < blen; ++j) {
            const double dv = vk[j] - vik;
            dv2[j] += dv * dv;
          }
        }
        const double* wb = s.w.data() + b0;
        double row_rate = 0.0;
        double row_diss = 0.0;
#pragma omp simd reduction(+ : row_rate, row_diss)
        for (std::size_t j = 0; j < blen; ++j) {
          const double c = wb[j] * r[j];
          row_rate += c;
          row_diss += c * dv2[j];
        }
        rate += s.w[i] * row_rate;
        diss += s.w[i] * row_diss;
      }
      const double mult = pairs[p].a == pairs[p].b ? 1.0 : 2.0;
      partial[p] = {mult * rate, mult * diss};
    }
  }

  PairSums total;
  for (const auto& ps : partial) {
    total.rate += ps.rate;
    total.dissipation += ps.dissipation;
  }
  return total;
}

template <class Fn>
auto dispatch(const Kernel& kernel, Fn&& fn) {
  switch (classify(kernel)) {
    case Form::constant: return fn.template operator()<Form::constant>();
    case Form::inverse: return fn.template operator()<Form::inverse>();
    case Form::inv_sqrt: return fn.template operator()<Form::inv_sqrt>();
    case Form::inv_quarter: return fn.template operator()<Form::inv_quarter>();
    case Form::general: return fn.template operator()<Form::general>();
    case Form::large: return fn.template operator()<Form::large>();
    case Form::custom: break;
  }
  return fn.template operator()<Form::custom>();
}

}  // namespace

void alignment(const Kernel& kernel, const CloudView& cloud, std::span<double> out) {
  if (cloud.count == 0) return;
  const Soa s(cloud);
  dispatch(kernel, [&]<Form F>() { alignment_impl<F>(kernel, s, out); });
}

PairSums pair_sums(const Kernel& kernel, const CloudView& cloud) {
  if (cloud.count == 0) return {};
  const Soa s(cloud);
  return dispatch(kernel, [&]<Form F>() { return pair_sums_impl<F>(kernel, s); });
}

double max_pair_distance(const CloudView& cloud) {
  const Soa s(cloud);
  const std::size_t n = s.n;
  double best = 0.0;
#pragma omp parallel
  {
    std::vector<double> s2(n);
#pragma omp for schedule(dynamic, 16) reduction(max : best)
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t len = n - i;
      squared_distances(s, i, i, len, s2.data());
      double local = 0.0;
#pragma omp simd reduction(max : local)
      for (std::size_t j = 0; j < len; ++j) local = std::max(local, s2[j]);
      best = std::max(best, local);
    }
  }
  return std::sqrt(best);
}

}  // namespace flock::parallel
