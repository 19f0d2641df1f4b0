// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 haartv contributors

#ifndef HAARTV_GRADIENT_HPP
#define HAARTV_GRADIENT_HPP

#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "haartv/common.hpp"
#include "haartv/transform.hpp"

namespace haartv {

/// Smooth mode scales the detail vector to approximate the gradient of the
/// sampled function at the cell center; edge mode divides that by 2^n so a
/// jump discontinuity gets the same length at every level that resolves it.
enum class GradientMode { Smooth, Edge };

struct GradientSample {
  int level = 0;
  std::array<int, 3> alpha{0, 0, 0};
  std::array<double, 3> position{0.0, 0.0, 0.0};  // cell center, unit cube
  std::array<double, 3> vec{0.0, 0.0, 0.0};
};

struct GradientField {
  int s = 0;
  std::vector<GradientSample> samples;
};

/// Convex weights 2^{n-n1} / (2 - 2^{n0-n1}) over a level window; they sum
/// to one and double from each level to the next.
struct LevelWeights {
  int n0 = 0;
  int n1 = 0;
  std::vector<double> mu;

  double at(int n) const {
    if (n < n0 || n > n1) throw std::invalid_argument("level outside weight window");
    return mu[static_cast<std::size_t>(n - n0)];
  }
};

inline LevelWeights make_level_weights(int n0, int n1) {
  if (n0 < 0 || n0 > n1)
    throw std::invalid_argument("level window must satisfy 0 <= n0 <= n1");
  LevelWeights w;
  w.n0 = n0;
  w.n1 = n1;
  const double denom = 2.0 - std::ldexp(1.0, n0 - n1);
  w.mu.resize(static_cast<std::size_t>(n1 - n0 + 1));
  for (int n = n0; n <= n1; ++n)
    w.mu[static_cast<std::size_t>(n - n0)] = std::ldexp(1.0, n - n1) / denom;
  return w;
}

/// Default estimation window: the top four levels (fewer when the pyramid
/// is shallow).
inline LevelWeights default_level_weights(const WaveletPyramid& p) {
  const int n1 = p.finest_level();
  if (n1 < 0) throw std::invalid_argument("pyramid has no detail levels");
  return make_level_weights(std::max(0, n1 - 3), n1);
}

namespace detail {

// Renormalization factor applied to raw detail vectors.  The sign flip makes
// the result point along the gradient of the sampled function; the
// amplitude term 2^{-ms/2} converts coefficients of the cube transform back
// to the unit-amplitude sampled function.
inline double gradient_factor(const WaveletPyramid& p, int n, GradientMode mode) {
  const int s = p.rank();
  const int m = p.exponent();
  const int twice = mode == GradientMode::Smooth ? 2 * n + n * s + 4 - m * s
                                                 : n * s + 4 - m * s;
  return -half_pow2(twice);
}

}  // namespace detail

/// One level of renormalized gradient vectors at the cell centers
/// x = 2^{-n}(alpha + 1/2), in for_each_alpha order.
inline GradientField renormalized_gradients(const WaveletPyramid& p, int level,
                                            GradientMode mode) {
  if (level < 0 || level > p.finest_level())
    throw std::invalid_argument("renormalized_gradients: level outside [0, " +
                                std::to_string(p.finest_level()) + "]");
  const int s = p.rank();
  const double factor = detail::gradient_factor(p, level, mode);
  const double cell = std::ldexp(1.0, -level);
  GradientField field;
  field.s = s;
  field.samples.reserve(level_cell_count(s, level));
  for_each_alpha(s, level, [&](const std::array<int, 3>& alpha) {
    GradientSample g;
    g.level = level;
    g.alpha = alpha;
    for (int j = 0; j < s; ++j) {
      g.position[j] = (static_cast<double>(alpha[j]) + 0.5) * cell;
      g.vec[j] = factor * p.detail(level, 1u << j, alpha);
    }
    field.samples.push_back(g);
  });
  return field;
}

/// Gradient samples for a whole window of levels, coarse to fine.
inline GradientField gradient_field(const WaveletPyramid& p, GradientMode mode, int n0,
                                    int n1) {
  if (n0 < 0 || n0 > n1 || n1 > p.finest_level())
    throw std::invalid_argument("gradient_field: bad level window");
  GradientField field;
  field.s = p.rank();
  for (int n = n0; n <= n1; ++n) {
    GradientField level = renormalized_gradients(p, n, mode);
    field.samples.insert(field.samples.end(), level.samples.begin(), level.samples.end());
  }
  return field;
}

/// Single-level TV estimate 2^{n(1-s/2)+2} * sum_alpha |d^n_alpha|_2 over
/// the raw single-component detail vectors.
inline double tv_estimate_level(const WaveletPyramid& p, int level) {
  if (level < 0 || level > p.finest_level())
    throw std::invalid_argument("tv_estimate_level: level outside [0, " +
                                std::to_string(p.finest_level()) + "]");
  const int s = p.rank();
  const double factor = half_pow2(2 * level - level * s + 4);
  const std::size_t cells = level_cell_count(s, level);
  const double sum = pairwise_sum(cells, [&](std::size_t k) {
    const std::array<int, 3> alpha = alpha_at(s, level, k);
    double sq = 0.0;
    for (int j = 0; j < s; ++j) {
      const double d = p.detail(level, 1u << j, alpha);
      sq += d * d;
    }
    return std::sqrt(sq);
  });
  return factor * sum;
}

/// Convex combination of single-level estimates under the given weights.
inline double tv_estimate_averaged(const WaveletPyramid& p, const LevelWeights& w) {
  if (w.n1 > p.finest_level())
    throw std::invalid_argument("tv_estimate_averaged: window exceeds finest level");
  double acc = 0.0;
  for (int n = w.n0; n <= w.n1; ++n) acc += w.at(n) * tv_estimate_level(p, n);
  return acc;
}

}  // namespace haartv

#endif  // HAARTV_GRADIENT_HPP
