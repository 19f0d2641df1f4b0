// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 haartv contributors

#ifndef HAARTV_METRICS_HPP
#define HAARTV_METRICS_HPP

#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

#include "haartv/common.hpp"
#include "haartv/transform.hpp"
#include "haartv/volume.hpp"

namespace haartv {

/// Metrics bundle produced by the denoising pipeline and the metrics tool.
/// psnr_db is +infinity when the compared volumes are identical.
struct TvReport {
  double discrete_tv_in = 0.0;
  double discrete_tv_out = 0.0;
  double wavelet_tv_in = 0.0;
  double wavelet_tv_out = 0.0;
  double rel_l2_error = 0.0;
  double psnr_db = 0.0;
  double sparsity = 0.0;
  std::optional<double> lambda;
  std::optional<std::string> mode;
  std::optional<std::pair<int, int>> window;
};

/// Anisotropic-free discrete total variation: sum over voxels of the
/// Euclidean norm of the forward-difference vector.  Differences across the
/// upper boundary contribute zero.
inline double discrete_tv(const Volume& v) {
  const int s = v.rank();
  std::array<std::size_t, 3> stride{0, 0, 0};
  stride[s - 1] = 1;
  for (int k = s - 2; k >= 0; --k) stride[k] = stride[k + 1] * v.shape[k + 1];
  return pairwise_sum(v.size(), [&](std::size_t f) {
    const VoxelIndex idx = v.unflatten(f);
    double sq = 0.0;
    for (int k = 0; k < s; ++k) {
      if (idx[k] + 1 >= v.shape[k]) continue;
      const double d = v.values[f + stride[k]] - v.values[f];
      sq += d * d;
    }
    return std::sqrt(sq);
  });
}

/// Peak signal-to-noise ratio in dB with the peak taken from the reference
/// volume.  Identical volumes give +infinity.
inline double psnr(const Volume& reference, const Volume& test) {
  if (reference.shape != test.shape)
    throw std::invalid_argument("psnr: volume extents differ");
  double peak = reference.values.empty() ? 0.0 : reference.values[0];
  for (double x : reference.values) peak = std::max(peak, x);
  const double mse = pairwise_sum(reference.size(), [&](std::size_t i) {
                       const double d = reference.values[i] - test.values[i];
                       return d * d;
                     }) /
                     static_cast<double>(reference.size());
  if (mse == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(peak * peak / mse);
}

/// Fraction of exactly-zero coefficients in a pyramid.
inline double coefficient_sparsity(const WaveletPyramid& p) {
  std::size_t zeros = 0;
  for (double c : p.coefficients())
    if (c == 0.0) ++zeros;
  return static_cast<double>(zeros) / static_cast<double>(p.size());
}

namespace detail {

// Exact u^(g+1)/(g+1) antiderivative evaluation; u is dyadic so the power
// loop is exact, only the division by g+1 may round.
inline double monomial_antiderivative(double u, int g) {
  double p = 1.0;
  for (int i = 0; i < g + 1; ++i) p *= u;
  return p / static_cast<double>(g + 1);
}

}  // namespace detail

/// Integral over the level-n cell alpha of
///   prod_j (x_j - center_j)^{gamma_j} * [level-n orthonormal Haar factor_j]
/// computed per axis by closed-form antiderivatives (no references to the
/// transform), so it can serve as an independent check of coefficient
/// identities.  theta is the type bitmask; the result does not depend on
/// alpha beyond validation because the integrand is centered.
inline double moment_oracle(int s, int n, unsigned theta, const std::array<int, 3>& gamma,
                            const std::array<int, 3>& alpha) {
  if (s < 1 || s > 3) throw std::invalid_argument("moment_oracle: rank must be 1, 2 or 3");
  if (n < 0) throw std::invalid_argument("moment_oracle: level must be nonnegative");
  if (theta == 0 || theta >= pow2(s))
    throw std::invalid_argument("moment_oracle: type must be a nonzero bitmask below 2^rank");
  const double half_cell = std::ldexp(1.0, -n - 1);  // 2^-n / 2
  double result = 1.0;
  for (int j = 0; j < s; ++j) {
    if (gamma[j] < 0) throw std::invalid_argument("moment_oracle: gamma must be nonnegative");
    if (alpha[j] < 0 || alpha[j] >= static_cast<int>(pow2(n)))
      throw std::invalid_argument("moment_oracle: alpha outside level grid");
    const int g = gamma[j];
    const double upper = detail::monomial_antiderivative(half_cell, g);
    const double lower = detail::monomial_antiderivative(-half_cell, g);
    double axis;
    if ((theta >> j) & 1u) {
      // oscillating factor: +1 on the lower half-cell, -1 on the upper
      axis = -lower - upper;
    } else {
      axis = upper - lower;
    }
    result *= half_pow2(n) * axis;  // per-axis normalization 2^{n/2}
  }
  return result;
}

}  // namespace haartv

#endif  // HAARTV_METRICS_HPP
