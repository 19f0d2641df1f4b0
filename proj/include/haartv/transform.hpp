// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 haartv contributors

#ifndef HAARTV_TRANSFORM_HPP
#define HAARTV_TRANSFORM_HPP

#include <array>
#include <bit>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "haartv/common.hpp"
#include "haartv/volume.hpp"

namespace haartv {

/// Complete orthonormal Haar decomposition of a dyadic cube volume.
///
/// Coefficients live in a flat array of the cube's extent in the usual
/// in-place multiresolution layout: level-n detail of type `type` sits at
/// per-component index type_j * 2^n + alpha_j (component j has stride
/// 2^{m j}), and the single scaling coefficient sits at flat index 0.
///
/// `type` is a bitmask over coordinate components: bit j set means the
/// factor along component j is the oscillating Haar function, clear means
/// the box function.  Level n holds 2^n cells per component, so the finest
/// detail level is m - 1 and coefficients of level n derive from averages
/// over cells of side 2^{m-n-1} voxels.
class WaveletPyramid {
 public:
  WaveletPyramid(int s, int m, std::vector<double> coeff,
                 std::optional<std::vector<std::size_t>> origin = std::nullopt)
      : s_(s), m_(m), coeff_(std::move(coeff)), origin_shape_(std::move(origin)) {
    if (s_ < 1 || s_ > 3) throw std::invalid_argument("pyramid rank must be 1, 2 or 3");
    if (m_ < 0) throw std::invalid_argument("pyramid exponent must be nonnegative");
    std::size_t expect = 1;
    for (int j = 0; j < s_; ++j) expect *= pow2(m_);
    if (coeff_.size() != expect)
      throw std::invalid_argument("coefficient count " + std::to_string(coeff_.size()) +
                                  " does not match side 2^" + std::to_string(m_));
  }

  int rank() const { return s_; }
  int exponent() const { return m_; }

  /// Finest detail level, m - 1; a single-voxel volume has none (-1).
  int finest_level() const { return m_ - 1; }

  std::size_t side() const { return pow2(m_); }
  std::size_t size() const { return coeff_.size(); }

  const std::vector<double>& coefficients() const { return coeff_; }
  std::vector<double>& coefficients() { return coeff_; }

  const std::optional<std::vector<std::size_t>>& origin_shape() const { return origin_shape_; }

  double scaling() const { return coeff_[0]; }
  double& scaling() { return coeff_[0]; }

  /// Flat position of a detail coefficient.  alpha is in coordinate
  /// component order; entries at j >= rank are ignored.
  std::size_t coeff_index(int n, unsigned type, const std::array<int, 3>& alpha) const {
    check_level(n);
    if (type == 0 || type >= pow2(s_))
      throw std::invalid_argument("wavelet type must be a nonzero bitmask below 2^rank");
    std::size_t idx = 0;
    for (int j = s_ - 1; j >= 0; --j) {
      const int a = alpha[j];
      if (a < 0 || a >= static_cast<int>(pow2(n)))
        throw std::invalid_argument("alpha outside level grid");
      const std::size_t along = (((type >> j) & 1u) ? pow2(n) : 0) + static_cast<std::size_t>(a);
      idx = idx * side() + along;
    }
    return idx;
  }

  double detail(int n, unsigned type, const std::array<int, 3>& alpha) const {
    return coeff_[coeff_index(n, type, alpha)];
  }
  double& detail(int n, unsigned type, const std::array<int, 3>& alpha) {
    return coeff_[coeff_index(n, type, alpha)];
  }

 private:
  void check_level(int n) const {
    if (n < 0 || n > finest_level())
      throw std::invalid_argument("level " + std::to_string(n) + " outside [0, " +
                                  std::to_string(finest_level()) + "]");
  }

  int s_;
  int m_;
  std::vector<double> coeff_;
  std::optional<std::vector<std::size_t>> origin_shape_;
};

/// Number of detail cells per level, 2^{n s}.
inline std::size_t level_cell_count(int s, int n) {
  std::size_t c = 1;
  for (int j = 0; j < s; ++j) c *= pow2(n);
  return c;
}

/// Visits every alpha of a level in lexicographic order of the coordinate
/// tuple (component 0 most significant).  fn receives std::array<int,3>.
template <class F>
void for_each_alpha(int s, int n, F fn) {
  const int c = static_cast<int>(pow2(n));
  const int c1 = s > 1 ? c : 1;
  const int c2 = s > 2 ? c : 1;
  for (int a0 = 0; a0 < c; ++a0)
    for (int a1 = 0; a1 < c1; ++a1)
      for (int a2 = 0; a2 < c2; ++a2) fn(std::array<int, 3>{a0, a1, a2});
}

/// alpha of the k-th cell in the for_each_alpha order.
inline std::array<int, 3> alpha_at(int s, int n, std::size_t k) {
  const std::size_t c = pow2(n);
  std::array<int, 3> a{0, 0, 0};
  for (int j = s - 1; j >= 0; --j) {
    a[j] = static_cast<int>(k % c);
    k /= c;
  }
  return a;
}

namespace detail {

inline constexpr double inv_sqrt2 = std::numbers::sqrt2 / 2.0;

// Orthonormal pair split along one stride: pairs (2i, 2i+1) go to sums in
// [0, len/2) and differences in [len/2, len).
inline void haar_split_line(double* base, std::size_t stride, std::size_t len, double* tmp) {
  const std::size_t half = len / 2;
  for (std::size_t i = 0; i < half; ++i) {
    const double a = base[2 * i * stride];
    const double b = base[(2 * i + 1) * stride];
    tmp[i] = (a + b) * inv_sqrt2;
    tmp[half + i] = (a - b) * inv_sqrt2;
  }
  for (std::size_t i = 0; i < len; ++i) base[i * stride] = tmp[i];
}

inline void haar_merge_line(double* base, std::size_t stride, std::size_t len, double* tmp) {
  const std::size_t half = len / 2;
  for (std::size_t i = 0; i < half; ++i) {
    const double lo = base[i * stride];
    const double hi = base[(half + i) * stride];
    tmp[2 * i] = (lo + hi) * inv_sqrt2;
    tmp[2 * i + 1] = (lo - hi) * inv_sqrt2;
  }
  for (std::size_t i = 0; i < len; ++i) base[i * stride] = tmp[i];
}

// Applies fn(base_offset) for every line along storage axis `axis` of the
// sub-block [0, block)^s of a cube with the given strides.
template <class F>
void for_each_line(int s, std::size_t block, const std::array<std::size_t, 3>& stride,
                   int axis, F fn) {
  std::array<std::size_t, 2> ostride{0, 0};
  int count = 0;
  for (int k = 0; k < s; ++k)
    if (k != axis) ostride[count++] = stride[k];
  const std::size_t e0 = count > 0 ? block : 1;
  const std::size_t e1 = count > 1 ? block : 1;
  for (std::size_t o0 = 0; o0 < e0; ++o0)
    for (std::size_t o1 = 0; o1 < e1; ++o1) fn(o0 * ostride[0] + o1 * ostride[1]);
}

inline std::array<std::size_t, 3> cube_strides(int s, std::size_t side) {
  std::array<std::size_t, 3> stride{0, 0, 0};
  stride[s - 1] = 1;
  for (int k = s - 2; k >= 0; --k) stride[k] = stride[k + 1] * side;
  return stride;
}

}  // namespace detail

/// Full Haar decomposition of a dyadic cube volume down to one scaling
/// coefficient.  The volume's origin metadata, if any, rides along.
inline WaveletPyramid forward(const Volume& v) {
  if (!v.is_dyadic_cube())
    throw std::invalid_argument(
        "forward: volume extents must all equal the same power of two; "
        "apply pad_to_dyadic first");
  const int s = v.rank();
  const int m = ceil_log2(v.shape[0]);
  std::vector<double> coeff = v.values;
  const std::size_t side = pow2(m);
  const auto stride = detail::cube_strides(s, side);
  std::vector<double> tmp(side);
  for (std::size_t block = side; block >= 2; block /= 2) {
    // fastest axis first; the inverse mirrors this order
    for (int k = s - 1; k >= 0; --k) {
      detail::for_each_line(s, block, stride, k, [&](std::size_t base) {
        detail::haar_split_line(coeff.data() + base, stride[k], block, tmp.data());
      });
    }
  }
  return WaveletPyramid(s, m, std::move(coeff), v.origin_shape);
}

/// Inverse of forward; exact up to roundoff.
inline Volume inverse(const WaveletPyramid& p) {
  const int s = p.rank();
  const std::size_t side = p.side();
  std::vector<double> data = p.coefficients();
  const auto stride = detail::cube_strides(s, side);
  std::vector<double> tmp(side);
  for (std::size_t block = 2; block <= side; block *= 2) {
    for (int k = 0; k < s; ++k) {
      detail::for_each_line(s, block, stride, k, [&](std::size_t base) {
        detail::haar_merge_line(data.data() + base, stride[k], block, tmp.data());
      });
    }
  }
  Volume out(std::vector<std::size_t>(s, side), std::move(data));
  out.origin_shape = p.origin_shape();
  return out;
}

/// Raw single-component detail vectors (d over types with exactly one set
/// bit, in component order) for every alpha of a level, in for_each_alpha
/// order.  Unused vector entries are zero.
inline std::vector<std::array<double, 3>> gradient_coefficients(const WaveletPyramid& p,
                                                                int level) {
  if (level < 0 || level > p.finest_level())
    throw std::invalid_argument("gradient_coefficients: level outside [0, " +
                                std::to_string(p.finest_level()) + "]");
  const int s = p.rank();
  std::vector<std::array<double, 3>> out;
  out.reserve(level_cell_count(s, level));
  for_each_alpha(s, level, [&](const std::array<int, 3>& alpha) {
    std::array<double, 3> d{0.0, 0.0, 0.0};
    for (int j = 0; j < s; ++j) d[j] = p.detail(level, 1u << j, alpha);
    out.push_back(d);
  });
  return out;
}

}  // namespace haartv

#endif  // HAARTV_TRANSFORM_HPP
