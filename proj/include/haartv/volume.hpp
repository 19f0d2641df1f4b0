// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 haartv contributors

#ifndef HAARTV_VOLUME_HPP
#define HAARTV_VOLUME_HPP

#include <array>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "haartv/common.hpp"

namespace haartv {

/// Storage index, one entry per axis, slowest axis first.
using VoxelIndex = std::array<std::size_t, 3>;

namespace detail {

inline void validate_extents(const std::vector<std::size_t>& extents) {
  if (extents.empty() || extents.size() > 3)
    throw std::invalid_argument("volume rank must be 1, 2 or 3, got " +
                                std::to_string(extents.size()));
  for (std::size_t e : extents)
    if (e == 0) throw std::invalid_argument("volume extents must be nonzero");
}

inline std::size_t extent_product(const std::vector<std::size_t>& extents) {
  std::size_t n = 1;
  for (std::size_t e : extents) n *= e;
  return n;
}

}  // namespace detail

/// Dense scalar grid in 1 to 3 dimensions, stored row-major with the last
/// axis varying fastest.
///
/// Coordinate components used throughout (wavelet type bits, gradient vector
/// entries, positions, phantom parameters) are numbered so that component 0
/// runs along the fastest storage axis: a rank-3 volume is indexed [z][y][x]
/// in storage order while points are written (x, y, z).  Voxel (i_0,...) has
/// center coordinate (i + 1/2) / extent along its axis, so the sample grid
/// always lives in the unit cube.
struct Volume {
  std::vector<std::size_t> shape;                      // extents, slowest axis first
  std::vector<double> values;                          // row-major samples
  std::optional<std::vector<std::size_t>> origin_shape;  // pre-padding extents

  Volume() = default;

  explicit Volume(std::vector<std::size_t> extents, double fill = 0.0)
      : shape(std::move(extents)) {
    detail::validate_extents(shape);
    values.assign(detail::extent_product(shape), fill);
  }

  Volume(std::vector<std::size_t> extents, std::vector<double> samples)
      : shape(std::move(extents)), values(std::move(samples)) {
    detail::validate_extents(shape);
    if (values.size() != detail::extent_product(shape))
      throw std::invalid_argument("sample count " + std::to_string(values.size()) +
                                  " does not match extents");
  }

  int rank() const { return static_cast<int>(shape.size()); }

  std::size_t size() const { return values.size(); }

  std::size_t flat(const VoxelIndex& idx) const {
    std::size_t f = 0;
    for (int k = 0; k < rank(); ++k) f = f * shape[k] + idx[k];
    return f;
  }

  double at(const VoxelIndex& idx) const { return values[checked_flat(idx)]; }
  double& at(const VoxelIndex& idx) { return values[checked_flat(idx)]; }

  /// Storage index of a flat position.
  VoxelIndex unflatten(std::size_t f) const {
    VoxelIndex idx{0, 0, 0};
    for (int k = rank() - 1; k >= 0; --k) {
      idx[k] = f % shape[k];
      f /= shape[k];
    }
    return idx;
  }

  /// Unit-cube center of a voxel, in coordinate component order
  /// (component j <-> storage axis rank-1-j).
  std::array<double, 3> voxel_center(const VoxelIndex& idx) const {
    std::array<double, 3> x{0.0, 0.0, 0.0};
    const int s = rank();
    for (int j = 0; j < s; ++j) {
      const int axis = s - 1 - j;
      x[j] = (static_cast<double>(idx[axis]) + 0.5) / static_cast<double>(shape[axis]);
    }
    return x;
  }

  bool is_dyadic_cube() const {
    if (!is_pow2(shape[0])) return false;
    for (std::size_t e : shape)
      if (e != shape[0]) return false;
    return true;
  }

 private:
  std::size_t checked_flat(const VoxelIndex& idx) const {
    for (int k = 0; k < rank(); ++k)
      if (idx[k] >= shape[k]) throw std::out_of_range("voxel index out of bounds");
    return flat(idx);
  }
};

/// Smallest m so that a cube of side 2^m contains the given extents.
inline int dyadic_exponent(const std::vector<std::size_t>& extents) {
  detail::validate_extents(extents);
  std::size_t longest = 0;
  for (std::size_t e : extents) longest = std::max(longest, e);
  return ceil_log2(longest);
}

/// Extents of the padded cube for the given extents.
inline std::vector<std::size_t> padded_extents(const std::vector<std::size_t>& extents) {
  const std::size_t side = pow2(dyadic_exponent(extents));
  return std::vector<std::size_t>(extents.size(), side);
}

/// Embeds the volume at the origin of the smallest enclosing dyadic cube,
/// filling new voxels with `fill`.  Records the original extents so
/// crop_to_origin can undo the embedding.  Already-dyadic volumes pass
/// through unchanged apart from the recorded extents; existing origin
/// metadata is preserved, which makes the operation idempotent.
inline Volume pad_to_dyadic(const Volume& v, double fill = 0.0) {
  detail::validate_extents(v.shape);
  const std::vector<std::size_t> target = padded_extents(v.shape);
  Volume out(target, fill);
  out.origin_shape = v.origin_shape ? v.origin_shape : std::optional(v.shape);
  if (target == v.shape) {
    out.values = v.values;
    return out;
  }
  for (std::size_t f = 0; f < v.size(); ++f)
    out.values[out.flat(v.unflatten(f))] = v.values[f];
  return out;
}

/// Extracts the original region recorded by pad_to_dyadic.
inline Volume crop_to_origin(const Volume& v) {
  if (!v.origin_shape)
    throw std::invalid_argument("crop_to_origin: volume carries no origin extents; "
                                "it was not produced by pad_to_dyadic");
  const std::vector<std::size_t>& target = *v.origin_shape;
  if (target.size() != v.shape.size())
    throw std::invalid_argument("crop_to_origin: origin rank does not match volume rank");
  for (std::size_t k = 0; k < target.size(); ++k)
    if (target[k] > v.shape[k])
      throw std::invalid_argument("crop_to_origin: origin extents exceed volume extents");
  Volume out(target);
  for (std::size_t f = 0; f < out.size(); ++f)
    out.values[f] = v.values[v.flat(out.unflatten(f))];
  return out;
}

}  // namespace haartv

#endif  // HAARTV_VOLUME_HPP
