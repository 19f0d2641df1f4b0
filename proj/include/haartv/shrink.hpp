// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 haartv contributors

#ifndef HAARTV_SHRINK_HPP
#define HAARTV_SHRINK_HPP

#include <array>
#include <bit>
#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "haartv/gradient.hpp"
#include "haartv/metrics.hpp"
#include "haartv/transform.hpp"
#include "haartv/volume.hpp"

namespace haartv {

/// LiveTV soft-thresholds single-component detail vectors per level;
/// SparseTV additionally zeroes every mixed coefficient wherever the
/// gradient vector was thresholded away; SingleLevel applies the plain
/// threshold lambda on one level only.
enum class ShrinkMode { LiveTV, SparseTV, SingleLevel };

inline const char* shrink_mode_name(ShrinkMode m) {
  switch (m) {
    case ShrinkMode::LiveTV: return "live";
    case ShrinkMode::SparseTV: return "sparse";
    case ShrinkMode::SingleLevel: return "single";
  }
  return "?";
}

/// Window bounds of -1 resolve against the pyramid: n1 becomes the finest
/// level and n0 the default window start max(0, n1 - 3).  Weights default
/// to make_level_weights over the resolved window.
struct ShrinkConfig {
  double lambda = 0.0;
  int n0 = -1;
  int n1 = -1;
  ShrinkMode mode = ShrinkMode::LiveTV;
  std::optional<LevelWeights> weights;

  static ShrinkConfig live(double lambda, int n0 = -1, int n1 = -1) {
    return {lambda, n0, n1, ShrinkMode::LiveTV, std::nullopt};
  }
  static ShrinkConfig sparse(double lambda, int n0 = -1, int n1 = -1) {
    return {lambda, n0, n1, ShrinkMode::SparseTV, std::nullopt};
  }
  static ShrinkConfig single_level(double lambda, int level) {
    return {lambda, level, level, ShrinkMode::SingleLevel, std::nullopt};
  }
};

namespace detail {

struct ResolvedShrink {
  double lambda = 0.0;
  int n0 = 0;
  int n1 = -1;  // n1 < n0 means an empty window (single-voxel pyramid)
  ShrinkMode mode = ShrinkMode::LiveTV;
  LevelWeights weights;

  bool empty() const { return n1 < n0; }

  double threshold(int n) const {
    return mode == ShrinkMode::SingleLevel ? lambda : weights.at(n) * lambda;
  }
};

inline ResolvedShrink resolve_shrink(const WaveletPyramid& p, const ShrinkConfig& cfg) {
  if (cfg.lambda < 0.0) throw std::invalid_argument("shrink: lambda must be nonnegative");
  ResolvedShrink r;
  r.lambda = cfg.lambda;
  r.mode = cfg.mode;
  const int finest = p.finest_level();
  if (finest < 0) {
    if (cfg.n0 >= 0 || cfg.n1 >= 0)
      throw std::invalid_argument("shrink: pyramid has no detail levels");
    return r;  // empty window
  }
  r.n1 = cfg.n1 >= 0 ? cfg.n1 : finest;
  r.n0 = cfg.n0 >= 0 ? cfg.n0 : std::max(0, r.n1 - 3);
  if (r.n0 > r.n1 || r.n1 > finest)
    throw std::invalid_argument("shrink: level window outside [0, " +
                                std::to_string(finest) + "]");
  if (cfg.mode == ShrinkMode::SingleLevel && r.n0 != r.n1)
    throw std::invalid_argument("shrink: single-level mode needs n0 == n1");
  if (cfg.weights) {
    if (cfg.weights->n0 != r.n0 || cfg.weights->n1 != r.n1)
      throw std::invalid_argument("shrink: weight window does not match level window");
    r.weights = *cfg.weights;
  } else {
    r.weights = make_level_weights(r.n0, r.n1);
  }
  return r;
}

// Flat coefficient position without range checks; callers guarantee bounds.
inline std::size_t coeff_index_unchecked(int s, int m, int n, unsigned type,
                                         const std::array<int, 3>& alpha) {
  std::size_t idx = 0;
  const std::size_t side = pow2(m);
  for (int j = s - 1; j >= 0; --j) {
    const std::size_t along =
        (((type >> j) & 1u) ? pow2(n) : 0) + static_cast<std::size_t>(alpha[j]);
    idx = idx * side + along;
  }
  return idx;
}

}  // namespace detail

/// Shrinks a pyramid according to the config.  lambda = 0 is the identity.
/// A gradient vector with norm <= threshold is zeroed (SparseTV then also
/// zeroes the mixed coefficients of that cell, including cells whose
/// gradient was already zero); otherwise it is scaled by 1 - threshold/norm.
/// Scaling, mixed (for LiveTV) and out-of-window coefficients pass through
/// untouched.
inline WaveletPyramid apply_shrink(const WaveletPyramid& p, const ShrinkConfig& cfg) {
  const detail::ResolvedShrink r = detail::resolve_shrink(p, cfg);
  WaveletPyramid out = p;
  if (r.lambda == 0.0 || r.empty()) return out;
  const int s = p.rank();
  const int m = p.exponent();
  const bool sparse = r.mode == ShrinkMode::SparseTV;
  std::vector<double>& c = out.coefficients();
  for (int n = r.n0; n <= r.n1; ++n) {
    const double t = r.threshold(n);
    for_each_alpha(s, n, [&](const std::array<int, 3>& alpha) {
      std::array<std::size_t, 3> idx{0, 0, 0};
      double sq = 0.0;
      for (int j = 0; j < s; ++j) {
        idx[j] = detail::coeff_index_unchecked(s, m, n, 1u << j, alpha);
        sq += c[idx[j]] * c[idx[j]];
      }
      const double norm = std::sqrt(sq);
      if (norm <= t) {
        for (int j = 0; j < s; ++j) c[idx[j]] = 0.0;
        if (sparse) {
          for (unsigned type = 1; type < pow2(s); ++type) {
            if (std::popcount(type) < 2) continue;
            c[detail::coeff_index_unchecked(s, m, n, type, alpha)] = 0.0;
          }
        }
      } else {
        const double scale = 1.0 - t / norm;
        for (int j = 0; j < s; ++j) c[idx[j]] *= scale;
      }
    });
  }
  return out;
}

inline WaveletPyramid shrink_live(const WaveletPyramid& p, double lambda, int n0 = -1,
                                  int n1 = -1) {
  return apply_shrink(p, ShrinkConfig::live(lambda, n0, n1));
}

inline WaveletPyramid shrink_sparse(const WaveletPyramid& p, double lambda, int n0 = -1,
                                    int n1 = -1) {
  return apply_shrink(p, ShrinkConfig::sparse(lambda, n0, n1));
}

inline WaveletPyramid shrink_single_level(const WaveletPyramid& p, int level,
                                          double lambda) {
  return apply_shrink(p, ShrinkConfig::single_level(lambda, level));
}

/// Max violation of the soft-threshold optimality system between an input
/// pyramid f and a candidate u:
///   - windowed gradient vectors: |d(f) - d(u) - t * d(u)/|d(u)||  where
///     d(u) != 0, and max(|d(f)| - t, 0) where d(u) = 0, t = mu_n lambda
///     (plain lambda in single-level mode);
///   - every other coefficient (scaling, mixed, out-of-window) must match.
/// Zero for u = apply_shrink(f, cfg) up to roundoff.
inline double optimality_residual(const WaveletPyramid& f, const WaveletPyramid& u,
                                  const ShrinkConfig& cfg) {
  if (f.rank() != u.rank() || f.exponent() != u.exponent())
    throw std::invalid_argument("optimality_residual: pyramid layouts differ");
  const detail::ResolvedShrink r = detail::resolve_shrink(f, cfg);
  const int s = f.rank();
  const int m = f.exponent();
  const std::vector<double>& cf = f.coefficients();
  const std::vector<double>& cu = u.coefficients();
  double res = std::abs(cf[0] - cu[0]);
  for (int n = 0; n <= f.finest_level(); ++n) {
    const bool windowed = !r.empty() && n >= r.n0 && n <= r.n1;
    const double t = windowed ? r.threshold(n) : 0.0;
    for_each_alpha(s, n, [&](const std::array<int, 3>& alpha) {
      if (windowed) {
        std::array<double, 3> df{0, 0, 0};
        std::array<double, 3> du{0, 0, 0};
        double squ = 0.0;
        for (int j = 0; j < s; ++j) {
          const std::size_t idx = detail::coeff_index_unchecked(s, m, n, 1u << j, alpha);
          df[j] = cf[idx];
          du[j] = cu[idx];
          squ += du[j] * du[j];
        }
        const double nu = std::sqrt(squ);
        double viol;
        if (nu == 0.0) {
          double sqf = 0.0;
          for (int j = 0; j < s; ++j) sqf += df[j] * df[j];
          viol = std::max(std::sqrt(sqf) - t, 0.0);
        } else {
          double sq = 0.0;
          for (int j = 0; j < s; ++j) {
            const double g = df[j] - du[j] - t * du[j] / nu;
            sq += g * g;
          }
          viol = std::sqrt(sq);
        }
        res = std::max(res, viol);
      } else {
        for (int j = 0; j < s; ++j) {
          const std::size_t idx = detail::coeff_index_unchecked(s, m, n, 1u << j, alpha);
          res = std::max(res, std::abs(cf[idx] - cu[idx]));
        }
      }
      for (unsigned type = 1; type < pow2(s); ++type) {
        if (std::popcount(type) < 2) continue;
        const std::size_t idx = detail::coeff_index_unchecked(s, m, n, type, alpha);
        res = std::max(res, std::abs(cf[idx] - cu[idx]));
      }
    });
  }
  return res;
}

/// Pads, transforms, shrinks, reconstructs and crops, returning the result
/// together with before/after metrics.  The report's wavelet TV values use
/// the resolved shrink window (single-level estimates in single mode).
inline std::pair<Volume, TvReport> denoise(const Volume& v, const ShrinkConfig& cfg) {
  // Ignore any origin metadata riding on the input: the output and the
  // report live on the caller's grid, whatever its provenance.
  Volume src = v;
  src.origin_shape.reset();
  const Volume padded = pad_to_dyadic(src);
  const WaveletPyramid pf = forward(padded);
  const detail::ResolvedShrink r = detail::resolve_shrink(pf, cfg);
  const WaveletPyramid pu = apply_shrink(pf, cfg);
  Volume out = crop_to_origin(inverse(pu));
  out.origin_shape = v.origin_shape;
  TvReport rep;
  rep.discrete_tv_in = discrete_tv(v);
  rep.discrete_tv_out = discrete_tv(out);
  if (!r.empty()) {
    if (r.mode == ShrinkMode::SingleLevel) {
      rep.wavelet_tv_in = tv_estimate_level(pf, r.n0);
      rep.wavelet_tv_out = tv_estimate_level(pu, r.n0);
    } else {
      rep.wavelet_tv_in = tv_estimate_averaged(pf, r.weights);
      rep.wavelet_tv_out = tv_estimate_averaged(pu, r.weights);
    }
    rep.window = std::pair<int, int>{r.n0, r.n1};
  }
  const double ref_norm = std::sqrt(pairwise_sum(
      v.size(), [&](std::size_t i) { return v.values[i] * v.values[i]; }));
  const double err_norm = std::sqrt(pairwise_sum(v.size(), [&](std::size_t i) {
    const double d = v.values[i] - out.values[i];
    return d * d;
  }));
  rep.rel_l2_error = ref_norm > 0.0
                         ? err_norm / ref_norm
                         : (err_norm > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
  rep.psnr_db = psnr(v, out);
  rep.sparsity = coefficient_sparsity(pu);
  rep.lambda = cfg.lambda;
  rep.mode = std::string(shrink_mode_name(cfg.mode));
  return {std::move(out), std::move(rep)};
}

}  // namespace haartv

#endif  // HAARTV_SHRINK_HPP
