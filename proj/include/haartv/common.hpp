// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 haartv contributors

#ifndef HAARTV_COMMON_HPP
#define HAARTV_COMMON_HPP

#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>

namespace haartv {

inline constexpr std::size_t pow2(int e) { return std::size_t{1} << e; }

inline constexpr bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

/// Smallest m with 2^m >= n.  n must be >= 1.
inline int ceil_log2(std::size_t n) {
  int m = 0;
  while (pow2(m) < n) ++m;
  return m;
}

/// 2^(t/2) for integer t.  The exponent is passed doubled so half-integer
/// powers stay exact up to one correctly rounded sqrt(2); even t uses ldexp
/// and is exact.
inline double half_pow2(int t) {
  if (t % 2 == 0) return std::ldexp(1.0, t / 2);
  return std::ldexp(std::numbers::sqrt2, (t - 1) / 2);
}

namespace detail {

template <class F>
double pairwise_sum_range(std::size_t lo, std::size_t hi, const F& term) {
  if (hi - lo <= 32) {
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += term(i);
    return s;
  }
  const std::size_t mid = lo + (hi - lo) / 2;
  return pairwise_sum_range(lo, mid, term) + pairwise_sum_range(mid, hi, term);
}

}  // namespace detail

/// Pairwise reduction of term(0), ..., term(count-1).  The association order
/// depends only on count, so results are reproducible bit for bit.
template <class F>
double pairwise_sum(std::size_t count, F term) {
  return detail::pairwise_sum_range(0, count, term);
}

inline double pairwise_sum(std::span<const double> xs) {
  return pairwise_sum(xs.size(), [&](std::size_t i) { return xs[i]; });
}

}  // namespace haartv

#endif  // HAARTV_COMMON_HPP
