// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 haartv contributors

#ifndef HAARTV_PHANTOM_HPP
#define HAARTV_PHANTOM_HPP

#include <array>
#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "haartv/volume.hpp"

namespace haartv {

enum class PhantomKind { Constant, Linear, GaussianBump, Sphere, Step };

/// Parameters shared by all phantom kinds; each kind reads the fields it
/// needs.  Geometry is expressed in unit-cube coordinates (see Volume for
/// the component-to-axis convention).
struct PhantomSpec {
  PhantomKind kind = PhantomKind::Constant;
  double value = 1.0;                         // amplitude / constant value
  std::array<double, 3> center{0.5, 0.5, 0.5};  // bump and sphere center
  double sigma = 0.1;                         // bump width
  double radius = 0.3;                        // sphere radius
  int axis = 0;                               // coordinate component for linear/step
  double edge = 0.5;                          // step threshold
};

inline PhantomKind phantom_kind_from_name(const std::string& name) {
  if (name == "constant") return PhantomKind::Constant;
  if (name == "linear") return PhantomKind::Linear;
  if (name == "gaussian_bump") return PhantomKind::GaussianBump;
  if (name == "sphere") return PhantomKind::Sphere;
  if (name == "step") return PhantomKind::Step;
  throw std::invalid_argument("unknown phantom kind: " + name);
}

/// Samples an analytic test pattern at voxel centers.
inline Volume phantom(const PhantomSpec& spec, const std::vector<std::size_t>& extents) {
  Volume v(extents);
  const int s = v.rank();
  if (spec.axis < 0 || spec.axis >= s)
    throw std::invalid_argument("phantom: axis outside volume rank");
  for (std::size_t f = 0; f < v.size(); ++f) {
    const std::array<double, 3> x = v.voxel_center(v.unflatten(f));
    double val = 0.0;
    switch (spec.kind) {
      case PhantomKind::Constant:
        val = spec.value;
        break;
      case PhantomKind::Linear:
        val = spec.value * x[spec.axis];
        break;
      case PhantomKind::GaussianBump: {
        double r2 = 0.0;
        for (int j = 0; j < s; ++j) {
          const double d = x[j] - spec.center[j];
          r2 += d * d;
        }
        val = spec.value * std::exp(-r2 / (2.0 * spec.sigma * spec.sigma));
        break;
      }
      case PhantomKind::Sphere: {
        double r2 = 0.0;
        for (int j = 0; j < s; ++j) {
          const double d = x[j] - spec.center[j];
          r2 += d * d;
        }
        val = r2 <= spec.radius * spec.radius ? spec.value : 0.0;
        break;
      }
      case PhantomKind::Step:
        val = x[spec.axis] >= spec.edge ? spec.value : 0.0;
        break;
    }
    v.values[f] = val;
  }
  return v;
}

/// Adds i.i.d. Gaussian noise with the given standard deviation.  A fixed
/// seed reproduces the exact sample sequence; sigma = 0 is the identity.
inline Volume add_noise(const Volume& v, double sigma, std::uint64_t seed) {
  if (sigma < 0.0) throw std::invalid_argument("add_noise: sigma must be nonnegative");
  Volume out = v;
  if (sigma == 0.0) return out;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, sigma);
  for (double& x : out.values) x += gauss(rng);
  return out;
}

}  // namespace haartv

#endif  // HAARTV_PHANTOM_HPP
