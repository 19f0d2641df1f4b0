// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 haartv contributors
//
// Acceptance gate: one test per release criterion, each printing a single
// pass/FAIL line with the measured quantities and the pinned tolerances.

#include <sys/wait.h>

#include <algorithm>
#include <array>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <gtest/gtest.h>

#include "haartv/haartv.hpp"

namespace {

using haartv::ShrinkConfig;
using haartv::Volume;
using haartv::WaveletPyramid;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

Volume random_volume(const std::vector<std::size_t>& extents, unsigned seed) {
  Volume v(extents);
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  for (double& x : v.values) x = uni(rng);
  return v;
}

// least-squares decay order of err_k ~ C * 2^(-order * level_k)
double fitted_order(const std::vector<int>& levels, const std::vector<double>& errs) {
  const double n = static_cast<double>(levels.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t k = 0; k < levels.size(); ++k) {
    const double x = static_cast<double>(levels[k]);
    const double y = std::log2(errs[k]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return -(n * sxy - sx * sy) / (n * sxx - sx * sx);
}

TEST(Acceptance, TransformRoundTripAndEnergyConservation) {
  const auto t0 = Clock::now();
  double max_roundtrip = 0.0, max_energy = 0.0;
  for (int i = 0; i < 200; ++i) {
    const int s = 1 + i % 3;
    const int m = 1 + i % 5;
    const std::vector<std::size_t> extents(static_cast<std::size_t>(s), haartv::pow2(m));
    const Volume v = random_volume(extents, 1000u + static_cast<unsigned>(i));
    const WaveletPyramid p = haartv::forward(v);
    const Volume back = haartv::inverse(p);
    double peak = 0.0, err = 0.0;
    for (std::size_t k = 0; k < v.size(); ++k) {
      peak = std::max(peak, std::abs(v.values[k]));
      err = std::max(err, std::abs(back.values[k] - v.values[k]));
    }
    max_roundtrip = std::max(max_roundtrip, err / peak);
    const double ev = haartv::pairwise_sum(
        v.size(), [&](std::size_t k) { return v.values[k] * v.values[k]; });
    const double ec = haartv::pairwise_sum(p.size(), [&](std::size_t k) {
      return p.coefficients()[k] * p.coefficients()[k];
    });
    max_energy = std::max(max_energy, std::abs(ec - ev) / ev);
  }
  const double elapsed = seconds_since(t0);
  const bool ok = max_roundtrip <= 1e-10 && max_energy <= 1e-12 && elapsed < 5.0;
  std::printf(
      "criterion 1: %s (200 volumes: roundtrip max rel %.3g <= 1e-10, "
      "energy max rel %.3g <= 1e-12, %.2fs < 5s)\n",
      ok ? "pass" : "FAIL", max_roundtrip, max_energy, elapsed);
  std::fflush(stdout);
  EXPECT_LE(max_roundtrip, 1e-10);
  EXPECT_LE(max_energy, 1e-12);
  EXPECT_LT(elapsed, 5.0);
}

TEST(Acceptance, MomentOracleMatchesClosedForm) {
  const auto t0 = Clock::now();
  double max_err = 0.0;
  long checked = 0;
  for (int s = 1; s <= 3; ++s) {
    for (int n = 0; n <= 3; ++n) {
      std::vector<std::array<int, 3>> alphas = {{0, 0, 0}};
      if (n > 0) {
        std::array<int, 3> corner{0, 0, 0};
        for (int j = 0; j < s; ++j) corner[static_cast<std::size_t>(j)] = haartv::pow2(n) - 1;
        alphas.push_back(corner);
        alphas.push_back({1, 0, 0});
      }
      for (unsigned theta = 1; theta < haartv::pow2(s); ++theta) {
        const int weight = std::popcount(theta);
        for (int g0 = 0; g0 <= 2; ++g0)
          for (int g1 = 0; g1 <= (s > 1 ? 2 : 0); ++g1)
            for (int g2 = 0; g2 <= (s > 2 ? 2 : 0); ++g2) {
              // the closed form covers monomial degrees up to the number of
              // wavelet factors; beyond that the moments need not vanish
              if (g0 + g1 + g2 > weight) continue;
              const std::array<int, 3> gamma{g0, g1, g2};
              bool matches = true;
              for (int j = 0; j < s; ++j)
                matches = matches &&
                          gamma[static_cast<std::size_t>(j)] ==
                              static_cast<int>((theta >> j) & 1u);
              const double expected =
                  matches ? (weight % 2 == 0 ? 1.0 : -1.0) *
                                haartv::half_pow2(-2 * (n + 2) * weight - n * s)
                          : 0.0;
              for (const std::array<int, 3>& alpha : alphas) {
                const double got = haartv::moment_oracle(s, n, theta, gamma, alpha);
                max_err = std::max(max_err, std::abs(got - expected));
                ++checked;
              }
            }
      }
    }
  }
  const double elapsed = seconds_since(t0);
  const bool ok = max_err <= 1e-12 && elapsed < 1.0;
  std::printf(
      "criterion 2: %s (%ld moment identities: max abs err %.3g <= 1e-12, "
      "%.2fs < 1s)\n",
      ok ? "pass" : "FAIL", checked, max_err, elapsed);
  std::fflush(stdout);
  EXPECT_LE(max_err, 1e-12);
  EXPECT_LT(elapsed, 1.0);
}

constexpr double kBumpSigma = 0.1;

struct BumpData {
  Volume volume;
  WaveletPyramid pyramid;
  double build_seconds;
};

const BumpData& bump_data() {
  static const BumpData data = [] {
    const auto t0 = Clock::now();
    haartv::PhantomSpec spec;
    spec.kind = haartv::PhantomKind::GaussianBump;
    spec.sigma = kBumpSigma;
    Volume v = haartv::phantom(spec, {1024, 1024});
    WaveletPyramid p = haartv::forward(v);
    const double secs = seconds_since(t0);
    return BumpData{std::move(v), std::move(p), secs};
  }();
  return data;
}

TEST(Acceptance, SmoothGradientsSaturateWithLevel) {
  const BumpData& bump = bump_data();
  const auto t0 = Clock::now();
  std::vector<int> levels;
  std::vector<double> errs;
  for (int n = 4; n <= 8; ++n) {
    const haartv::GradientField field =
        haartv::renormalized_gradients(bump.pyramid, n, haartv::GradientMode::Smooth);
    double worst = 0.0;
    for (const haartv::GradientSample& g : field.samples) {
      const double dx = g.position[0] - 0.5, dy = g.position[1] - 0.5;
      const double f = std::exp(-(dx * dx + dy * dy) / (2.0 * kBumpSigma * kBumpSigma));
      const double gx = -dx / (kBumpSigma * kBumpSigma) * f;
      const double gy = -dy / (kBumpSigma * kBumpSigma) * f;
      worst = std::max(worst, std::hypot(g.vec[0] - gx, g.vec[1] - gy));
    }
    levels.push_back(n);
    errs.push_back(worst);
  }
  const double order = fitted_order(levels, errs);
  const double elapsed = bump.build_seconds + seconds_since(t0);
  const bool ok = order >= 0.6 && order <= 1.4 && elapsed < 10.0;
  std::printf(
      "criterion 3: %s (gradient err %.3g at level 4 down to %.3g at level 8, "
      "order %.2f in [0.6, 1.4], %.2fs < 10s)\n",
      ok ? "pass" : "FAIL", errs.front(), errs.back(), order, elapsed);
  std::fflush(stdout);
  EXPECT_GE(order, 0.6);
  EXPECT_LE(order, 1.4);
  EXPECT_LT(elapsed, 10.0);
}

TEST(Acceptance, TvEstimateConvergesToDiscreteTv) {
  const BumpData& bump = bump_data();
  const auto t0 = Clock::now();
  const double dtv = haartv::discrete_tv(bump.volume);
  std::vector<int> levels;
  std::vector<double> errs;
  for (int n = 4; n <= 8; ++n) {
    levels.push_back(n);
    errs.push_back(std::abs(haartv::tv_estimate_level(bump.pyramid, n) - dtv));
  }
  const double order = fitted_order(levels, errs);
  const double top_err = std::abs(haartv::tv_estimate_level(bump.pyramid, 9) - dtv);
  const double avg = haartv::tv_estimate_averaged(bump.pyramid, haartv::make_level_weights(7, 9));
  const double avg_err = std::abs(avg - dtv);
  const double elapsed = bump.build_seconds + seconds_since(t0);
  const bool ok = order >= 0.6 && avg_err <= 2.0 * top_err && elapsed < 10.0;
  std::printf(
      "criterion 4: %s (estimate err %.3g at level 4 down to %.3g at level 8, "
      "order %.2f >= 0.6; averaged err %.3g <= 2x top-level err %.3g, %.2fs < 10s)\n",
      ok ? "pass" : "FAIL", errs.front(), errs.back(), order, avg_err, top_err, elapsed);
  std::fflush(stdout);
  EXPECT_GE(order, 0.6);
  EXPECT_LE(avg_err, 2.0 * top_err);
  EXPECT_LT(elapsed, 10.0);
}

TEST(Acceptance, ShrinkageSatisfiesOptimalityConditions) {
  const auto t0 = Clock::now();
  double max_ratio = 0.0;
  for (int i = 0; i < 100; ++i) {
    const int s = 1 + i % 3;
    const int m = 1 + (i / 3) % 4;
    const double scale = std::pow(10.0, i % 7 - 3);
    std::size_t count = 1;
    for (int j = 0; j < s; ++j) count *= haartv::pow2(m);
    std::vector<double> coeff(count);
    std::mt19937 rng(3000u + static_cast<unsigned>(i));
    std::normal_distribution<double> gauss(0.0, scale);
    for (double& c : coeff) c = gauss(rng);
    const WaveletPyramid f(s, m, std::move(coeff));
    double peak = 0.0;
    for (double c : f.coefficients()) peak = std::max(peak, std::abs(c));
    for (const double k : {0.1, 1.0, 10.0}) {
      const ShrinkConfig cfg = i % 2 == 0
                                   ? ShrinkConfig::live(k * peak)
                                   : ShrinkConfig::live(k * peak, 0, f.finest_level());
      const WaveletPyramid u = haartv::apply_shrink(f, cfg);
      max_ratio = std::max(max_ratio, haartv::optimality_residual(f, u, cfg) / peak);
    }
  }
  const double elapsed = seconds_since(t0);
  const bool ok = max_ratio <= 1e-10 && elapsed < 5.0;
  std::printf(
      "criterion 5: %s (300 shrink solves: optimality residual max %.3g of scale "
      "<= 1e-10, %.2fs < 5s)\n",
      ok ? "pass" : "FAIL", max_ratio, elapsed);
  std::fflush(stdout);
  EXPECT_LE(max_ratio, 1e-10);
  EXPECT_LT(elapsed, 5.0);
}

struct SweepEntry {
  double lambda = 0.0;
  haartv::TvReport live;
  haartv::TvReport sparse;
  double psnr_live_clean = 0.0;
  double psnr_sparse_clean = 0.0;
};

struct SphereSweep {
  double psnr_noisy_clean = 0.0;
  std::array<SweepEntry, 5> entries;
  std::string sample_table;
  double build_seconds = 0.0;
};

const SphereSweep& sphere_sweep() {
  static const SphereSweep sweep = [] {
    const auto t0 = Clock::now();
    haartv::PhantomSpec spec;
    spec.kind = haartv::PhantomKind::Sphere;
    const Volume clean = haartv::phantom(spec, {128, 128, 128});
    const Volume noisy = haartv::add_noise(clean, 0.05, 20260823ull);
    SphereSweep out;
    out.psnr_noisy_clean = haartv::psnr(clean, noisy);
    const std::array<double, 5> lambdas{0.01, 0.1, 1.0, 10.0, 100.0};
    for (std::size_t k = 0; k < lambdas.size(); ++k) {
      SweepEntry e;
      e.lambda = lambdas[k];
      auto [live_vol, live_rep] =
          haartv::denoise(noisy, ShrinkConfig::live(lambdas[k]));
      auto [sparse_vol, sparse_rep] =
          haartv::denoise(noisy, ShrinkConfig::sparse(lambdas[k]));
      e.live = live_rep;
      e.sparse = sparse_rep;
      e.psnr_live_clean = haartv::psnr(clean, live_vol);
      e.psnr_sparse_clean = haartv::psnr(clean, sparse_vol);
      out.entries[k] = e;
    }
    out.sample_table = haartv::format_report_table(out.entries[2].live);
    out.build_seconds = seconds_since(t0);
    return out;
  }();
  return sweep;
}

TEST(Acceptance, LambdaSweepReproducesReportStructure) {
  const SphereSweep& sweep = sphere_sweep();
  const long rows = std::count(sweep.sample_table.begin(), sweep.sample_table.end(), '\n');
  bool monotone = true;
  double worst_gap = 0.0;
  const double dtv_slack = 1e-6 * sweep.entries[0].sparse.discrete_tv_in;
  const auto check_step = [&](const haartv::TvReport& a, const haartv::TvReport& b) {
    worst_gap = std::max(worst_gap, b.wavelet_tv_out - a.wavelet_tv_out);
    if (b.wavelet_tv_out > a.wavelet_tv_out * (1.0 + 1e-9) + 1e-12) monotone = false;
    if (b.sparsity < a.sparsity - 1e-12) monotone = false;
  };
  for (std::size_t k = 0; k < sweep.entries.size(); ++k) {
    const SweepEntry& e = sweep.entries[k];
    if (e.sparse.sparsity < e.live.sparsity - 1e-12) monotone = false;
    if (k == 0) continue;
    const SweepEntry& prev = sweep.entries[k - 1];
    check_step(prev.live, e.live);
    check_step(prev.sparse, e.sparse);
    if (e.sparse.discrete_tv_out > prev.sparse.discrete_tv_out + dtv_slack)
      monotone = false;
  }
  const double elapsed = sweep.build_seconds;
  const bool ok = rows == 6 && monotone && elapsed < 60.0;
  std::printf(
      "criterion 6: %s (5 metric rows per report; wavelet TV nonincreasing "
      "(worst gap %.3g), sparsity nondecreasing, sparse >= live sparsity at "
      "every lambda, sparse discrete TV nonincreasing, %.2fs < 60s)\n",
      ok ? "pass" : "FAIL", worst_gap, elapsed);
  std::fflush(stdout);
  EXPECT_EQ(rows, 6);
  EXPECT_TRUE(monotone);
  EXPECT_LT(elapsed, 60.0);
}

TEST(Acceptance, SomeLambdaImprovesPsnr) {
  const SphereSweep& sweep = sphere_sweep();
  double best_live = -1.0, best_sparse = -1.0;
  for (const SweepEntry& e : sweep.entries) {
    best_live = std::max(best_live, e.psnr_live_clean);
    best_sparse = std::max(best_sparse, e.psnr_sparse_clean);
  }
  const bool ok =
      best_live > sweep.psnr_noisy_clean && best_sparse > sweep.psnr_noisy_clean;
  std::printf(
      "criterion 7: %s (noisy %.2f dB; best denoised %.2f dB live, %.2f dB "
      "sparse)\n",
      ok ? "pass" : "FAIL", sweep.psnr_noisy_clean, best_live, best_sparse);
  std::fflush(stdout);
  EXPECT_GT(best_live, sweep.psnr_noisy_clean);
  EXPECT_GT(best_sparse, sweep.psnr_noisy_clean);
}

TEST(Acceptance, GradientFieldsOnQuadraticAndStep) {
  // part 1: smooth-mode gradients of x^2 + y^2 against (2x, 2y)
  Volume quad({512, 512});
  for (std::size_t iy = 0; iy < 512; ++iy)
    for (std::size_t ix = 0; ix < 512; ++ix) {
      const std::array<double, 3> c = quad.voxel_center({iy, ix, 0});
      quad.values[iy * 512 + ix] = c[0] * c[0] + c[1] * c[1];
    }
  const WaveletPyramid pq = haartv::forward(quad);
  double quad_err = 0.0;
  bool quad_ok = true;
  for (int n = 2; n <= 7; ++n) {
    const haartv::GradientField field =
        haartv::renormalized_gradients(pq, n, haartv::GradientMode::Smooth);
    double worst = 0.0;
    for (const haartv::GradientSample& g : field.samples)
      worst = std::max(worst, std::hypot(g.vec[0] - 2.0 * g.position[0],
                                         g.vec[1] - 2.0 * g.position[1]));
    quad_err = std::max(quad_err, worst);
    quad_ok = quad_ok && worst <= 6.0 * std::ldexp(1.0, -n);
  }

  // part 2: axis-aligned binary step with the jump centered in one cell of
  // each probed level; the strongest edge-mode vector then lands on that
  // level with a level-independent length, while smooth mode scales by 2^n
  double edge_min = std::numeric_limits<double>::infinity();
  double edge_max = 0.0;
  double transverse = 0.0;
  bool levels_ok = true, smooth_exact = true;
  for (int n = 0; n <= 4; ++n) {
    const int alpha = n == 0 ? 0 : static_cast<int>(haartv::pow2(n - 1));
    haartv::PhantomSpec spec;
    spec.kind = haartv::PhantomKind::Step;
    spec.axis = 0;
    spec.edge = (2.0 * alpha + 1.0) * std::ldexp(1.0, -n - 1);
    const Volume v = haartv::phantom(spec, {64, 64});
    const WaveletPyramid p = haartv::forward(v);
    double strongest = 0.0;
    int strongest_level = -1;
    double at_n_edge = 0.0, at_n_smooth = 0.0;
    for (int level = 0; level <= p.finest_level(); ++level) {
      const haartv::GradientField ef =
          haartv::renormalized_gradients(p, level, haartv::GradientMode::Edge);
      double level_max = 0.0;
      for (const haartv::GradientSample& g : ef.samples) {
        level_max = std::max(level_max, std::hypot(g.vec[0], g.vec[1]));
        transverse = std::max(transverse, std::abs(g.vec[1]));
      }
      if (level_max > strongest) {
        strongest = level_max;
        strongest_level = level;
      }
      if (level == n) {
        at_n_edge = level_max;
        const haartv::GradientField sf =
            haartv::renormalized_gradients(p, level, haartv::GradientMode::Smooth);
        for (const haartv::GradientSample& g : sf.samples)
          at_n_smooth = std::max(at_n_smooth, std::hypot(g.vec[0], g.vec[1]));
      }
    }
    levels_ok = levels_ok && strongest_level == n;
    smooth_exact = smooth_exact && at_n_smooth == std::ldexp(at_n_edge, n);
    edge_min = std::min(edge_min, strongest);
    edge_max = std::max(edge_max, strongest);
  }
  const double edge_spread = edge_max - edge_min;
  const bool ok = quad_ok && levels_ok && smooth_exact && edge_spread <= 1e-10 &&
                  transverse <= 1e-12;
  std::printf(
      "criterion 8: %s (quadratic gradient err max %.3g within 6*2^-n; edge "
      "length spread %.3g <= 1e-10 across levels 0..4, strongest level "
      "matches the jump cell: %s; smooth = 2^n * edge exactly: %s; "
      "transverse max %.3g <= 1e-12)\n",
      ok ? "pass" : "FAIL", quad_err, edge_spread, levels_ok ? "yes" : "no",
      smooth_exact ? "yes" : "no", transverse);
  std::fflush(stdout);
  EXPECT_TRUE(quad_ok);
  EXPECT_TRUE(levels_ok);
  EXPECT_TRUE(smooth_exact);
  EXPECT_LE(edge_spread, 1e-10);
  EXPECT_LE(transverse, 1e-12);
}

int run_command(const std::string& cmd) {
  const int rc = std::system(cmd.c_str());
  return rc == -1 ? -1 : (WIFEXITED(rc) ? WEXITSTATUS(rc) : -1);
}

std::vector<unsigned char> file_bytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  EXPECT_TRUE(in.good()) << path;
  return std::vector<unsigned char>(std::istreambuf_iterator<char>(in),
                                    std::istreambuf_iterator<char>());
}

TEST(Acceptance, CliPipelineIsBitReproducible) {
  const std::filesystem::path base =
      std::filesystem::temp_directory_path() / "haartv_acceptance_cli";
  std::filesystem::remove_all(base);
  bool all_zero = true;
  for (const char* leaf : {"a", "b"}) {
    const std::string dir = (base / leaf).string();
    std::filesystem::create_directories(dir);
    const std::string cli = HAARTV_CLI_PATH;
    const std::vector<std::string> cmds = {
        cli + " phantom --kind sphere --dims 32 32 32 --noise-sigma 0.05 --seed 7 -o " +
            dir + "/vol",
        cli + " denoise -i " + dir + "/vol -o " + dir +
            "/den --lambda 0.8 --mode live --report " + dir + "/den_report.txt",
        cli + " metrics --reference " + dir + "/vol --test " + dir + "/den --report " +
            dir + "/metrics_report.txt",
        cli + " slice -i " + dir + "/den -o " + dir + "/slice.pgm",
    };
    for (const std::string& cmd : cmds) {
      const int status = run_command(cmd + " >" + dir + "/log.txt 2>&1");
      EXPECT_EQ(status, 0) << cmd;
      all_zero = all_zero && status == 0;
    }
  }
  bool identical = true;
  int compared = 0;
  for (const char* name : {"vol.hdr", "vol.raw", "den.hdr", "den.raw",
                           "den_report.txt", "metrics_report.txt", "slice.pgm"}) {
    const std::vector<unsigned char> a = file_bytes((base / "a" / name).string());
    const std::vector<unsigned char> b = file_bytes((base / "b" / name).string());
    if (a != b) identical = false;
    ++compared;
  }
  const bool ok = all_zero && identical;
  std::printf(
      "criterion 9: %s (4 commands exit 0 in two fresh directories; %d output "
      "files bit-identical across runs)\n",
      ok ? "pass" : "FAIL", compared);
  std::fflush(stdout);
  EXPECT_TRUE(all_zero);
  EXPECT_TRUE(identical);
}

}  // namespace
