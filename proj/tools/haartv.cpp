// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 haartv contributors

// Command-line front end.  Volumes and pyramids are addressed by a base
// path; the tool reads/writes <base>.hdr and <base>.raw.  All subcommands
// are deterministic for fixed flags and seed.

#include <array>
#include <cstdint>
#include <iostream>
#include <string>
#include <variant>
#include <vector>

#include <CLI11.hpp>

#include "haartv/haartv.hpp"

namespace {

struct BasePaths {
  std::string hdr;
  std::string raw;
};

BasePaths base_paths(const std::string& base) { return {base + ".hdr", base + ".raw"}; }

haartv::Volume load_volume_base(const std::string& base) {
  const BasePaths p = base_paths(base);
  return haartv::load_volume(p.hdr, p.raw);
}

void save_volume_base(const haartv::Volume& v, const std::string& base) {
  const BasePaths p = base_paths(base);
  haartv::save_volume(v, p.hdr, p.raw);
}

// Volume inputs are padded and decomposed on the fly so subcommands accept
// either kind of file.
haartv::WaveletPyramid load_pyramid_any(const std::string& base) {
  const BasePaths p = base_paths(base);
  if (haartv::peek_file_kind(p.hdr) == "pyramid") return haartv::load_pyramid(p.hdr, p.raw);
  return haartv::forward(haartv::pad_to_dyadic(haartv::load_volume(p.hdr, p.raw)));
}

struct PhantomArgs {
  std::string kind;
  std::vector<std::size_t> dims;
  double value = 1.0;
  std::vector<double> center;
  double sigma = 0.1;
  double radius = 0.3;
  int axis = 0;
  double edge = 0.5;
  double noise_sigma = 0.0;
  std::uint64_t seed = 0;
  std::string out;
};

void run_phantom(const PhantomArgs& a) {
  haartv::PhantomSpec spec;
  spec.kind = haartv::phantom_kind_from_name(a.kind);
  spec.value = a.value;
  for (std::size_t j = 0; j < a.center.size() && j < 3; ++j) spec.center[j] = a.center[j];
  spec.sigma = a.sigma;
  spec.radius = a.radius;
  spec.axis = a.axis;
  spec.edge = a.edge;
  haartv::Volume v = haartv::phantom(spec, a.dims);
  if (a.noise_sigma > 0.0) v = haartv::add_noise(v, a.noise_sigma, a.seed);
  save_volume_base(v, a.out);
}

void run_decompose(const std::string& in, const std::string& out) {
  const haartv::WaveletPyramid p =
      haartv::forward(haartv::pad_to_dyadic(load_volume_base(in)));
  const BasePaths o = base_paths(out);
  haartv::save_pyramid(p, o.hdr, o.raw);
}

void run_reconstruct(const std::string& in, const std::string& out, bool no_crop) {
  const BasePaths i = base_paths(in);
  const haartv::WaveletPyramid p = haartv::load_pyramid(i.hdr, i.raw);
  haartv::Volume v = haartv::inverse(p);
  if (!no_crop && v.origin_shape) v = haartv::crop_to_origin(v);
  save_volume_base(v, out);
}

void run_tv_estimate(const std::string& in, const std::optional<int>& level,
                     const std::vector<int>& window) {
  const haartv::WaveletPyramid p = load_pyramid_any(in);
  double value = 0.0;
  if (level) {
    value = haartv::tv_estimate_level(p, *level);
    std::cout << "kind: single_level\nlevel: " << *level << "\n";
  } else {
    const haartv::LevelWeights w = window.empty()
                                       ? haartv::default_level_weights(p)
                                       : haartv::make_level_weights(window[0], window[1]);
    if (!window.empty() && w.n1 > p.finest_level())
      throw std::invalid_argument("window exceeds finest level " +
                                  std::to_string(p.finest_level()));
    value = haartv::tv_estimate_averaged(p, w);
    std::cout << "kind: averaged\nwindow: " << w.n0 << " " << w.n1 << "\n";
  }
  std::cout << "tv_estimate: " << haartv::detail::format_double(value) << "\n";
}

void run_gradients(const std::string& in, const std::optional<int>& level,
                   const std::string& mode, const std::string& out) {
  const haartv::WaveletPyramid p = load_pyramid_any(in);
  const haartv::GradientMode gm =
      mode == "edge" ? haartv::GradientMode::Edge : haartv::GradientMode::Smooth;
  haartv::GradientField field{p.rank(), {}};
  if (level)
    field = haartv::renormalized_gradients(p, *level, gm);
  else if (p.finest_level() >= 0)
    field = haartv::gradient_field(p, gm, 0, p.finest_level());
  haartv::export_gradients(field, out);
}

struct DenoiseArgs {
  std::string in;
  std::string out;
  double lambda = 0.0;
  std::string mode = "live";
  std::vector<int> window;
  std::optional<int> level;
  std::string report;
};

haartv::ShrinkMode shrink_mode_from_name(const std::string& name) {
  if (name == "live") return haartv::ShrinkMode::LiveTV;
  if (name == "sparse") return haartv::ShrinkMode::SparseTV;
  return haartv::ShrinkMode::SingleLevel;
}

void run_denoise(const DenoiseArgs& a) {
  const BasePaths i = base_paths(a.in);
  if (haartv::peek_file_kind(i.hdr) != "volume")
    throw std::invalid_argument("denoise expects a volume input");
  haartv::ShrinkConfig cfg;
  cfg.lambda = a.lambda;
  cfg.mode = shrink_mode_from_name(a.mode);
  if (a.level) {
    cfg.n0 = cfg.n1 = *a.level;
  } else if (!a.window.empty()) {
    cfg.n0 = a.window[0];
    cfg.n1 = a.window[1];
  } else if (cfg.mode == haartv::ShrinkMode::SingleLevel) {
    throw std::invalid_argument("mode 'single' needs --level");
  }
  const auto [u, report] = haartv::denoise(haartv::load_volume(i.hdr, i.raw), cfg);
  save_volume_base(u, a.out);
  std::cout << haartv::format_report_table(report);
  if (!a.report.empty()) haartv::save_report(report, a.report);
}

void run_metrics(const std::string& reference, const std::string& test,
                 const std::string& report_path) {
  const haartv::Volume ref = load_volume_base(reference);
  const haartv::Volume tst = load_volume_base(test);
  haartv::TvReport r;
  r.discrete_tv_in = haartv::discrete_tv(ref);
  r.discrete_tv_out = haartv::discrete_tv(tst);
  r.psnr_db = haartv::psnr(ref, tst);
  const haartv::WaveletPyramid pr = haartv::forward(haartv::pad_to_dyadic(ref));
  const haartv::WaveletPyramid pt = haartv::forward(haartv::pad_to_dyadic(tst));
  if (pr.finest_level() >= 0) {
    const haartv::LevelWeights w = haartv::default_level_weights(pr);
    r.wavelet_tv_in = haartv::tv_estimate_averaged(pr, w);
    r.wavelet_tv_out = haartv::tv_estimate_averaged(pt, w);
    r.window = {w.n0, w.n1};
  }
  const double ref_l2 = haartv::pairwise_sum(
      ref.size(), [&](std::size_t k) { return ref.values[k] * ref.values[k]; });
  const double err_l2 = haartv::pairwise_sum(ref.size(), [&](std::size_t k) {
    const double d = tst.values[k] - ref.values[k];
    return d * d;
  });
  if (ref_l2 > 0.0)
    r.rel_l2_error = std::sqrt(err_l2 / ref_l2);
  else
    r.rel_l2_error = err_l2 > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
  r.sparsity = haartv::coefficient_sparsity(pt);
  std::cout << haartv::format_report_table(r);
  if (!report_path.empty()) haartv::save_report(r, report_path);
}

struct SliceArgs {
  std::string in;
  std::string out;
  std::optional<int> axis;
  std::optional<int> index;
  double gamma = 1.0;
};

void run_slice(const SliceArgs& a) {
  const haartv::Volume v = load_volume_base(a.in);
  if (v.rank() == 2 && !a.axis) {
    haartv::export_image(v, a.out, a.gamma);
    return;
  }
  const int axis = a.axis ? *a.axis : 2;
  if (axis < 0 || axis >= v.rank())
    throw std::invalid_argument("slice axis outside volume rank");
  const std::size_t extent = v.shape[static_cast<std::size_t>(v.rank() - 1 - axis)];
  const std::size_t index =
      a.index ? static_cast<std::size_t>(*a.index) : extent / 2;
  haartv::export_slice(v, axis, index, a.out, a.gamma);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Haar wavelet TV estimation and denoising on volumetric grids"};
  app.require_subcommand(1);

  PhantomArgs ph;
  CLI::App* phantom = app.add_subcommand("phantom", "generate a test volume");
  phantom->add_option("--kind", ph.kind, "phantom kind")
      ->required()
      ->check(CLI::IsMember({"constant", "linear", "gaussian_bump", "sphere", "step"}));
  phantom->add_option("--dims", ph.dims, "extents, slowest axis first")
      ->required()
      ->expected(1, 3);
  phantom->add_option("--value", ph.value, "amplitude / constant value");
  phantom->add_option("--center", ph.center, "center (x y z components)")->expected(1, 3);
  phantom->add_option("--sigma", ph.sigma, "gaussian bump width");
  phantom->add_option("--radius", ph.radius, "sphere radius");
  phantom->add_option("--axis", ph.axis, "coordinate component for linear/step");
  phantom->add_option("--edge", ph.edge, "step threshold");
  phantom->add_option("--noise-sigma", ph.noise_sigma, "additive Gaussian noise level");
  phantom->add_option("--seed", ph.seed, "noise seed");
  phantom->add_option("-o,--output", ph.out, "output base path")->required();
  phantom->callback([&] { run_phantom(ph); });

  std::string dc_in, dc_out;
  CLI::App* decompose = app.add_subcommand("decompose", "volume to wavelet pyramid");
  decompose->add_option("-i,--input", dc_in, "volume base path")->required();
  decompose->add_option("-o,--output", dc_out, "pyramid base path")->required();
  decompose->callback([&] { run_decompose(dc_in, dc_out); });

  std::string rc_in, rc_out;
  bool rc_no_crop = false;
  CLI::App* reconstruct = app.add_subcommand("reconstruct", "wavelet pyramid to volume");
  reconstruct->add_option("-i,--input", rc_in, "pyramid base path")->required();
  reconstruct->add_option("-o,--output", rc_out, "volume base path")->required();
  reconstruct->add_flag("--no-crop", rc_no_crop, "keep the padded cube");
  reconstruct->callback([&] { run_reconstruct(rc_in, rc_out, rc_no_crop); });

  std::string tv_in;
  std::optional<int> tv_level;
  std::vector<int> tv_window;
  CLI::App* tv = app.add_subcommand("tv-estimate", "wavelet TV estimate");
  tv->add_option("-i,--input", tv_in, "volume or pyramid base path")->required();
  CLI::Option* tv_lv = tv->add_option("--level", tv_level, "single-level estimate");
  tv->add_option("--window", tv_window, "level window n0 n1")
      ->expected(2)
      ->excludes(tv_lv);
  tv->callback([&] { run_tv_estimate(tv_in, tv_level, tv_window); });

  std::string gr_in, gr_mode = "smooth", gr_out;
  std::optional<int> gr_level;
  CLI::App* gradients = app.add_subcommand("gradients", "renormalized gradient CSV");
  gradients->add_option("-i,--input", gr_in, "volume or pyramid base path")->required();
  gradients->add_option("--level", gr_level, "restrict to one level (default: all)");
  gradients->add_option("--mode", gr_mode, "renormalization mode")
      ->check(CLI::IsMember({"smooth", "edge"}));
  gradients->add_option("-o,--output", gr_out, "CSV output path")->required();
  gradients->callback([&] { run_gradients(gr_in, gr_level, gr_mode, gr_out); });

  DenoiseArgs dn;
  CLI::App* denoise = app.add_subcommand("denoise", "shrink wavelet coefficients");
  denoise->add_option("-i,--input", dn.in, "volume base path")->required();
  denoise->add_option("-o,--output", dn.out, "volume base path")->required();
  denoise->add_option("--lambda", dn.lambda, "regularization weight")
      ->required()
      ->check(CLI::NonNegativeNumber);
  denoise->add_option("--mode", dn.mode, "shrinkage mode")
      ->check(CLI::IsMember({"live", "sparse", "single"}));
  CLI::Option* dn_lv = denoise->add_option("--level", dn.level, "single level to shrink");
  denoise->add_option("--window", dn.window, "level window n0 n1")
      ->expected(2)
      ->excludes(dn_lv);
  denoise->add_option("--report", dn.report, "write machine-readable report here");
  denoise->callback([&] { run_denoise(dn); });

  std::string mt_ref, mt_test, mt_report;
  CLI::App* metrics = app.add_subcommand("metrics", "compare two volumes");
  metrics->add_option("--reference", mt_ref, "reference volume base path")->required();
  metrics->add_option("--test", mt_test, "test volume base path")->required();
  metrics->add_option("--report", mt_report, "write machine-readable report here");
  metrics->callback([&] { run_metrics(mt_ref, mt_test, mt_report); });

  SliceArgs sl;
  CLI::App* slice = app.add_subcommand("slice", "export a grayscale PGM slice");
  slice->add_option("-i,--input", sl.in, "volume base path")->required();
  slice->add_option("-o,--output", sl.out, "PGM output path")->required();
  slice->add_option("--axis", sl.axis, "coordinate component to cut (default 2 for 3-D)");
  slice->add_option("--index", sl.index, "slice index (default: middle)");
  slice->add_option("--gamma", sl.gamma, "display gamma");
  slice->callback([&] { run_slice(sl); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const haartv::IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid argument: " << e.what() << "\n";
    return 4;
  } catch (const std::out_of_range& e) {
    std::cerr << "invalid argument: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
