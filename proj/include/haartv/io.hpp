// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 haartv contributors

#ifndef HAARTV_IO_HPP
#define HAARTV_IO_HPP

// File formats.
//
// A volume is a pair of files: a text header and a raw payload.
//
//   haartv volume 1
//   shape: 64 64 64
//   sample_type: f64
//   byte_order: little
//   layout: row_major_last_fastest
//   value_offset: 0
//   value_scale: 1
//   origin_shape: 60 60 55        (optional, pre-padding extents)
//
// `shape` lists extents slowest axis first; the payload stores samples
// row-major with the last listed axis varying fastest, little-endian, one
// of u8/u16/f32/f64.  Loading applies value = value_offset + value_scale *
// raw and widens to f64; saving inverts the map (integer types round half
// to even and clamp to the type range).
//
// A pyramid uses the same scheme:
//
//   haartv pyramid 1
//   rank: 2
//   exponent: 5
//   origin_shape: 20 17           (optional)
//
// The payload is f64 little-endian: first the scaling coefficient, then
// every detail level from 0 (coarsest) to exponent-1, within a level the
// 2^rank - 1 types in ascending bitmask order, within a type the cells in
// lexicographic order of the coordinate tuple alpha (component 0 most
// significant).

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "haartv/gradient.hpp"
#include "haartv/metrics.hpp"
#include "haartv/transform.hpp"
#include "haartv/volume.hpp"

namespace haartv {

static_assert(std::endian::native == std::endian::little,
              "raw payloads are little-endian; big-endian hosts are unsupported");

class IoError : public std::runtime_error {
 public:
  enum class Kind { FileAccess, HeaderParse, UnsupportedSampleType, SizeMismatch, Format };

  IoError(Kind kind, const std::string& msg) : std::runtime_error(msg), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

enum class SampleType { U8, U16, F32, F64 };

inline std::size_t sample_type_size(SampleType t) {
  switch (t) {
    case SampleType::U8: return 1;
    case SampleType::U16: return 2;
    case SampleType::F32: return 4;
    case SampleType::F64: return 8;
  }
  return 0;
}

inline const char* sample_type_name(SampleType t) {
  switch (t) {
    case SampleType::U8: return "u8";
    case SampleType::U16: return "u16";
    case SampleType::F32: return "f32";
    case SampleType::F64: return "f64";
  }
  return "?";
}

inline SampleType sample_type_from_name(const std::string& name) {
  if (name == "u8") return SampleType::U8;
  if (name == "u16") return SampleType::U16;
  if (name == "f32") return SampleType::F32;
  if (name == "f64") return SampleType::F64;
  throw IoError(IoError::Kind::UnsupportedSampleType, "unsupported sample_type: " + name);
}

struct VolumeHeader {
  std::vector<std::size_t> shape;
  SampleType sample_type = SampleType::F64;
  double value_offset = 0.0;
  double value_scale = 1.0;
  std::optional<std::vector<std::size_t>> origin_shape;
};

namespace detail {

inline std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

inline std::vector<std::string> split_fields(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

inline double parse_double_field(const std::string& text, int line) {
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (end == text.c_str() || *end != '\0')
    throw IoError(IoError::Kind::HeaderParse,
                  "header line " + std::to_string(line) + ": bad number '" + text + "'");
  return v;
}

inline std::vector<std::size_t> parse_extents_field(const std::string& text, int line) {
  std::vector<std::size_t> out;
  for (const std::string& tok : split_fields(text)) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(tok.c_str(), &end, 10);
    if (end == tok.c_str() || *end != '\0' || v == 0)
      throw IoError(IoError::Kind::HeaderParse,
                    "header line " + std::to_string(line) + ": bad extent '" + tok + "'");
    out.push_back(static_cast<std::size_t>(v));
  }
  if (out.empty())
    throw IoError(IoError::Kind::HeaderParse,
                  "header line " + std::to_string(line) + ": empty extent list");
  return out;
}

// Reads "key: value" lines after the magic line; rejects unknown and
// duplicate keys.  Returns key -> (value, line number).
inline std::map<std::string, std::pair<std::string, int>> parse_header_body(
    std::istream& in, const std::vector<std::string>& allowed) {
  std::map<std::string, std::pair<std::string, int>> fields;
  std::string line;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::size_t colon = line.find(':');
    if (colon == std::string::npos)
      throw IoError(IoError::Kind::HeaderParse,
                    "header line " + std::to_string(lineno) + ": expected 'key: value'");
    const std::string key = line.substr(0, colon);
    std::string value = line.substr(colon + 1);
    const std::size_t start = value.find_first_not_of(' ');
    value = start == std::string::npos ? std::string() : value.substr(start);
    bool known = false;
    for (const std::string& k : allowed) known = known || k == key;
    if (!known)
      throw IoError(IoError::Kind::HeaderParse,
                    "header line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    if (!fields.emplace(key, std::pair{value, lineno}).second)
      throw IoError(IoError::Kind::HeaderParse,
                    "header line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
  }
  return fields;
}

inline std::string read_magic_line(std::istream& in, const std::string& path) {
  std::string magic;
  if (!std::getline(in, magic))
    throw IoError(IoError::Kind::HeaderParse, path + ": empty header");
  if (!magic.empty() && magic.back() == '\r') magic.pop_back();
  return magic;
}

inline std::ifstream open_for_read(const std::string& path, std::ios::openmode mode) {
  std::ifstream in(path, mode);
  if (!in) throw IoError(IoError::Kind::FileAccess, "cannot open " + path);
  return in;
}

inline std::ofstream open_for_write(const std::string& path, std::ios::openmode mode) {
  std::ofstream out(path, mode);
  if (!out) throw IoError(IoError::Kind::FileAccess, "cannot open " + path + " for writing");
  return out;
}

inline std::vector<unsigned char> read_payload(const std::string& path,
                                               std::size_t expected_bytes,
                                               std::size_t sample_bytes,
                                               std::size_t sample_count) {
  std::ifstream in = open_for_read(path, std::ios::binary);
  in.seekg(0, std::ios::end);
  const std::size_t actual = static_cast<std::size_t>(in.tellg());
  if (actual != expected_bytes)
    throw IoError(IoError::Kind::SizeMismatch,
                  path + ": payload size mismatch: header implies " +
                      std::to_string(expected_bytes) + " bytes (" +
                      std::to_string(sample_count) + " samples of " +
                      std::to_string(sample_bytes) + " bytes), file has " +
                      std::to_string(actual) + " bytes");
  in.seekg(0, std::ios::beg);
  std::vector<unsigned char> bytes(actual);
  in.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(actual));
  if (!in) throw IoError(IoError::Kind::FileAccess, path + ": short read");
  return bytes;
}

inline double decode_sample(const unsigned char* at, SampleType t) {
  switch (t) {
    case SampleType::U8: return static_cast<double>(*at);
    case SampleType::U16: {
      std::uint16_t v;
      std::memcpy(&v, at, 2);
      return static_cast<double>(v);
    }
    case SampleType::F32: {
      float v;
      std::memcpy(&v, at, 4);
      return static_cast<double>(v);
    }
    case SampleType::F64: {
      double v;
      std::memcpy(&v, at, 8);
      return v;
    }
  }
  return 0.0;
}

inline void encode_sample(double value, SampleType t, unsigned char* at) {
  switch (t) {
    case SampleType::U8: {
      const double r = std::nearbyint(value);  // half to even
      const double c = std::min(255.0, std::max(0.0, r));
      *at = static_cast<unsigned char>(c);
      return;
    }
    case SampleType::U16: {
      const double r = std::nearbyint(value);
      const double c = std::min(65535.0, std::max(0.0, r));
      const std::uint16_t v = static_cast<std::uint16_t>(c);
      std::memcpy(at, &v, 2);
      return;
    }
    case SampleType::F32: {
      const float v = static_cast<float>(value);
      std::memcpy(at, &v, 4);
      return;
    }
    case SampleType::F64: {
      std::memcpy(at, &value, 8);
      return;
    }
  }
}

}  // namespace detail

inline VolumeHeader read_volume_header(const std::string& header_path) {
  std::ifstream in = detail::open_for_read(header_path, std::ios::in);
  const std::string magic = detail::read_magic_line(in, header_path);
  if (magic != "haartv volume 1")
    throw IoError(IoError::Kind::HeaderParse,
                  header_path + " line 1: expected 'haartv volume 1', got '" + magic + "'");
  auto fields = detail::parse_header_body(
      in, {"shape", "sample_type", "byte_order", "layout", "value_offset", "value_scale",
           "origin_shape"});
  for (const char* required : {"shape", "sample_type", "byte_order", "layout"})
    if (!fields.count(required))
      throw IoError(IoError::Kind::HeaderParse,
                    header_path + ": missing header key '" + std::string(required) + "'");
  VolumeHeader h;
  h.shape = detail::parse_extents_field(fields["shape"].first, fields["shape"].second);
  h.sample_type = sample_type_from_name(fields["sample_type"].first);
  if (fields["byte_order"].first != "little")
    throw IoError(IoError::Kind::HeaderParse,
                  header_path + ": byte_order must be 'little'");
  if (fields["layout"].first != "row_major_last_fastest")
    throw IoError(IoError::Kind::HeaderParse,
                  header_path + ": layout must be 'row_major_last_fastest'");
  if (fields.count("value_offset"))
    h.value_offset =
        detail::parse_double_field(fields["value_offset"].first, fields["value_offset"].second);
  if (fields.count("value_scale"))
    h.value_scale =
        detail::parse_double_field(fields["value_scale"].first, fields["value_scale"].second);
  if (fields.count("origin_shape"))
    h.origin_shape = detail::parse_extents_field(fields["origin_shape"].first,
                                                 fields["origin_shape"].second);
  return h;
}

inline Volume load_volume(const std::string& header_path, const std::string& data_path) {
  const VolumeHeader h = read_volume_header(header_path);
  std::size_t count = 1;
  for (std::size_t e : h.shape) count *= e;
  const std::size_t bytes = sample_type_size(h.sample_type);
  const std::vector<unsigned char> payload =
      detail::read_payload(data_path, count * bytes, bytes, count);
  Volume v(h.shape);
  // identity affine stays a bit-exact passthrough (it must not eat -0.0)
  const bool identity = h.value_offset == 0.0 && h.value_scale == 1.0;
  for (std::size_t i = 0; i < count; ++i) {
    const double raw = detail::decode_sample(payload.data() + i * bytes, h.sample_type);
    v.values[i] = identity ? raw : h.value_offset + h.value_scale * raw;
  }
  v.origin_shape = h.origin_shape;
  return v;
}

inline void save_volume(const Volume& v, const std::string& header_path,
                        const std::string& data_path,
                        SampleType sample_type = SampleType::F64, double value_offset = 0.0,
                        double value_scale = 1.0) {
  if (value_scale == 0.0)
    throw std::invalid_argument("save_volume: value_scale must be nonzero");
  {
    std::ofstream out = detail::open_for_write(header_path, std::ios::out);
    out << "haartv volume 1\n";
    out << "shape:";
    for (std::size_t e : v.shape) out << ' ' << e;
    out << "\nsample_type: " << sample_type_name(sample_type);
    out << "\nbyte_order: little\nlayout: row_major_last_fastest";
    out << "\nvalue_offset: " << detail::format_double(value_offset);
    out << "\nvalue_scale: " << detail::format_double(value_scale);
    if (v.origin_shape) {
      out << "\norigin_shape:";
      for (std::size_t e : *v.origin_shape) out << ' ' << e;
    }
    out << "\n";
    if (!out) throw IoError(IoError::Kind::FileAccess, header_path + ": write failed");
  }
  const std::size_t bytes = sample_type_size(sample_type);
  const bool identity = value_offset == 0.0 && value_scale == 1.0;
  std::vector<unsigned char> payload(v.size() * bytes);
  for (std::size_t i = 0; i < v.size(); ++i)
    detail::encode_sample(identity ? v.values[i] : (v.values[i] - value_offset) / value_scale,
                          sample_type, payload.data() + i * bytes);
  std::ofstream out = detail::open_for_write(data_path, std::ios::binary);
  out.write(reinterpret_cast<const char*>(payload.data()),
            static_cast<std::streamsize>(payload.size()));
  if (!out) throw IoError(IoError::Kind::FileAccess, data_path + ": write failed");
}

namespace detail {

// Serialized pyramid order: scaling, then (level, type, alpha) with levels
// ascending, types in ascending bitmask order, alpha lexicographic.
template <class F>
void for_each_serialized_coeff(int s, int m, F fn) {
  fn(std::size_t{0}, 0, 0u, std::array<int, 3>{0, 0, 0});  // scaling slot
  std::size_t pos = 1;
  for (int n = 0; n <= m - 1; ++n)
    for (unsigned type = 1; type < pow2(s); ++type)
      for_each_alpha(s, n, [&](const std::array<int, 3>& alpha) { fn(pos++, n, type, alpha); });
}

}  // namespace detail

inline void save_pyramid(const WaveletPyramid& p, const std::string& header_path,
                         const std::string& data_path) {
  {
    std::ofstream out = detail::open_for_write(header_path, std::ios::out);
    out << "haartv pyramid 1\n";
    out << "rank: " << p.rank() << "\nexponent: " << p.exponent();
    if (p.origin_shape()) {
      out << "\norigin_shape:";
      for (std::size_t e : *p.origin_shape()) out << ' ' << e;
    }
    out << "\n";
    if (!out) throw IoError(IoError::Kind::FileAccess, header_path + ": write failed");
  }
  std::vector<double> ordered(p.size());
  detail::for_each_serialized_coeff(
      p.rank(), p.exponent(),
      [&](std::size_t pos, int n, unsigned type, const std::array<int, 3>& alpha) {
        ordered[pos] = type == 0 ? p.scaling() : p.detail(n, type, alpha);
      });
  std::ofstream out = detail::open_for_write(data_path, std::ios::binary);
  out.write(reinterpret_cast<const char*>(ordered.data()),
            static_cast<std::streamsize>(ordered.size() * sizeof(double)));
  if (!out) throw IoError(IoError::Kind::FileAccess, data_path + ": write failed");
}

inline WaveletPyramid load_pyramid(const std::string& header_path,
                                   const std::string& data_path) {
  std::ifstream in = detail::open_for_read(header_path, std::ios::in);
  const std::string magic = detail::read_magic_line(in, header_path);
  if (magic != "haartv pyramid 1")
    throw IoError(IoError::Kind::HeaderParse,
                  header_path + " line 1: expected 'haartv pyramid 1', got '" + magic + "'");
  auto fields = detail::parse_header_body(in, {"rank", "exponent", "origin_shape"});
  for (const char* required : {"rank", "exponent"})
    if (!fields.count(required))
      throw IoError(IoError::Kind::HeaderParse,
                    header_path + ": missing header key '" + std::string(required) + "'");
  const std::vector<std::size_t> rank_v =
      detail::parse_extents_field(fields["rank"].first, fields["rank"].second);
  const double exp_d =
      detail::parse_double_field(fields["exponent"].first, fields["exponent"].second);
  const int s = static_cast<int>(rank_v[0]);
  const int m = static_cast<int>(exp_d);
  if (rank_v.size() != 1 || s < 1 || s > 3)
    throw IoError(IoError::Kind::HeaderParse, header_path + ": rank must be 1, 2 or 3");
  if (exp_d != m || m < 0 || m > 24)
    throw IoError(IoError::Kind::HeaderParse, header_path + ": bad exponent");
  std::size_t count = 1;
  for (int j = 0; j < s; ++j) count *= pow2(m);
  const std::vector<unsigned char> payload =
      detail::read_payload(data_path, count * sizeof(double), sizeof(double), count);
  std::vector<double> ordered(count);
  std::memcpy(ordered.data(), payload.data(), payload.size());
  std::optional<std::vector<std::size_t>> origin;
  if (fields.count("origin_shape"))
    origin = detail::parse_extents_field(fields["origin_shape"].first,
                                         fields["origin_shape"].second);
  WaveletPyramid p(s, m, std::vector<double>(count, 0.0), origin);
  detail::for_each_serialized_coeff(
      s, m, [&](std::size_t pos, int n, unsigned type, const std::array<int, 3>& alpha) {
        if (type == 0)
          p.scaling() = ordered[pos];
        else
          p.detail(n, type, alpha) = ordered[pos];
      });
  return p;
}

/// Which kind of haartv file a header denotes ("volume" or "pyramid").
inline std::string peek_file_kind(const std::string& header_path) {
  std::ifstream in = detail::open_for_read(header_path, std::ios::in);
  const std::string magic = detail::read_magic_line(in, header_path);
  if (magic == "haartv volume 1") return "volume";
  if (magic == "haartv pyramid 1") return "pyramid";
  throw IoError(IoError::Kind::HeaderParse, header_path + ": unrecognized header magic");
}

namespace detail {

inline void write_pgm(const std::string& path, std::size_t width, std::size_t height,
                      const std::vector<double>& pixels, double gamma) {
  if (gamma <= 0.0) throw std::invalid_argument("export_slice: gamma must be positive");
  double lo = pixels[0], hi = pixels[0];
  for (double p : pixels) {
    lo = std::min(lo, p);
    hi = std::max(hi, p);
  }
  std::ofstream out = open_for_write(path, std::ios::binary);
  out << "P5\n" << width << " " << height << "\n255\n";
  for (double p : pixels) {
    unsigned char byte;
    if (hi == lo) {
      byte = 128;  // constant image renders mid-gray
    } else {
      const double t = std::pow((p - lo) / (hi - lo), gamma);
      byte = static_cast<unsigned char>(std::lround(255.0 * t));
    }
    out.put(static_cast<char>(byte));
  }
  if (!out) throw IoError(IoError::Kind::FileAccess, path + ": write failed");
}

}  // namespace detail

/// Writes one axis-aligned slice as a binary PGM, min-max normalized with an
/// optional gamma.  `axis` is a coordinate component (0 = fastest storage
/// axis); the remaining components map to image columns and rows in
/// ascending order, so slicing a (x, y, z) volume along z yields an x-by-y
/// image.
inline void export_slice(const Volume& v, int axis, std::size_t index,
                         const std::string& path, double gamma = 1.0) {
  const int s = v.rank();
  if (s < 2) throw std::invalid_argument("export_slice: volume rank must be at least 2");
  if (axis < 0 || axis >= s) throw std::invalid_argument("export_slice: axis outside rank");
  const int cut_axis = s - 1 - axis;  // storage axis of the fixed component
  if (index >= v.shape[cut_axis])
    throw std::invalid_argument("export_slice: index outside extent");
  int col_comp = -1, row_comp = -1;  // remaining components, ascending
  for (int j = 0; j < s; ++j) {
    if (j == axis) continue;
    if (col_comp < 0)
      col_comp = j;
    else
      row_comp = j;
  }
  const int col_axis = s - 1 - col_comp;
  const std::size_t width = v.shape[col_axis];
  const std::size_t height = row_comp >= 0 ? v.shape[s - 1 - row_comp] : 1;
  std::vector<double> pixels(width * height);
  VoxelIndex idx{0, 0, 0};
  idx[cut_axis] = index;
  for (std::size_t r = 0; r < height; ++r) {
    if (row_comp >= 0) idx[s - 1 - row_comp] = r;
    for (std::size_t c = 0; c < width; ++c) {
      idx[col_axis] = c;
      pixels[r * width + c] = v.values[v.flat(idx)];
    }
  }
  detail::write_pgm(path, width, height, pixels, gamma);
}

/// Writes a whole rank-2 volume as a binary PGM (columns along component 0,
/// rows along component 1), min-max normalized like export_slice.
inline void export_image(const Volume& v, const std::string& path, double gamma = 1.0) {
  if (v.rank() != 2) throw std::invalid_argument("export_image: volume rank must be 2");
  detail::write_pgm(path, v.shape[1], v.shape[0], v.values, gamma);
}

/// Writes gradient samples as CSV with one row per sample: level, the alpha
/// tuple, the cell-center position and the gradient vector.  Rows keep the
/// field's order (levels ascending, alpha lexicographic); an empty field
/// yields just the header line.
inline void export_gradients(const GradientField& field, const std::string& path) {
  if (field.s < 1 || field.s > 3)
    throw std::invalid_argument("export_gradients: field rank must be 1, 2 or 3");
  std::ofstream out = detail::open_for_write(path, std::ios::out);
  out << "level";
  for (int j = 1; j <= field.s; ++j) out << ",alpha" << j;
  for (int j = 1; j <= field.s; ++j) out << ",position" << j;
  for (int j = 1; j <= field.s; ++j) out << ",vec" << j;
  out << "\n";
  for (const GradientSample& g : field.samples) {
    out << g.level;
    for (int j = 0; j < field.s; ++j) out << ',' << g.alpha[j];
    for (int j = 0; j < field.s; ++j) out << ',' << detail::format_double(g.position[j]);
    for (int j = 0; j < field.s; ++j) out << ',' << detail::format_double(g.vec[j]);
    out << "\n";
  }
  if (!out) throw IoError(IoError::Kind::FileAccess, path + ": write failed");
}

/// Human-readable five-row metric table.
inline std::string format_report_table(const TvReport& r) {
  char buf[128];
  std::string out;
  auto row = [&](const char* name, double value, const char* suffix) {
    std::snprintf(buf, sizeof(buf), "  %-26s %.6g%s\n", name, value, suffix);
    out += buf;
  };
  const double rel_dtv =
      r.discrete_tv_in > 0.0 ? r.discrete_tv_out / r.discrete_tv_in
                             : std::numeric_limits<double>::quiet_NaN();
  const double rel_wtv =
      r.wavelet_tv_in > 0.0 ? r.wavelet_tv_out / r.wavelet_tv_in
                            : std::numeric_limits<double>::quiet_NaN();
  out += "  metric                     value\n";
  row("relative discrete TV", rel_dtv, "");
  row("relative wavelet TV", rel_wtv, "");
  row("relative L2 error", r.rel_l2_error, "");
  row("PSNR", r.psnr_db, " dB");
  row("coefficient sparsity", r.sparsity, "");
  return out;
}

/// Machine-readable report, one "key: value" per line.
inline std::string format_report_machine(const TvReport& r) {
  std::string out = "haartv report 1\n";
  auto field = [&](const char* key, double value) {
    out += std::string(key) + ": " + detail::format_double(value) + "\n";
  };
  field("discrete_tv_in", r.discrete_tv_in);
  field("discrete_tv_out", r.discrete_tv_out);
  field("wavelet_tv_in", r.wavelet_tv_in);
  field("wavelet_tv_out", r.wavelet_tv_out);
  field("rel_l2_error", r.rel_l2_error);
  field("psnr_db", r.psnr_db);
  field("sparsity", r.sparsity);
  if (r.lambda) field("lambda", *r.lambda);
  if (r.mode) out += "mode: " + *r.mode + "\n";
  if (r.window)
    out += "window: " + std::to_string(r.window->first) + " " +
           std::to_string(r.window->second) + "\n";
  return out;
}

inline void save_report(const TvReport& r, const std::string& path) {
  std::ofstream out = detail::open_for_write(path, std::ios::out);
  out << format_report_machine(r);
  if (!out) throw IoError(IoError::Kind::FileAccess, path + ": write failed");
}

}  // namespace haartv

#endif  // HAARTV_IO_HPP
