// Copyright 2026 the maskenc authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include "maskenc/codebook.hpp"
#include "maskenc/errors.hpp"
#include "maskenc/mask.hpp"

namespace maskenc {

// Codebook container ("MEC1"): fixed little-endian header
//   magic[4] u16 version u16 flags u32 m u32 N i32 class_id
// followed by float64 arrays mean[m*m], scale[m*m] (flag bit 0),
// eigenvalues[N], projection rows [N*m*m], and an explicit reconstruction
// matrix [m*m*N] only when it is not derivable (flag bit 2). Flag bit 1
// records eigen whitening.

namespace detail {

constexpr std::uint16_t kFlagScale = 1;
constexpr std::uint16_t kFlagWhiten = 2;
constexpr std::uint16_t kFlagExplicitRecon = 4;

class LeWriter {
 public:
  explicit LeWriter(std::ostream& os) : os_(os) {}

  void bytes(const void* p, std::size_t n) {
    os_.write(static_cast<const char*>(p), static_cast<std::streamsize>(n));
  }
  void u16(std::uint16_t v) { put(v); }
  void u32(std::uint32_t v) { put(v); }
  void i32(std::int32_t v) { put(static_cast<std::uint32_t>(v)); }
  void u64(std::uint64_t v) { put(v); }
  void i64(std::int64_t v) { put(static_cast<std::uint64_t>(v)); }
  void f64(double v) { put(std::bit_cast<std::uint64_t>(v)); }
  void f64_array(const std::vector<double>& a) {
    for (double v : a) f64(v);
  }

 private:
  template <typename U>
  void put(U v) {
    char buf[sizeof(U)];
    for (std::size_t i = 0; i < sizeof(U); ++i)
      buf[i] = static_cast<char>((v >> (8 * i)) & 0xff);
    os_.write(buf, sizeof(U));
  }
  std::ostream& os_;
};

class LeReader {
 public:
  explicit LeReader(std::istream& is, std::string name)
      : is_(is), name_(std::move(name)) {}

  void bytes(void* p, std::size_t n) {
    is_.read(static_cast<char*>(p), static_cast<std::streamsize>(n));
    if (static_cast<std::size_t>(is_.gcount()) != n)
      throw format_error("truncated file: " + name_);
  }
  std::uint16_t u16() { return get<std::uint16_t>(); }
  std::uint32_t u32() { return get<std::uint32_t>(); }
  std::int32_t i32() { return static_cast<std::int32_t>(get<std::uint32_t>()); }
  std::uint64_t u64() { return get<std::uint64_t>(); }
  std::int64_t i64() { return static_cast<std::int64_t>(get<std::uint64_t>()); }
  double f64() { return std::bit_cast<double>(get<std::uint64_t>()); }
  void f64_array(std::vector<double>& a, std::size_t n) {
    a.resize(n);
    for (std::size_t i = 0; i < n; ++i) a[i] = f64();
  }
  bool at_eof() {
    is_.peek();
    return is_.eof();
  }

 private:
  template <typename U>
  U get() {
    unsigned char buf[sizeof(U)];
    bytes(buf, sizeof(U));
    U v = 0;
    for (std::size_t i = 0; i < sizeof(U); ++i)
      v |= static_cast<U>(buf[i]) << (8 * i);
    return v;
  }
  std::istream& is_;
  std::string name_;
};

}  // namespace detail

inline void save_codebook(const Codebook& cb, const std::string& path) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw error("cannot write " + path);
  detail::LeWriter w(os);
  const int dim = cb.dim();

  const std::vector<double> derived = detail::derive_reconstruction(
      cb.projection, cb.eigenvalues, cb.whiten, dim, cb.components);
  const bool explicit_recon = derived != cb.reconstruction;

  std::uint16_t flags = 0;
  if (!cb.scale.empty()) flags |= detail::kFlagScale;
  if (cb.whiten == WhitenMode::eigen) flags |= detail::kFlagWhiten;
  if (explicit_recon) flags |= detail::kFlagExplicitRecon;

  w.bytes("MEC1", 4);
  w.u16(1);
  w.u16(flags);
  w.u32(static_cast<std::uint32_t>(cb.m));
  w.u32(static_cast<std::uint32_t>(cb.components));
  w.i32(cb.class_id ? *cb.class_id : -1);
  w.f64_array(cb.mean);
  if (!cb.scale.empty()) w.f64_array(cb.scale);
  w.f64_array(cb.eigenvalues);
  w.f64_array(cb.projection);
  if (explicit_recon) w.f64_array(cb.reconstruction);
  if (!os) throw error("write failed: " + path);
}

inline Codebook load_codebook(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw error("cannot open " + path);
  detail::LeReader r(is, path);

  char magic[4];
  r.bytes(magic, 4);
  if (std::memcmp(magic, "MEC1", 4) != 0)
    throw format_error("bad magic in " + path);
  const std::uint16_t version = r.u16();
  if (version != 1)
    throw format_error("unsupported codebook version " +
                       std::to_string(version));
  const std::uint16_t flags = r.u16();
  Codebook cb;
  cb.m = static_cast<int>(r.u32());
  cb.components = static_cast<int>(r.u32());
  const std::int32_t class_id = r.i32();
  if (class_id >= 0) cb.class_id = class_id;
  cb.whiten = (flags & detail::kFlagWhiten) ? WhitenMode::eigen
                                            : WhitenMode::none;
  if (cb.m < 1 || cb.components < 1 || cb.components > cb.dim())
    throw format_error("implausible codebook dimensions in " + path);

  const std::size_t dim = static_cast<std::size_t>(cb.dim());
  r.f64_array(cb.mean, dim);
  if (flags & detail::kFlagScale) r.f64_array(cb.scale, dim);
  r.f64_array(cb.eigenvalues, static_cast<std::size_t>(cb.components));
  r.f64_array(cb.projection, dim * cb.components);
  if (flags & detail::kFlagExplicitRecon)
    r.f64_array(cb.reconstruction, dim * cb.components);
  else
    cb.reconstruction = detail::derive_reconstruction(
        cb.projection, cb.eigenvalues, cb.whiten, cb.dim(), cb.components);
  if (!r.at_eof()) throw format_error("trailing bytes in " + path);
  return cb;
}

/// One encoded instance: enough geometry to paste the reconstruction back
/// at the original image size.
struct CodeRecord {
  std::int64_t key = 0;
  int image_height = 0;
  int image_width = 0;
  BBox box;
  MaskCode code;

  bool operator==(const CodeRecord&) const = default;
};

struct CodesFile {
  int m = 0;
  int components = 0;
  std::vector<CodeRecord> records;
};

// Codes container ("MEV1"): same header discipline as the codebook file,
// then per record: i64 key, u32 image dims, i32 box, f64 values[N].

inline void save_codes(const CodesFile& codes, const std::string& path) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw error("cannot write " + path);
  detail::LeWriter w(os);
  w.bytes("MEV1", 4);
  w.u16(1);
  w.u16(0);
  w.u32(static_cast<std::uint32_t>(codes.m));
  w.u32(static_cast<std::uint32_t>(codes.components));
  w.u64(codes.records.size());
  for (const auto& rec : codes.records) {
    if (static_cast<int>(rec.code.values.size()) != codes.components)
      throw validation_error("save_codes: record " + std::to_string(rec.key) +
                             " has wrong code length");
    w.i64(rec.key);
    w.u32(static_cast<std::uint32_t>(rec.image_height));
    w.u32(static_cast<std::uint32_t>(rec.image_width));
    w.i32(rec.box.x0);
    w.i32(rec.box.y0);
    w.i32(rec.box.w);
    w.i32(rec.box.h);
    w.f64_array(rec.code.values);
  }
  if (!os) throw error("write failed: " + path);
}

inline CodesFile load_codes(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw error("cannot open " + path);
  detail::LeReader r(is, path);
  char magic[4];
  r.bytes(magic, 4);
  if (std::memcmp(magic, "MEV1", 4) != 0)
    throw format_error("bad magic in " + path);
  const std::uint16_t version = r.u16();
  if (version != 1)
    throw format_error("unsupported codes version " + std::to_string(version));
  r.u16();  // flags, none defined
  CodesFile codes;
  codes.m = static_cast<int>(r.u32());
  codes.components = static_cast<int>(r.u32());
  const std::uint64_t count = r.u64();
  codes.records.resize(count);
  for (auto& rec : codes.records) {
    rec.key = r.i64();
    rec.image_height = static_cast<int>(r.u32());
    rec.image_width = static_cast<int>(r.u32());
    rec.box.x0 = r.i32();
    rec.box.y0 = r.i32();
    rec.box.w = r.i32();
    rec.box.h = r.i32();
    r.f64_array(rec.code.values, static_cast<std::size_t>(codes.components));
  }
  if (!r.at_eof()) throw format_error("trailing bytes in " + path);
  return codes;
}

}  // namespace maskenc
