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

#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "maskenc/eval.hpp"
#include "maskenc/mask.hpp"
#include "maskenc/polygon.hpp"
#include "maskenc/resample.hpp"
#include "maskenc/rle.hpp"

namespace maskenc {

/// Desk-scale stand-in for an annotated dataset. Fixing the seed fixes
/// every emitted shape, independent of platform and thread count.
enum class ShapeFamily { blob, disk, bar, donut, two_blob, crescent };

inline const char* family_name(ShapeFamily f) {
  switch (f) {
    case ShapeFamily::blob: return "blob";
    case ShapeFamily::disk: return "disk";
    case ShapeFamily::bar: return "bar";
    case ShapeFamily::donut: return "donut";
    case ShapeFamily::two_blob: return "two-blob";
    case ShapeFamily::crescent: return "crescent";
  }
  throw std::invalid_argument("unknown shape family");
}

inline ShapeFamily parse_family(const std::string& s) {
  for (ShapeFamily f : {ShapeFamily::blob, ShapeFamily::disk, ShapeFamily::bar,
                        ShapeFamily::donut, ShapeFamily::two_blob,
                        ShapeFamily::crescent})
    if (s == family_name(f)) return f;
  throw std::invalid_argument("unknown shape family: " + s);
}

/// Canonical category id (1-based, COCO style), stable across subsets.
inline int family_category(ShapeFamily f) { return static_cast<int>(f) + 1; }

struct CorpusSpec {
  std::vector<ShapeFamily> families;
  int count_per_family = 1;
  int image_size = 64;
  int m = 28;
  std::uint64_t seed = 1;
};

namespace detail {

// splitmix64: tiny, portable, fully specified. std:: distributions are
// implementation-defined, which would break frozen regression values.
struct SplitMix64 {
  std::uint64_t state;

  explicit SplitMix64(std::uint64_t s) : state(s) {}

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
};

inline SplitMix64 instance_rng(std::uint64_t seed, ShapeFamily family,
                               int index) {
  SplitMix64 mix(seed ^ (0x51ed2701a3c5e291ull *
                         static_cast<std::uint64_t>(family_category(family))));
  mix.state ^= 0x3c79ac492ba7b653ull * static_cast<std::uint64_t>(index + 1);
  mix.next();
  return mix;
}

inline Polygon regular_poly(double cx, double cy, double r, int n,
                            double phase) {
  Polygon p;
  p.reserve(2 * n);
  for (int i = 0; i < n; ++i) {
    const double t = phase + 2.0 * std::numbers::pi * i / n;
    p.push_back(cx + r * std::cos(t));
    p.push_back(cy + r * std::sin(t));
  }
  return p;
}

// analytic pixel disk (pixel centers at +0.5)
inline void draw_disk(BinaryMask& mask, double cx, double cy, double r) {
  for (int row = 0; row < mask.height; ++row)
    for (int col = 0; col < mask.width; ++col) {
      const double dx = col + 0.5 - cx, dy = row + 0.5 - cy;
      if (dx * dx + dy * dy <= r * r) mask.at(row, col) = 1;
    }
}

}  // namespace detail

/// One generated instance: its segmentation in image coordinates, as
/// either polygons (simply-connected families) or an RLE (donut and
/// two-blob, which a single polygon boundary cannot represent).
struct SynthInstance {
  ShapeFamily family = ShapeFamily::blob;
  int category_id = 0;
  int image_size = 0;
  std::int64_t id = 0;
  std::vector<Polygon> polygons;
  std::optional<RunLengthEncoding> rle;
};

inline SynthInstance synth_instance(const CorpusSpec& spec, ShapeFamily family,
                                    int index) {
  if (spec.image_size < 48)
    throw std::invalid_argument("synth: image size must be >= 48");
  detail::SplitMix64 rng = detail::instance_rng(spec.seed, family, index);
  const double S = spec.image_size;

  SynthInstance inst;
  inst.family = family;
  inst.category_id = family_category(family);
  inst.image_size = spec.image_size;
  inst.id = static_cast<std::int64_t>(family_category(family)) * 1000000 +
            index + 1;

  const double cx = S * rng.uniform(0.42, 0.58);
  const double cy = S * rng.uniform(0.42, 0.58);
  const double margin = std::min({cx, cy, S - cx, S - cy}) - 2.0;

  switch (family) {
    case ShapeFamily::disk: {
      const double r = std::min(S * rng.uniform(0.18, 0.32), margin);
      inst.polygons = {detail::regular_poly(cx, cy, r, 64,
                                            rng.uniform(0, 0.2))};
      break;
    }
    case ShapeFamily::blob: {
      const double base = std::min(S * rng.uniform(0.16, 0.28), margin / 1.3);
      double amp[3], phase[3];
      for (int k = 0; k < 3; ++k) {
        amp[k] = rng.uniform(0.04, 0.22);
        phase[k] = rng.uniform(0, 2 * std::numbers::pi);
      }
      Polygon p;
      for (int i = 0; i < 48; ++i) {
        const double t = 2.0 * std::numbers::pi * i / 48;
        double r = base;
        for (int k = 0; k < 3; ++k)
          r += base * amp[k] * std::cos((k + 2) * t + phase[k]);
        r = std::max(r, 0.25 * base);
        p.push_back(cx + r * std::cos(t));
        p.push_back(cy + r * std::sin(t));
      }
      inst.polygons = {p};
      break;
    }
    case ShapeFamily::bar: {
      const double len = std::min(S * rng.uniform(0.5, 0.8), 2 * margin);
      const double wid = S * rng.uniform(0.08, 0.18);
      const double th = rng.uniform(0, std::numbers::pi);
      const double dx[4] = {-len / 2, len / 2, len / 2, -len / 2};
      const double dy[4] = {-wid / 2, -wid / 2, wid / 2, wid / 2};
      Polygon p;
      for (int i = 0; i < 4; ++i) {
        p.push_back(cx + dx[i] * std::cos(th) - dy[i] * std::sin(th));
        p.push_back(cy + dx[i] * std::sin(th) + dy[i] * std::cos(th));
      }
      inst.polygons = {p};
      break;
    }
    case ShapeFamily::donut: {
      const double r_out = std::min(S * rng.uniform(0.22, 0.33), margin);
      const double r_in = r_out * rng.uniform(0.55, 0.8);
      BinaryMask mask = BinaryMask::zeros(spec.image_size, spec.image_size);
      for (int row = 0; row < mask.height; ++row)
        for (int col = 0; col < mask.width; ++col) {
          const double dx = col + 0.5 - cx, dy = row + 0.5 - cy;
          const double d2 = dx * dx + dy * dy;
          if (d2 <= r_out * r_out && d2 > r_in * r_in) mask.at(row, col) = 1;
        }
      inst.rle = rle_encode(mask);
      break;
    }
    case ShapeFamily::two_blob: {
      // wide separation keeps the components disjoint after resampling
      const double r1 = S * rng.uniform(0.09, 0.14);
      const double r2 = S * rng.uniform(0.09, 0.14);
      const double gap = (r1 + r2) * rng.uniform(1.35, 1.6);
      const double th = rng.uniform(0, std::numbers::pi);
      const double half = gap / 2;
      const double mx = S * 0.5 + S * rng.uniform(-0.03, 0.03);
      const double my = S * 0.5 + S * rng.uniform(-0.03, 0.03);
      BinaryMask mask = BinaryMask::zeros(spec.image_size, spec.image_size);
      detail::draw_disk(mask, mx + half * std::cos(th),
                        my + half * std::sin(th), r1);
      detail::draw_disk(mask, mx - half * std::cos(th),
                        my - half * std::sin(th), r2);
      inst.rle = rle_encode(mask);
      break;
    }
    case ShapeFamily::crescent: {
      const double r = std::min(S * rng.uniform(0.26, 0.36), margin);
      const double rb = r * rng.uniform(0.7, 1.0);
      // the circles' crossing angle is sampled directly; keeping it away
      // from 0 and pi keeps the cusps wide, so the two sampled arcs never
      // interleave and the polygon stays simple
      const double phi = rng.uniform(0.7, 2.1);
      const double d =
          std::sqrt(r * r + rb * rb - 2 * r * rb * std::cos(phi));
      const double th = rng.uniform(0, 2 * std::numbers::pi);
      // circle intersection in bite-local frame (bite center at +x)
      const double a = (d * d + r * r - rb * rb) / (2 * d);
      const double h = std::sqrt(std::max(r * r - a * a, 0.0));
      const double alpha = std::atan2(h, a);
      Polygon p;
      const auto emit = [&](double x, double y) {
        p.push_back(cx + x * std::cos(th) - y * std::sin(th));
        p.push_back(cy + x * std::sin(th) + y * std::cos(th));
      };
      for (int i = 0; i <= 96; ++i) {  // outer arc, the long way around
        const double t = alpha + (2 * std::numbers::pi - 2 * alpha) * i / 96;
        emit(r * std::cos(t), r * std::sin(t));
      }
      const double beta = std::atan2(h, a - d);
      for (int i = 1; i < 96; ++i) {  // bite arc back, passing the near side
        const double t =
            -beta - (2 * std::numbers::pi - 2 * beta) * i / 96.0;
        emit(d + rb * std::cos(t), rb * std::sin(t));
      }
      inst.polygons = {p};
      break;
    }
  }
  return inst;
}

/// Materialize the full-resolution mask of an instance through the same
/// rasterize/decode path the dataset loader uses.
inline BinaryMask instance_mask(const SynthInstance& inst) {
  if (inst.rle) return rle_decode(*inst.rle);
  return polygon_rasterize(inst.polygons, inst.image_size, inst.image_size);
}

/// Stream the corpus as resampled grid masks with category labels.
inline void synth_corpus(const CorpusSpec& spec, const GridSink& sink) {
  if (spec.count_per_family < 1)
    throw std::invalid_argument("synth: count must be >= 1");
  for (ShapeFamily family : spec.families)
    for (int i = 0; i < spec.count_per_family; ++i) {
      const SynthInstance inst = synth_instance(spec, family, i);
      const BinaryMask mask = instance_mask(inst);
      const GridMask grid = crop_resize(mask, tight_bbox(mask), spec.m);
      if (grid.area() == 0)
        throw error("synth: degenerate instance " + std::to_string(inst.id));
      sink(GridRecord{grid, inst.category_id, inst.id});
    }
}

/// Replayable corpus source over the generated grids.
inline CorpusSource synth_corpus_source(CorpusSpec spec) {
  return [spec](const GridSink& sink) { synth_corpus(spec, sink); };
}

}  // namespace maskenc
