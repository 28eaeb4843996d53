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

#include <cstdint>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <json.hpp>

#include "maskenc/errors.hpp"
#include "maskenc/eval.hpp"
#include "maskenc/mask.hpp"
#include "maskenc/polygon.hpp"
#include "maskenc/resample.hpp"
#include "maskenc/rle.hpp"
#include "maskenc/synth.hpp"

namespace maskenc {

/// One dataset annotation, segmentation kept in its source form.
struct InstanceRecord {
  std::int64_t id = 0;
  std::int64_t image_id = 0;
  int image_height = 0;
  int image_width = 0;
  int category_id = 0;
  bool iscrowd = false;
  std::vector<Polygon> polygons;            // either this ...
  std::optional<RunLengthEncoding> rle;     // ... or this is set
  std::optional<std::array<double, 4>> bbox;  // annotation box, reference only
  std::optional<double> area;
};

struct LoadFilters {
  std::optional<std::set<int>> categories;
  std::optional<std::uint64_t> max_count;
  bool include_crowd = false;
};

struct LoadStats {
  std::uint64_t images = 0;
  std::uint64_t emitted = 0;
  std::uint64_t crowd_skipped = 0;
  std::uint64_t filtered_out = 0;
  std::uint64_t record_errors = 0;
  std::vector<std::string> error_messages;  // capped
};

namespace detail {

// SAX handler that streams elements of one top-level array ("images" or
// "annotations") as json objects, one at a time; everything else in the
// file is skipped without building a DOM.
class CocoSectionStreamer : public nlohmann::json_sax<nlohmann::json> {
 public:
  using json = nlohmann::json;

  CocoSectionStreamer(std::string section,
                      std::function<bool(json&&)> on_element)
      : section_(std::move(section)), on_element_(std::move(on_element)) {}

  bool aborted() const { return aborted_; }

  bool null() override { return value(nullptr); }
  bool boolean(bool v) override { return value(v); }
  bool number_integer(number_integer_t v) override { return value(v); }
  bool number_unsigned(number_unsigned_t v) override { return value(v); }
  bool number_float(number_float_t v, const string_t&) override {
    return value(v);
  }
  bool string(string_t& v) override { return value(v); }
  bool binary(binary_t& v) override { return value(std::move(v)); }

  bool start_object(std::size_t) override {
    if (collecting_) {
      push(json::object());
      return true;
    }
    if (in_section_array_ && depth_ == 2) {
      collecting_ = true;
      dom_ = json::object();
      stack_ = {&dom_};
    }
    ++depth_;
    return true;
  }

  bool key(string_t& k) override {
    if (collecting_)
      pending_key_ = k;
    else if (depth_ == 1)
      root_key_ = k;
    return true;
  }

  bool end_object() override {
    if (collecting_) {
      stack_.pop_back();
      if (stack_.empty()) {
        collecting_ = false;
        --depth_;
        if (!on_element_(std::move(dom_))) {
          aborted_ = true;
          return false;
        }
        return true;
      }
      return true;
    }
    --depth_;
    return true;
  }

  bool start_array(std::size_t) override {
    if (collecting_) {
      push(json::array());
      return true;
    }
    if (depth_ == 1 && root_key_ == section_) in_section_array_ = true;
    ++depth_;
    return true;
  }

  bool end_array() override {
    if (collecting_) {
      stack_.pop_back();
      return true;
    }
    --depth_;
    if (depth_ == 1) in_section_array_ = false;
    return true;
  }

  bool parse_error(std::size_t position, const std::string&,
                   const nlohmann::detail::exception& ex) override {
    throw maskenc::parse_error(std::string("malformed JSON: ") + ex.what(),
                               position);
  }

 private:
  template <typename V>
  bool value(V&& v) {
    if (!collecting_) return true;
    attach(json(std::forward<V>(v)));
    return true;
  }

  void push(json&& container) {
    json& slot = attach(std::move(container));
    stack_.push_back(&slot);
  }

  json& attach(json&& v) {
    json* top = stack_.back();
    if (top->is_object()) return (*top)[pending_key_] = std::move(v);
    top->push_back(std::move(v));
    return top->back();
  }

  std::string section_;
  std::function<bool(json&&)> on_element_;
  int depth_ = 0;
  std::string root_key_;
  bool in_section_array_ = false;
  bool collecting_ = false;
  bool aborted_ = false;
  json dom_;
  std::vector<json*> stack_;
  std::string pending_key_;
};

inline void stream_section(const std::string& path, const std::string& section,
                           const std::function<bool(nlohmann::json&&)>& fn) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw error("cannot open " + path);
  CocoSectionStreamer handler(section, fn);
  const bool ok = nlohmann::json::sax_parse(in, &handler);
  if (!ok && !handler.aborted())
    throw maskenc::parse_error("malformed JSON in " + path, 0);
}

inline void note_error(LoadStats& stats, std::string msg) {
  ++stats.record_errors;
  if (stats.error_messages.size() < 100)
    stats.error_messages.push_back(std::move(msg));
}

}  // namespace detail

/// Stream instance records from a COCO-format annotations file. The file
/// is scanned twice (image dimensions first, then annotations), keeping
/// peak memory independent of the annotation count. Records with
/// unrecognized segmentation shapes are collected as record-level errors,
/// not fatal ones.
inline LoadStats load_coco(const std::string& path, const LoadFilters& filters,
                           const std::function<void(InstanceRecord&&)>& sink) {
  using json = nlohmann::json;
  LoadStats stats;

  std::unordered_map<std::int64_t, std::pair<int, int>> image_dims;
  detail::stream_section(path, "images", [&](json&& im) {
    if (!im.contains("id") || !im.contains("height") || !im.contains("width"))
      detail::note_error(stats, "image entry missing id/height/width");
    else
      image_dims[im["id"].get<std::int64_t>()] = {
          im["height"].get<int>(), im["width"].get<int>()};
    return true;
  });
  stats.images = image_dims.size();

  detail::stream_section(path, "annotations", [&](json&& an) {
    if (filters.max_count && stats.emitted >= *filters.max_count)
      return false;
    InstanceRecord rec;
    try {
      rec.id = an.value("id", std::int64_t{0});
      if (!an.contains("image_id"))
        throw error("annotation missing image_id");
      rec.image_id = an["image_id"].get<std::int64_t>();
      const auto dims = image_dims.find(rec.image_id);
      if (dims == image_dims.end())
        throw error("unknown image_id " + std::to_string(rec.image_id));
      rec.image_height = dims->second.first;
      rec.image_width = dims->second.second;
      rec.category_id = an.value("category_id", 0);
      if (an.contains("iscrowd")) {
        const auto& ic = an["iscrowd"];
        rec.iscrowd = ic.is_boolean() ? ic.get<bool>() : ic.get<int>() != 0;
      }
      if (an.contains("bbox") && an["bbox"].is_array() &&
          an["bbox"].size() == 4) {
        std::array<double, 4> b{};
        for (int i = 0; i < 4; ++i) b[i] = an["bbox"][i].get<double>();
        rec.bbox = b;
      }
      if (an.contains("area")) rec.area = an["area"].get<double>();

      if (!an.contains("segmentation"))
        throw error("annotation missing segmentation");
      const json& seg = an["segmentation"];
      if (seg.is_array() && !seg.empty()) {
        for (const auto& poly : seg) {
          if (!poly.is_array() || poly.size() < 6 || poly.size() % 2 != 0)
            throw error("bad polygon in segmentation");
          Polygon p;
          p.reserve(poly.size());
          for (const auto& v : poly) p.push_back(v.get<double>());
          rec.polygons.push_back(std::move(p));
        }
      } else if (seg.is_object() && seg.contains("counts")) {
        int h = rec.image_height, w = rec.image_width;
        if (seg.contains("size") && seg["size"].is_array() &&
            seg["size"].size() == 2) {
          h = seg["size"][0].get<int>();
          w = seg["size"][1].get<int>();
        }
        const json& counts = seg["counts"];
        if (counts.is_string()) {
          rec.rle = rle_from_string(counts.get<std::string>(), h, w);
        } else if (counts.is_array()) {
          RunLengthEncoding rle{h, w, {}};
          for (const auto& c : counts)
            rle.counts.push_back(c.get<std::uint32_t>());
          rec.rle = rle;
        } else {
          throw error("unknown RLE counts type");
        }
      } else {
        throw error("unknown segmentation shape");
      }
    } catch (const std::exception& ex) {
      detail::note_error(stats, "annotation " + std::to_string(rec.id) + ": " +
                                    ex.what());
      return true;
    }

    if (rec.iscrowd && !filters.include_crowd) {
      ++stats.crowd_skipped;
      return true;
    }
    if (filters.categories && !filters.categories->count(rec.category_id)) {
      ++stats.filtered_out;
      return true;
    }
    ++stats.emitted;
    sink(std::move(rec));
    return true;
  });
  return stats;
}

/// record_to_grid result: a grid, or the reason the record was excluded.
struct GridOutcome {
  std::optional<GridMask> grid;
  std::string exclusion;  // nonempty iff grid is absent
};

/// Rasterize/decode a record, crop to the mask's tight box and resample
/// to an m-by-m grid. Degenerate records come back as exclusions.
inline GridOutcome record_to_grid(const InstanceRecord& rec, int m) {
  BinaryMask mask;
  if (rec.rle) {
    if (rec.rle->height != rec.image_height ||
        rec.rle->width != rec.image_width)
      return {std::nullopt, "rle_size_mismatch"};
    mask = rle_decode(*rec.rle);
  } else {
    mask = polygon_rasterize(rec.polygons, rec.image_height, rec.image_width);
  }
  if (mask.area() == 0) return {std::nullopt, "empty"};
  const GridMask grid = crop_resize(mask, tight_bbox(mask), m);
  if (grid.area() == 0) return {std::nullopt, "empty_after_resize"};
  return {grid, ""};
}

/// Exclusion accounting for one corpus pass: records in = grids out +
/// exclusions, exactly.
struct CorpusStats {
  std::uint64_t records = 0;
  std::uint64_t grids = 0;
  std::map<std::string, std::uint64_t> exclusions;

  std::uint64_t excluded() const {
    std::uint64_t n = 0;
    for (const auto& [_, v] : exclusions) n += v;
    return n;
  }
};

/// Replayable corpus over a COCO annotations file. Each replay re-streams
/// the file; `stats` (when given) is rewritten on every pass.
inline CorpusSource coco_corpus_source(std::string path, LoadFilters filters,
                                       int m, CorpusStats* stats = nullptr) {
  return [path = std::move(path), filters = std::move(filters), m,
          stats](const GridSink& sink) {
    CorpusStats local;
    load_coco(path, filters, [&](InstanceRecord&& rec) {
      ++local.records;
      GridOutcome out = record_to_grid(rec, m);
      if (!out.grid) {
        ++local.exclusions[out.exclusion];
        return;
      }
      ++local.grids;
      sink(GridRecord{std::move(*out.grid), rec.category_id, rec.id});
    });
    if (stats) *stats = std::move(local);
  };
}

/// Serialize a synthetic corpus as COCO-compatible instances JSON:
/// polygons for simply-connected families, compressed RLE for donut and
/// two-blob. Byte-deterministic for a fixed spec.
inline void write_coco_json(const CorpusSpec& spec, std::ostream& os) {
  using json = nlohmann::json;
  const int S = spec.image_size;

  os << "{\"images\":[";
  bool first = true;
  for (ShapeFamily family : spec.families)
    for (int i = 0; i < spec.count_per_family; ++i) {
      const SynthInstance inst = synth_instance(spec, family, i);
      if (!first) os << ',';
      first = false;
      os << json{{"id", inst.id}, {"height", S}, {"width", S}}.dump();
    }

  os << "],\"annotations\":[";
  first = true;
  for (ShapeFamily family : spec.families)
    for (int i = 0; i < spec.count_per_family; ++i) {
      const SynthInstance inst = synth_instance(spec, family, i);
      const BinaryMask mask = instance_mask(inst);
      const BBox box = tight_bbox(mask);
      json an{{"id", inst.id},
              {"image_id", inst.id},
              {"category_id", inst.category_id},
              {"iscrowd", 0},
              {"bbox", {box.x0, box.y0, box.w, box.h}},
              {"area", mask.area()}};
      if (inst.rle) {
        an["segmentation"] = {{"size", {S, S}},
                              {"counts", rle_to_string(*inst.rle)}};
      } else {
        an["segmentation"] = inst.polygons;
      }
      if (!first) os << ',';
      first = false;
      os << an.dump();
    }

  os << "],\"categories\":[";
  first = true;
  for (ShapeFamily family : spec.families) {
    if (!first) os << ',';
    first = false;
    os << json{{"id", family_category(family)},
               {"name", family_name(family)}}
              .dump();
  }
  os << "]}";
}

}  // namespace maskenc
