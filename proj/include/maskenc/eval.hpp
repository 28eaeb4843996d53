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

#include <algorithm>
#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "maskenc/codebook.hpp"
#include "maskenc/errors.hpp"
#include "maskenc/mask.hpp"
#include "maskenc/parallel.hpp"

namespace maskenc {

/// One evaluation-ready corpus entry.
struct GridRecord {
  GridMask grid;
  int category = 0;
  std::int64_t key = 0;
};

using GridSink = std::function<void(GridRecord&&)>;

/// A replayable corpus: invoking it streams every record, in a fixed
/// order, into the sink. Evaluation routines may replay it several times.
using CorpusSource = std::function<void(const GridSink&)>;

/// Wrap an in-memory corpus as a replayable source.
inline CorpusSource memory_corpus(std::vector<GridRecord> records) {
  auto shared = std::make_shared<std::vector<GridRecord>>(std::move(records));
  return [shared](const GridSink& sink) {
    for (const auto& rec : *shared) sink(GridRecord{rec});
  };
}

/// Encode/decode roundtrip of one codec.
using Codec = std::function<GridMask(const GridMask&)>;

struct NamedCodec {
  std::string name;
  Codec roundtrip;
};

inline Codec pca_codec(const Codebook& cb, double threshold = 0.5) {
  auto shared = std::make_shared<Codebook>(cb);
  return [shared, threshold](const GridMask& g) {
    return decode(*shared, encode(*shared, g), threshold);
  };
}

namespace detail {

// Stream the corpus in chunks; per chunk, map records to per-index slots
// in parallel, then hand the chunk to `reduce` sequentially. Results are
// independent of the thread count.
template <typename Slot>
inline std::uint64_t chunked_map_reduce(
    const CorpusSource& corpus, int threads,
    const std::function<Slot(const GridRecord&)>& map_fn,
    const std::function<void(const GridRecord&, const Slot&)>& reduce_fn,
    std::size_t chunk_size = 8192) {
  std::vector<GridRecord> chunk;
  std::vector<Slot> slots;
  chunk.reserve(chunk_size);
  std::uint64_t total = 0;
  auto flush = [&] {
    if (chunk.empty()) return;
    slots.resize(chunk.size());
    parallel_for_index(chunk.size(), threads,
                       [&](int, std::size_t i) { slots[i] = map_fn(chunk[i]); });
    for (std::size_t i = 0; i < chunk.size(); ++i)
      reduce_fn(chunk[i], slots[i]);
    total += chunk.size();
    chunk.clear();
  };
  corpus([&](GridRecord&& rec) {
    chunk.push_back(std::move(rec));
    if (chunk.size() >= chunk_size) flush();
  });
  flush();
  return total;
}

}  // namespace detail

/// Mean IoU between corpus masks and their codec roundtrips.
inline double corpus_miou(const CorpusSource& corpus, const Codec& codec,
                          int threads = 1) {
  double sum = 0.0;
  const std::uint64_t n = detail::chunked_map_reduce<double>(
      corpus, threads,
      [&](const GridRecord& rec) { return iou(rec.grid, codec(rec.grid)); },
      [&](const GridRecord&, const double& v) { sum += v; });
  if (n == 0) throw std::invalid_argument("corpus_miou: empty corpus");
  return sum / static_cast<double>(n);
}

/// Reconstruction-quality curve over component counts.
struct ReconCurvePoint {
  int n = 0;
  double miou = 0.0;
  double err = 0.0;  // 1 - miou
};

struct ReconCurve {
  std::vector<ReconCurvePoint> points;
};

/// Evaluate mean roundtrip IoU at every component count in `ns` with a
/// single corpus pass, reusing one fitted codebook. Equivalent to running
/// corpus_miou with truncate(codebook, n) for each n.
inline ReconCurve recon_curve(const CorpusSource& corpus,
                              const Codebook& codebook,
                              const std::vector<int>& ns, int threads = 1,
                              double threshold = 0.5) {
  if (ns.empty()) throw std::invalid_argument("recon_curve: no component counts");
  for (std::size_t i = 0; i < ns.size(); ++i) {
    if (ns[i] < 1 || ns[i] > codebook.components)
      throw std::invalid_argument("recon_curve: component count out of range");
    if (i > 0 && ns[i] <= ns[i - 1])
      throw std::invalid_argument(
          "recon_curve: component counts must be strictly increasing");
  }
  const Codebook cb = truncate(codebook, ns.back());
  const int dim = cb.dim();
  const int nmax = cb.components;

  std::vector<double> iou_sums(ns.size(), 0.0);
  const std::uint64_t count =
      detail::chunked_map_reduce<std::vector<double>>(
          corpus, threads,
          [&](const GridRecord& rec) {
            // prefix reconstruction: components enter in eigenvalue order,
            // so every ns[j] checkpoint matches decode(truncate(cb, ns[j]))
            const MaskCode code = encode(cb, rec.grid);
            std::vector<double> y(dim, 0.0);
            std::vector<double> ious(ns.size());
            GridMask recon = GridMask::zeros(cb.m);
            std::size_t j = 0;
            for (int k = 0; k < nmax && j < ns.size(); ++k) {
              const double vk = code.values[k];
              for (int i = 0; i < dim; ++i)
                y[i] += cb.reconstruction[static_cast<std::size_t>(i) * nmax +
                                          k] *
                        vk;
              if (k + 1 == ns[j]) {
                for (int i = 0; i < dim; ++i) {
                  double u = y[i];
                  if (!cb.scale.empty()) u /= cb.scale[i];
                  u += cb.mean[i];
                  recon.data[i] = u >= threshold ? 1 : 0;
                }
                ious[j++] = iou(rec.grid, recon);
              }
            }
            return ious;
          },
          [&](const GridRecord&, const std::vector<double>& ious) {
            for (std::size_t j = 0; j < ns.size(); ++j) iou_sums[j] += ious[j];
          });
  if (count == 0) throw std::invalid_argument("recon_curve: empty corpus");

  ReconCurve curve;
  for (std::size_t j = 0; j < ns.size(); ++j) {
    const double miou = iou_sums[j] / static_cast<double>(count);
    curve.points.push_back({ns[j], miou, 1.0 - miou});
  }
  return curve;
}

/// Per-codec corpus statistics over identical masks.
struct CodecStats {
  std::string name;
  std::uint64_t count = 0;
  double mean_iou = 0.0;
  double median_iou = 0.0;
  std::array<std::uint64_t, 20> histogram{};  // IoU bins [0,0.05), ...
  std::vector<std::pair<int, double>> per_category_mean;  // sorted by id
};

struct CodecReport {
  std::vector<CodecStats> codecs;
};

inline CodecReport compare_codecs(const CorpusSource& corpus,
                                  std::vector<NamedCodec> codecs,
                                  int threads = 1,
                                  bool per_category = false) {
  if (codecs.empty())
    throw std::invalid_argument("compare_codecs: no codecs");
  std::sort(codecs.begin(), codecs.end(),
            [](const NamedCodec& a, const NamedCodec& b) {
              return a.name < b.name;
            });
  const std::size_t nc = codecs.size();
  std::vector<std::vector<double>> all_ious(nc);
  std::vector<std::map<int, std::pair<std::uint64_t, double>>> cat(nc);

  const std::uint64_t count =
      detail::chunked_map_reduce<std::vector<double>>(
          corpus, threads,
          [&](const GridRecord& rec) {
            std::vector<double> ious(nc);
            for (std::size_t c = 0; c < nc; ++c)
              ious[c] = iou(rec.grid, codecs[c].roundtrip(rec.grid));
            return ious;
          },
          [&](const GridRecord& rec, const std::vector<double>& ious) {
            for (std::size_t c = 0; c < nc; ++c) {
              all_ious[c].push_back(ious[c]);
              if (per_category) {
                auto& entry = cat[c][rec.category];
                entry.first += 1;
                entry.second += ious[c];
              }
            }
          });
  if (count == 0) throw std::invalid_argument("compare_codecs: empty corpus");

  CodecReport report;
  for (std::size_t c = 0; c < nc; ++c) {
    CodecStats stats;
    stats.name = codecs[c].name;
    stats.count = count;
    auto& ious = all_ious[c];
    double sum = 0.0;
    for (double v : ious) {
      sum += v;
      int bin = static_cast<int>(v * 20.0);
      if (bin > 19) bin = 19;
      if (bin < 0) bin = 0;
      ++stats.histogram[static_cast<std::size_t>(bin)];
    }
    stats.mean_iou = sum / static_cast<double>(count);
    std::vector<double> sorted = ious;
    std::sort(sorted.begin(), sorted.end());
    stats.median_iou =
        count % 2 == 1
            ? sorted[count / 2]
            : 0.5 * (sorted[count / 2 - 1] + sorted[count / 2]);
    for (const auto& [id, acc] : cat[c])
      stats.per_category_mean.emplace_back(
          id, acc.second / static_cast<double>(acc.first));
    report.codecs.push_back(std::move(stats));
  }
  return report;
}

/// Class-agnostic vs class-specific reconstruction quality at equal N.
struct ClassSplitRow {
  int category = 0;
  std::uint64_t count = 0;
  double agnostic_miou = 0.0;
  double specific_miou = 0.0;
};

struct ClassSplitResult {
  double agnostic_miou = 0.0;
  double specific_miou = 0.0;
  std::vector<ClassSplitRow> per_category;  // sorted by category id
};

inline ClassSplitResult class_split_eval(
    const CorpusSource& corpus, const Codebook& agnostic,
    const std::map<int, Codebook>& specific, int components, int threads = 1) {
  const Codebook ag = truncate(agnostic, components);
  std::map<int, Codebook> sp;
  for (const auto& [id, cb] : specific) sp.emplace(id, truncate(cb, components));

  std::map<int, std::pair<std::uint64_t, std::pair<double, double>>> rows;
  double ag_sum = 0.0, sp_sum = 0.0;
  const std::uint64_t count =
      detail::chunked_map_reduce<std::pair<double, double>>(
          corpus, threads,
          [&](const GridRecord& rec) {
            const auto it = sp.find(rec.category);
            if (it == sp.end())
              throw validation_error(
                  "class_split_eval: no codebook for category " +
                  std::to_string(rec.category));
            const double a = iou(rec.grid, decode(ag, encode(ag, rec.grid)));
            const double s = iou(rec.grid, decode(it->second,
                                                  encode(it->second, rec.grid)));
            return std::make_pair(a, s);
          },
          [&](const GridRecord& rec, const std::pair<double, double>& v) {
            ag_sum += v.first;
            sp_sum += v.second;
            auto& row = rows[rec.category];
            row.first += 1;
            row.second.first += v.first;
            row.second.second += v.second;
          });
  if (count == 0)
    throw std::invalid_argument("class_split_eval: empty corpus");

  ClassSplitResult result;
  result.agnostic_miou = ag_sum / static_cast<double>(count);
  result.specific_miou = sp_sum / static_cast<double>(count);
  for (const auto& [id, row] : rows)
    result.per_category.push_back(
        {id, row.first, row.second.first / static_cast<double>(row.first),
         row.second.second / static_cast<double>(row.first)});
  return result;
}

}  // namespace maskenc
