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

#include <map>
#include <memory>
#include <vector>

#include "maskenc/codebook.hpp"
#include "maskenc/eval.hpp"
#include "maskenc/parallel.hpp"

namespace maskenc {

/// Accumulate fit statistics over a corpus with worker-local accumulators.
/// Statistics of binary grids are integer-valued, so the shard split has
/// no effect on the merged result.
inline FitAccumulator fit_corpus(const CorpusSource& corpus, int m,
                                 int threads = 1) {
  std::vector<std::unique_ptr<FitAccumulator>> workers(
      static_cast<std::size_t>(threads < 1 ? 1 : threads));
  std::vector<GridRecord> chunk;
  constexpr std::size_t kChunk = 8192;
  chunk.reserve(kChunk);
  auto flush = [&] {
    if (chunk.empty()) return;
    parallel_for_index(chunk.size(), static_cast<int>(workers.size()),
                       [&](int worker, std::size_t i) {
                         auto& acc = workers[static_cast<std::size_t>(worker)];
                         if (!acc) acc = std::make_unique<FitAccumulator>(m);
                         acc->add(chunk[i].grid);
                       });
    chunk.clear();
  };
  corpus([&](GridRecord&& rec) {
    chunk.push_back(std::move(rec));
    if (chunk.size() >= kChunk) flush();
  });
  flush();
  FitAccumulator total(m);
  for (auto& acc : workers)
    if (acc) total.merge(*acc);
  return total;
}

/// Per-category accumulators in one corpus pass. Within a chunk each
/// category is handled by exactly one worker, so accumulators are not
/// duplicated per thread.
inline std::map<int, FitAccumulator> fit_corpus_per_category(
    const CorpusSource& corpus, int m, int threads = 1) {
  std::map<int, FitAccumulator> accs;
  std::vector<GridRecord> chunk;
  constexpr std::size_t kChunk = 8192;
  chunk.reserve(kChunk);
  auto flush = [&] {
    if (chunk.empty()) return;
    std::map<int, std::vector<const GridMask*>> by_category;
    for (const auto& rec : chunk) by_category[rec.category].push_back(&rec.grid);
    std::vector<std::pair<int, const std::vector<const GridMask*>*>> tasks;
    tasks.reserve(by_category.size());
    for (auto& [id, grids] : by_category) {
      accs.try_emplace(id, m);  // created on the calling thread
      tasks.emplace_back(id, &grids);
    }
    parallel_for_index(
        tasks.size(), threads,
        [&](int, std::size_t t) {
          FitAccumulator& acc = accs.at(tasks[t].first);
          for (const GridMask* g : *tasks[t].second) acc.add(*g);
        },
        /*block=*/1);
    chunk.clear();
  };
  corpus([&](GridRecord&& rec) {
    chunk.push_back(std::move(rec));
    if (chunk.size() >= kChunk) flush();
  });
  flush();
  return accs;
}

}  // namespace maskenc
