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

// Minimal library walkthrough: generate a small synthetic corpus, fit a
// codebook, and print the roundtrip quality of the dictionary codec
// against the polar-ray baseline on a donut shape.

#include <cstdio>

#include "maskenc/maskenc.hpp"

int main() {
  using namespace maskenc;

  CorpusSpec spec;
  spec.families = {ShapeFamily::disk, ShapeFamily::blob, ShapeFamily::donut};
  spec.count_per_family = 200;
  spec.image_size = 64;
  spec.m = 28;
  spec.seed = 7;
  const CorpusSource corpus = synth_corpus_source(spec);

  const FitAccumulator acc = fit_corpus(corpus, spec.m, default_thread_count());
  const Codebook cb = solve(acc, 60);
  std::printf("fitted codebook: m=%d N=%d over %llu masks\n", cb.m,
              cb.components,
              static_cast<unsigned long long>(acc.count()));

  const double miou =
      corpus_miou(corpus, pca_codec(cb), default_thread_count());
  std::printf("corpus mean roundtrip IoU at N=60: %.4f\n", miou);

  // one donut, both codecs
  GridMask donut = GridMask::zeros(28);
  for (int r = 0; r < 28; ++r)
    for (int c = 0; c < 28; ++c) {
      const double d2 = (r - 13.5) * (r - 13.5) + (c - 13.5) * (c - 13.5);
      if (d2 <= 12.0 * 12.0 && d2 > 7.0 * 7.0) donut.at(r, c) = 1;
    }
  const GridMask via_pca = decode(cb, encode(cb, donut));
  const GridMask via_polar = polar_decode(polar_encode(donut, 36), 28);
  std::printf("donut roundtrip IoU: dictionary %.3f, polar rays %.3f\n",
              iou(donut, via_pca), iou(donut, via_polar));
  std::printf("donut components: original %d, dictionary %d, polar %d\n",
              count_components(donut), count_components(via_pca),
              count_components(via_polar));
  return 0;
}
