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

// Acceptance suite: one pass/fail line per criterion, exit 1 on any
// failure. Criteria that require the full COCO train2017 annotations run
// when COCO_ANNOTATIONS points at instances_train2017.json (or the path
// is passed as argv[1]); without the dataset they are reported as SKIP.

#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "maskenc/maskenc.hpp"
#include "support/test_support.hpp"

using namespace maskenc;
namespace fs = std::filesystem;

namespace {

int failures = 0;

void report(const char* tag, int idx, const std::string& what) {
  std::printf("[%s] %d. %s\n", tag, idx, what.c_str());
  std::fflush(stdout);
}
void check(int idx, bool ok, const std::string& what) {
  if (!ok) ++failures;
  report(ok ? "PASS" : "FAIL", idx, what);
}
void skip(int idx, const std::string& what) { report("SKIP", idx, what); }

std::string fmt(const char* pattern, ...) {
  char buf[512];
  va_list args;
  va_start(args, pattern);
  std::vsnprintf(buf, sizeof buf, pattern, args);
  va_end(args);
  return buf;
}

const int kThreads = default_thread_count();

CorpusSpec synth_spec(std::vector<ShapeFamily> families, int count,
                      std::uint64_t seed) {
  CorpusSpec spec;
  spec.families = std::move(families);
  spec.count_per_family = count;
  spec.image_size = 64;
  spec.m = 28;
  spec.seed = seed;
  return spec;
}

// ---------------------------------------------------------------- 1 & 2
void criterion_1_and_2(const std::string& coco_path) {
  if (coco_path.empty()) {
    skip(1, "reconstruction-error curve on COCO train2017: annotations not available "
            "(set COCO_ANNOTATIONS); desk-scale curve covered by 3.");
    skip(2, "class-agnostic vs class-specific on COCO train2017: "
            "annotations not available (set COCO_ANNOTATIONS).");
    return;
  }
  CorpusStats stats;
  const CorpusSource corpus = coco_corpus_source(coco_path, {}, 28, &stats);

  const FitAccumulator acc = fit_corpus(corpus, 28, kThreads);
  const Codebook cb = solve(acc, 100);
  std::vector<int> ns;
  for (int n = 10; n <= 100; n += 10) ns.push_back(n);
  const ReconCurve curve = recon_curve(corpus, cb, ns, kThreads);
  bool nonincreasing = true;
  for (std::size_t j = 1; j < curve.points.size(); ++j)
    if (curve.points[j].err > curve.points[j - 1].err + 1e-6)
      nonincreasing = false;
  const double err100 = curve.points.back().err;
  check(1, err100 <= 0.035 && nonincreasing,
        fmt("reconstruction-error curve on COCO train2017 (%llu masks, %llu excluded): "
            "err@100=%.4f <= 0.035, curve nonincreasing=%d",
            static_cast<unsigned long long>(stats.grids),
            static_cast<unsigned long long>(stats.excluded()), err100,
            nonincreasing ? 1 : 0));

  const auto per_cat = fit_corpus_per_category(corpus, 28, kThreads);
  std::map<int, Codebook> specific;
  for (const auto& [id, a] : per_cat) specific.emplace(id, solve(a, 60));
  const ClassSplitResult split =
      class_split_eval(corpus, cb, specific, 60, kThreads);
  const double gap = std::abs(split.agnostic_miou - split.specific_miou);
  check(2, gap <= 0.02,
        fmt("class split at N=60 on COCO train2017: agnostic=%.4f "
            "specific=%.4f |gap|=%.4f <= 0.02",
            split.agnostic_miou, split.specific_miou, gap));
}

// ------------------------------------------------------------------- 3
void criterion_3() {
  const CorpusSource corpus = synth_corpus_source(synth_spec(
      {ShapeFamily::blob, ShapeFamily::disk, ShapeFamily::bar,
       ShapeFamily::donut, ShapeFamily::two_blob, ShapeFamily::crescent},
      120, 20260809));
  const Codebook cb = solve(fit_corpus(corpus, 28, kThreads), 80);
  const ReconCurve c = recon_curve(corpus, cb, {20, 40, 60, 80}, kThreads);
  const double m20 = c.points[0].miou, m40 = c.points[1].miou;
  const double m60 = c.points[2].miou, m80 = c.points[3].miou;
  const bool rising = m20 < m40 && m40 < m60;
  const bool saturating = (m80 - m60) < (m40 - m20);
  check(3, rising && saturating,
        fmt("saturation on frozen synthetic corpus: mIoU@20=%.4f < @40=%.4f "
            "< @60=%.4f, gain(80-60)=%.4f < gain(40-20)=%.4f",
            m20, m40, m60, m80 - m60, m40 - m20));
}

// ------------------------------------------------------------------- 4
void criterion_4() {
  testsupport::Rng rng(424242);
  double worst_op = 0.0, worst_mse = 0.0;
  for (int corpus_idx = 0; corpus_idx < 5; ++corpus_idx) {
    std::vector<GridMask> corpus;
    for (int i = 0; i < 200; ++i)
      corpus.push_back(
          testsupport::random_grid(rng, 4, rng.uniform(0.2, 0.8)));
    FitAccumulator acc(4);
    for (const auto& g : corpus) acc.add(g);

    std::vector<double> oracle_vals;
    std::vector<std::vector<double>> oracle_vecs;
    testsupport::jacobi_eigensolve(testsupport::dense_covariance(corpus),
                                   oracle_vals, oracle_vecs);

    const int n = 8;
    const Codebook cb = solve(acc, n);
    std::vector<std::vector<double>> rows(n, std::vector<double>(16));
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < 16; ++i) rows[k][i] = cb.projection[k * 16 + i];
    const auto mine = testsupport::projection_operator(rows, n, 16);
    const auto oracle = testsupport::projection_operator(oracle_vecs, n, 16);
    for (int i = 0; i < 16; ++i)
      for (int j = 0; j < 16; ++j)
        worst_op = std::max(worst_op, std::abs(mine[i][j] - oracle[i][j]));

    double mse = 0.0;
    for (const auto& g : corpus) {
      const auto u = decode_soft(cb, encode(cb, g));
      for (int i = 0; i < 16; ++i)
        mse += (g.data[i] - u[i]) * (g.data[i] - u[i]);
    }
    mse /= static_cast<double>(corpus.size());
    double tail = 0.0;
    for (std::size_t k = n; k < oracle_vals.size(); ++k)
      tail += oracle_vals[k];
    worst_mse = std::max(worst_mse, std::abs(mse - tail));
  }
  check(4, worst_op < 1e-8 && worst_mse < 1e-6,
        fmt("PCA vs brute-force Jacobi oracle on 5 tiny corpora: "
            "max projection-operator diff %.2e < 1e-8, max |MSE - "
            "eigenvalue tail| %.2e < 1e-6",
            worst_op, worst_mse));
}

// ------------------------------------------------------------------- 5
void criterion_5(const std::string& coco_path) {
  std::vector<GridMask> grids;
  std::string source;
  if (!coco_path.empty()) {
    LoadFilters filters;
    filters.max_count = 1400;  // headroom for exclusions
    coco_corpus_source(coco_path, filters, 28,
                       nullptr)([&](GridRecord&& rec) {
      if (grids.size() < 1000) grids.push_back(std::move(rec.grid));
    });
    source = "COCO train2017";
  } else {
    const CorpusSource corpus = synth_corpus_source(synth_spec(
        {ShapeFamily::blob, ShapeFamily::disk, ShapeFamily::bar,
         ShapeFamily::donut, ShapeFamily::two_blob}, 200, 505));
    corpus([&](GridRecord&& rec) {
      if (grids.size() < 1000) grids.push_back(std::move(rec.grid));
    });
    source = "synthetic stand-in (COCO_ANNOTATIONS unset)";
  }

  FitAccumulator acc(28);
  for (const auto& g : grids) acc.add(g);
  const Codebook cb = solve(acc, 28 * 28);

  const int dim = 784;
  double max_ortho = 0.0;
  for (int a = 0; a < dim; ++a)
    for (int b = a; b < dim; ++b) {
      double dot = 0;
      for (int i = 0; i < dim; ++i)
        dot += cb.projection[a * dim + i] * cb.projection[b * dim + i];
      max_ortho = std::max(max_ortho, std::abs(dot - (a == b ? 1.0 : 0.0)));
    }

  std::size_t exact = 0;
  for (const auto& g : grids)
    if (decode(cb, encode(cb, g)).data == g.data) ++exact;
  const double frac =
      static_cast<double>(exact) / static_cast<double>(grids.size());
  check(5, frac >= 0.999 && max_ortho < 1e-6,
        fmt("full-rank roundtrip on 1000 grids (%s): exact for %.2f%% >= "
            "99.9%%, ||T*T'-I||_max %.2e < 1e-6",
            source.c_str(), 100.0 * frac, max_ortho));
}

// ------------------------------------------------------------------- 6
void criterion_6() {
  const auto goldens = testsupport::load_fixture("rle_goldens.json");
  bool all_ok = goldens.size() >= 50;
  for (const auto& g : goldens) {
    const int h = g["h"], w = g["w"];
    RunLengthEncoding expected{h, w, {}};
    for (const auto& c : g["counts"])
      expected.counts.push_back(c.get<std::uint32_t>());
    const std::string s = g["s"].get<std::string>();
    if (rle_from_string(s, h, w) != expected) all_ok = false;
    const BinaryMask mask = rle_decode(expected);
    if (rle_encode(mask) != expected) all_ok = false;
    if (rle_to_string(expected) != s) all_ok = false;
    if (mask.area() != g["area"].get<std::size_t>()) all_ok = false;
  }

  testsupport::Rng rng(606060);
  std::size_t roundtrips = 0;
  bool roundtrip_ok = true;
  for (int trial = 0; trial < 10000; ++trial) {
    const int h = testsupport::uniform_int(rng, 1, 48);
    const int w = testsupport::uniform_int(rng, 1, 48);
    const BinaryMask m = testsupport::random_mask(rng, h, w, rng.uniform());
    const RunLengthEncoding rle = rle_encode(m);
    if (rle_decode(rle).data != m.data ||
        rle_from_string(rle_to_string(rle), h, w) != rle)
      roundtrip_ok = false;
    ++roundtrips;
  }
  check(6, all_ok && roundtrip_ok,
        fmt("RLE conformance: %zu reference-toolkit goldens bit-identical "
            "both ways, %zu random roundtrips exact",
            goldens.size(), roundtrips));
}

// ------------------------------------------------------------------- 7
void criterion_7() {
  testsupport::Rng rng(707070);
  const double h = 1e-5, tol = 1e-5;
  double worst = 0.0;
  const auto fd_check = [&](const std::function<LossValue(const MaskCode&,
                                                          const MaskCode&)>&
                                loss,
                            bool skip_kinks) {
    int checked = 0;
    while (checked < 100) {
      MaskCode p, t;
      for (int i = 0; i < 8; ++i) {
        p.values.push_back(rng.uniform(-3, 3));
        t.values.push_back(rng.uniform(-3, 3));
      }
      if (skip_kinks) {
        bool near = false;
        for (int i = 0; i < 8; ++i) {
          const double ad = std::abs(p.values[i] - t.values[i]);
          if (ad < 1e-3 || std::abs(ad - 1.0) < 1e-3) near = true;
        }
        if (near) continue;
      }
      const LossValue at = loss(p, t);
      for (int i = 0; i < 8; ++i) {
        MaskCode hi = p, lo = p;
        hi.values[i] += h;
        lo.values[i] -= h;
        const double fd = (loss(hi, t).value - loss(lo, t).value) / (2 * h);
        const double denom =
            std::max({std::abs(fd), std::abs(at.gradient[i]), 1e-8});
        worst = std::max(worst, std::abs(at.gradient[i] - fd) / denom);
      }
      ++checked;
    }
  };
  fd_check([](const MaskCode& p, const MaskCode& t) { return l2_loss(p, t); },
           false);
  fd_check([](const MaskCode& p, const MaskCode& t) { return l1_loss(p, t); },
           true);
  fd_check(
      [](const MaskCode& p, const MaskCode& t) {
        return smooth_l1_loss(p, t, 1.0);
      },
      true);
  fd_check(
      [](const MaskCode& p, const MaskCode& t) { return cosine_loss(p, t); },
      false);
  check(7, worst < tol,
        fmt("gradient checks, 100 pairs per loss (kink-adjacent excluded "
            "for l1/smooth-l1): worst relative error %.2e < 1e-5",
            worst));
}

// ------------------------------------------------------------------- 8
void criterion_8() {
  const CorpusSource donuts =
      synth_corpus_source(synth_spec({ShapeFamily::donut}, 300, 20260808));
  const Codebook donut_cb = solve(fit_corpus(donuts, 28, kThreads), 60);
  const double pca_miou = corpus_miou(donuts, pca_codec(donut_cb), kThreads);
  const Codec polar36 = [](const GridMask& g) {
    return polar_decode(polar_encode(g, 36), g.m);
  };
  const double polar_miou = corpus_miou(donuts, polar36, kThreads);
  check(8, pca_miou >= 0.85 && polar_miou <= 0.75,
        fmt("hollow decay, donut corpus: dictionary@60 mean IoU %.4f >= "
            "0.85, polar@36 mean IoU %.4f <= 0.75",
            pca_miou, polar_miou));

  const CorpusSource pairs =
      synth_corpus_source(synth_spec({ShapeFamily::two_blob}, 300, 20260807));
  const Codebook pair_cb = solve(fit_corpus(pairs, 28, kThreads), 60);
  std::size_t total = 0, polar_single = 0, pca_two = 0;
  pairs([&](GridRecord&& rec) {
    ++total;
    if (count_components(polar36(rec.grid)) == 1) ++polar_single;
    if (count_components(decode(pair_cb, encode(pair_cb, rec.grid))) == 2)
      ++pca_two;
  });
  const double pca_two_frac =
      static_cast<double>(pca_two) / static_cast<double>(total);
  check(8, polar_single == total && pca_two_frac >= 0.8,
        fmt("hollow decay, two-blob corpus: polar single-component for "
            "%zu/%zu masks, dictionary recovers both components for %.1f%% "
            ">= 80%%",
            polar_single, total, 100.0 * pca_two_frac));
}

// ------------------------------------------------------------------- 9
int run_cli(const std::string& args) {
  const std::string cmd =
      std::string(MASKENC_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
#ifdef WEXITSTATUS
  return status < 0 ? -1 : WEXITSTATUS(status);
#else
  return status;
#endif
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void criterion_9() {
  const fs::path dir = fs::temp_directory_path() / "maskenc_acceptance";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const std::string corpus = (dir / "corpus.json").string();
  bool ok = run_cli("synth --out " + corpus +
                    " --families blob,disk,donut --count 60 --seed 44") == 0;

  const char* runs[2] = {"r1", "r2"};
  for (const char* tag : runs) {
    const std::string t = (dir / tag).string();
    ok = ok && run_cli("fit --annotations " + corpus + " --out " + t +
                       ".mec --components 40 --threads 4") == 0;
    ok = ok && run_cli("sweep --annotations " + corpus + " --out " + t +
                       ".csv --plot " + t +
                       ".svg --components 10,20,40 --threads 4") == 0;
    ok = ok && run_cli("compare --annotations " + corpus + " --out " + t +
                       "_cmp.csv --components 40 --rays 36 --threads 4") == 0;
  }
  const bool identical =
      slurp(dir / "r1.mec") == slurp(dir / "r2.mec") &&
      slurp(dir / "r1.csv") == slurp(dir / "r2.csv") &&
      slurp(dir / "r1.svg") == slurp(dir / "r2.svg") &&
      slurp(dir / "r1_cmp.csv") == slurp(dir / "r2_cmp.csv") &&
      !slurp(dir / "r1.mec").empty();
  check(9, ok && identical,
        fmt("determinism: fit/sweep/compare byte-identical across two runs "
            "at --threads 4 (commands ok=%d)",
            ok ? 1 : 0));
  fs::remove_all(dir);
}

}  // namespace

int main(int argc, char** argv) {
  std::string coco_path;
  if (argc > 1) coco_path = argv[1];
  if (coco_path.empty())
    if (const char* env = std::getenv("COCO_ANNOTATIONS")) coco_path = env;
  if (!coco_path.empty() && !fs::exists(coco_path)) {
    std::fprintf(stderr, "warning: %s not found, treating as unavailable\n",
                 coco_path.c_str());
    coco_path.clear();
  }

  criterion_1_and_2(coco_path);
  criterion_3();
  criterion_4();
  criterion_5(coco_path);
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();

  if (failures) {
    std::printf("%d criterion check(s) FAILED\n", failures);
    return 1;
  }
  std::printf("all criterion checks passed (skips noted above)\n");
  return 0;
}
