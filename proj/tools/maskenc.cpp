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

// Batch front end: fit a mask codebook from COCO-format annotations,
// sweep reconstruction error over component counts, encode/decode mask
// batches, compare codecs, and emit synthetic corpora.

#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "maskenc/maskenc.hpp"

namespace {

using namespace maskenc;

struct Options {
  std::string annotations;
  std::string out;
  std::string codebook_path;
  std::string codes_path;
  std::string plot;
  int mask_size = 28;
  std::string components = "60";
  std::string whiten = "none";
  std::string scale = "none";
  bool class_specific = false;
  int rays = 36;
  std::uint64_t seed = 1;
  int threads = default_thread_count();
  bool include_crowd = false;
  std::uint64_t max_count = 0;
  double threshold = 0.5;
  std::string families = "blob,disk,bar,donut,two-blob,crescent";
  int count = 100;
  int image_size = 64;
};

std::vector<int> parse_components(const std::string& s) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::size_t pos = 0;
    const int v = std::stoi(item, &pos);
    if (pos != item.size() || v < 1)
      throw std::invalid_argument("bad component count: " + item);
    out.push_back(v);
  }
  if (out.empty()) throw std::invalid_argument("no component counts given");
  return out;
}

WhitenMode parse_whiten(const std::string& s) {
  if (s == "none") return WhitenMode::none;
  if (s == "eigen") return WhitenMode::eigen;
  throw std::invalid_argument("bad --whiten value: " + s);
}

ScaleMode parse_scale(const std::string& s) {
  if (s == "none") return ScaleMode::none;
  if (s == "std") return ScaleMode::stddev;
  throw std::invalid_argument("bad --scale value: " + s);
}

LoadFilters make_filters(const Options& opt) {
  LoadFilters filters;
  filters.include_crowd = opt.include_crowd;
  if (opt.max_count > 0) filters.max_count = opt.max_count;
  return filters;
}

std::string with_category_suffix(const std::string& path, int category) {
  const std::size_t dot = path.find_last_of('.');
  const std::size_t slash = path.find_last_of('/');
  char suffix[16];
  std::snprintf(suffix, sizeof suffix, ".cat%03d", category);
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash))
    return path + suffix;
  return path.substr(0, dot) + suffix + path.substr(dot);
}

void write_file(const std::string& path, const std::string& bytes) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw error("cannot write " + path);
  os << bytes;
  if (!os) throw error("write failed: " + path);
}

void print_corpus_stats(const CorpusStats& stats) {
  std::cout << "records: " << stats.records << "\n";
  std::cout << "grids: " << stats.grids << "\n";
  std::cout << "excluded: " << stats.excluded() << "\n";
  for (const auto& [reason, n] : stats.exclusions)
    std::cout << "  " << reason << ": " << n << "\n";
}

void print_spectrum_head(const Codebook& cb) {
  std::cout << "eigenvalues (top " << std::min(cb.components, 10) << "):";
  for (int k = 0; k < std::min(cb.components, 10); ++k) {
    char buf[32];
    std::snprintf(buf, sizeof buf, " %.6g", cb.eigenvalues[k]);
    std::cout << buf;
  }
  std::cout << "\n";
}

int cmd_fit(const Options& opt) {
  const std::vector<int> ns = parse_components(opt.components);
  const int components = ns.back();
  const WhitenMode whiten = parse_whiten(opt.whiten);
  const ScaleMode scale = parse_scale(opt.scale);
  if (components > opt.mask_size * opt.mask_size)
    throw std::invalid_argument("--components exceeds mask-size^2");

  CorpusStats stats;
  const CorpusSource corpus = coco_corpus_source(
      opt.annotations, make_filters(opt), opt.mask_size, &stats);

  if (opt.class_specific) {
    const auto accs = fit_corpus_per_category(corpus, opt.mask_size,
                                              opt.threads);
    print_corpus_stats(stats);
    for (const auto& [category, acc] : accs) {
      Codebook cb = solve(acc, components, whiten, scale);
      cb.class_id = category;
      const std::string path = with_category_suffix(opt.out, category);
      save_codebook(cb, path);
      std::cout << "category " << category << ": " << acc.count()
                << " samples -> " << path << "\n";
    }
  } else {
    const FitAccumulator acc = fit_corpus(corpus, opt.mask_size, opt.threads);
    const Codebook cb = solve(acc, components, whiten, scale);
    save_codebook(cb, opt.out);
    print_corpus_stats(stats);
    print_spectrum_head(cb);
    std::cout << "codebook: " << opt.out << "\n";
  }
  return 0;
}

int cmd_sweep(const Options& opt) {
  std::vector<int> ns = parse_components(
      opt.components == "60" ? "10,20,30,40,50,60,70,80,90,100"
                             : opt.components);
  Codebook cb;
  CorpusStats stats;
  const CorpusSource corpus = coco_corpus_source(
      opt.annotations, make_filters(opt), opt.mask_size, &stats);
  if (!opt.codebook_path.empty()) {
    cb = load_codebook(opt.codebook_path);
  } else {
    if (ns.back() > opt.mask_size * opt.mask_size)
      throw std::invalid_argument("--components exceeds mask-size^2");
    const FitAccumulator acc = fit_corpus(corpus, opt.mask_size, opt.threads);
    cb = solve(acc, ns.back(), parse_whiten(opt.whiten),
               parse_scale(opt.scale));
  }
  const ReconCurve curve = recon_curve(corpus, cb, ns, opt.threads);
  write_file(opt.out, emit_report(curve, ReportFormat::csv));
  if (!opt.plot.empty())
    write_file(opt.plot, emit_report(curve, ReportFormat::svg));
  print_corpus_stats(stats);
  for (const auto& p : curve.points) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "n=%d miou=%.6f err=%.6f", p.n, p.miou,
                  p.err);
    std::cout << buf << "\n";
  }
  return 0;
}

int cmd_encode(const Options& opt) {
  const Codebook cb = load_codebook(opt.codebook_path);
  CodesFile codes;
  codes.m = cb.m;
  codes.components = cb.components;
  CorpusStats stats;
  load_coco(opt.annotations, make_filters(opt), [&](InstanceRecord&& rec) {
    ++stats.records;
    GridOutcome out = record_to_grid(rec, cb.m);
    if (!out.grid) {
      ++stats.exclusions[out.exclusion];
      return;
    }
    ++stats.grids;
    BinaryMask mask = rec.rle ? rle_decode(*rec.rle)
                              : polygon_rasterize(rec.polygons,
                                                  rec.image_height,
                                                  rec.image_width);
    codes.records.push_back(CodeRecord{rec.id, rec.image_height,
                                       rec.image_width, tight_bbox(mask),
                                       encode(cb, *out.grid)});
  });
  save_codes(codes, opt.out);
  print_corpus_stats(stats);
  std::cout << "codes: " << opt.out << " (" << codes.records.size()
            << " records)\n";
  return 0;
}

int cmd_decode(const Options& opt) {
  const Codebook cb = load_codebook(opt.codebook_path);
  const CodesFile codes = load_codes(opt.codes_path);
  if (codes.components != cb.components || codes.m != cb.m)
    throw validation_error(
        "codes file does not match codebook (m=" + std::to_string(codes.m) +
        ", N=" + std::to_string(codes.components) + " vs m=" +
        std::to_string(cb.m) + ", N=" + std::to_string(cb.components) + ")");
  std::ofstream os(opt.out, std::ios::binary | std::ios::trunc);
  if (!os) throw error("cannot write " + opt.out);
  os << "[";
  bool first = true;
  for (const auto& rec : codes.records) {
    const GridMask grid = decode(cb, rec.code, opt.threshold);
    const BinaryMask mask =
        paste(grid, rec.box, rec.image_height, rec.image_width);
    nlohmann::json entry{
        {"id", rec.key},
        {"size", {rec.image_height, rec.image_width}},
        {"counts", rle_to_string(rle_encode(mask))}};
    if (!first) os << ',';
    first = false;
    os << entry.dump();
  }
  os << "]";
  if (!os) throw error("write failed: " + opt.out);
  std::cout << "reconstructions: " << opt.out << " (" << codes.records.size()
            << " records)\n";
  return 0;
}

int cmd_compare(const Options& opt) {
  const std::vector<int> ns = parse_components(opt.components);
  const int components = ns.back();
  CorpusStats stats;
  const CorpusSource corpus = coco_corpus_source(
      opt.annotations, make_filters(opt), opt.mask_size, &stats);

  std::vector<NamedCodec> codecs;
  if (components > 0) {
    if (components > opt.mask_size * opt.mask_size)
      throw std::invalid_argument("--components exceeds mask-size^2");
    const FitAccumulator acc = fit_corpus(corpus, opt.mask_size, opt.threads);
    const Codebook cb = solve(acc, components, parse_whiten(opt.whiten),
                              parse_scale(opt.scale));
    codecs.push_back({"pca-" + std::to_string(components), pca_codec(cb)});
  }
  if (opt.rays > 0) {
    const int rays = opt.rays;
    const int m = opt.mask_size;
    codecs.push_back({"polar-" + std::to_string(rays),
                      [rays, m](const GridMask& g) {
                        if (g.area() == 0) return GridMask::zeros(m);
                        return polar_decode(polar_encode(g, rays), m);
                      }});
  }
  if (codecs.empty())
    throw std::invalid_argument("nothing to compare: no codecs selected");
  const CodecReport report = compare_codecs(corpus, codecs, opt.threads);
  write_file(opt.out, emit_report(report, ReportFormat::csv));
  if (!opt.plot.empty())
    write_file(opt.plot, emit_report(report, ReportFormat::svg));
  print_corpus_stats(stats);
  for (const auto& s : report.codecs) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "%s: mean_iou=%.6f median_iou=%.6f",
                  s.name.c_str(), s.mean_iou, s.median_iou);
    std::cout << buf << "\n";
  }
  return 0;
}

int cmd_synth(const Options& opt) {
  CorpusSpec spec;
  std::stringstream ss(opt.families);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) spec.families.push_back(parse_family(item));
  if (spec.families.empty())
    throw std::invalid_argument("no shape families given");
  spec.count_per_family = opt.count;
  spec.image_size = opt.image_size;
  spec.m = opt.mask_size;
  spec.seed = opt.seed;
  std::ofstream os(opt.out, std::ios::binary | std::ios::trunc);
  if (!os) throw error("cannot write " + opt.out);
  write_coco_json(spec, os);
  if (!os) throw error("write failed: " + opt.out);
  std::cout << "synthetic corpus: " << opt.out << " ("
            << spec.families.size() * spec.count_per_family
            << " instances)\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  Options opt;
  CLI::App app{"mask dictionary encoding toolkit"};
  app.require_subcommand(1);

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--mask-size", opt.mask_size, "grid side m")
        ->capture_default_str();
    sub->add_option("--components", opt.components,
                    "component count or comma list");
    sub->add_option("--whiten", opt.whiten, "code whitening: none|eigen");
    sub->add_option("--scale", opt.scale, "input scaling: none|std");
    sub->add_option("--threads", opt.threads, "worker threads")
        ->capture_default_str();
    sub->add_option("--seed", opt.seed, "corpus seed");
    sub->add_flag("--include-crowd", opt.include_crowd,
                  "keep crowd annotations");
    sub->add_option("--max-count", opt.max_count,
                    "stop after this many records");
  };

  CLI::App* fit = app.add_subcommand("fit", "fit a codebook from annotations");
  fit->add_option("--annotations", opt.annotations)->required();
  fit->add_option("--out", opt.out)->required();
  fit->add_flag("--class-specific", opt.class_specific,
                "one codebook per category");
  add_common(fit);

  CLI::App* sweep =
      app.add_subcommand("sweep", "reconstruction error vs components");
  sweep->add_option("--annotations", opt.annotations)->required();
  sweep->add_option("--out", opt.out, "CSV output")->required();
  sweep->add_option("--plot", opt.plot, "optional SVG output");
  sweep->add_option("--codebook", opt.codebook_path,
                    "reuse a fitted codebook");
  add_common(sweep);

  CLI::App* enc = app.add_subcommand("encode", "encode annotations to codes");
  enc->add_option("--annotations", opt.annotations)->required();
  enc->add_option("--codebook", opt.codebook_path)->required();
  enc->add_option("--out", opt.out)->required();
  add_common(enc);

  CLI::App* dec =
      app.add_subcommand("decode", "decode codes to full-size RLE JSON");
  dec->add_option("--codes", opt.codes_path)->required();
  dec->add_option("--codebook", opt.codebook_path)->required();
  dec->add_option("--out", opt.out)->required();
  dec->add_option("--threshold", opt.threshold, "binarization threshold")
      ->capture_default_str();
  add_common(dec);

  CLI::App* cmp = app.add_subcommand("compare", "compare codecs on a corpus");
  cmp->add_option("--annotations", opt.annotations)->required();
  cmp->add_option("--out", opt.out, "CSV output")->required();
  cmp->add_option("--plot", opt.plot, "optional SVG output");
  cmp->add_option("--rays", opt.rays, "polar codec ray count (0 disables)")
      ->capture_default_str();
  add_common(cmp);

  CLI::App* synth =
      app.add_subcommand("synth", "emit a synthetic COCO-format corpus");
  synth->add_option("--out", opt.out)->required();
  synth->add_option("--families", opt.families, "comma list of shape families")
      ->capture_default_str();
  synth->add_option("--count", opt.count, "instances per family")
      ->capture_default_str();
  synth->add_option("--image-size", opt.image_size)->capture_default_str();
  add_common(synth);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (opt.threads < 1) throw std::invalid_argument("--threads must be >= 1");
    if (opt.mask_size < 2)
      throw std::invalid_argument("--mask-size must be >= 2");
    if (app.got_subcommand(fit)) return cmd_fit(opt);
    if (app.got_subcommand(sweep)) return cmd_sweep(opt);
    if (app.got_subcommand(enc)) return cmd_encode(opt);
    if (app.got_subcommand(dec)) return cmd_decode(opt);
    if (app.got_subcommand(cmp)) return cmd_compare(opt);
    if (app.got_subcommand(synth)) return cmd_synth(opt);
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const maskenc::validation_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
