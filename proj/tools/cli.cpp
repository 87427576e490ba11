// Copyright 2026 The kcover Authors
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

#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "kcover/certify.hpp"
#include "kcover/coverage.hpp"
#include "kcover/dataset.hpp"
#include "kcover/error.hpp"
#include "kcover/image_io.hpp"
#include "kcover/serialize.hpp"
#include "kcover/tiling.hpp"

#ifndef KCOVER_VERSION
#define KCOVER_VERSION "unknown"
#endif

namespace kcover::cli {
namespace {

[[noreturn]] void usage_error(const std::string& what) {
  throw Error(ErrorKind::kConfig, what);
}

int parse_int(const std::string& text, const std::string& what) {
  std::size_t used = 0;
  long value = 0;
  try {
    value = std::stol(text, &used);
  } catch (const std::exception&) {
    usage_error("bad " + what + " '" + text + "'");
  }
  if (used != text.size() || value < INT32_MIN || value > INT32_MAX) {
    usage_error("bad " + what + " '" + text + "'");
  }
  return static_cast<int>(value);
}

// "WxH", or a single number for a square.
std::pair<int, int> parse_size(const std::string& text, const std::string& flag) {
  const auto x = text.find_first_of("xX");
  if (x == std::string::npos) {
    const int side = parse_int(text, flag);
    return {side, side};
  }
  return {parse_int(text.substr(0, x), flag), parse_int(text.substr(x + 1), flag)};
}

std::pair<int, int> parse_range(const std::string& text, const std::string& flag) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) usage_error(flag + " expects A:B");
  const int lo = parse_int(text.substr(0, colon), flag);
  const int hi = parse_int(text.substr(colon + 1), flag);
  if (lo < 1 || hi < lo) usage_error(flag + " range must satisfy 1 <= A <= B");
  return {lo, hi};
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  return out;
}

std::string utc_now() {
  const std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

struct OutputOptions {
  std::string path;  // empty: stdout
  bool no_meta = false;
  bool pretty = false;
  bool csv = false;
};

void add_output_options(CLI::App* cmd, OutputOptions& o) {
  cmd->add_option("-o,--output", o.path, "Write the result to a file instead of stdout");
  cmd->add_flag("--no-meta", o.no_meta, "Omit the meta block (timestamps, timings)");
  cmd->add_flag("--pretty", o.pretty, "Human-readable text instead of JSON");
}

class Sink {
 public:
  Sink(const OutputOptions& o, std::ostream& out) : out_(&out) {
    if (!o.path.empty()) {
      file_.open(o.path, std::ios::binary);
      if (!file_) throw Error(ErrorKind::kIo, "cannot open '" + o.path + "' for writing");
      out_ = &file_;
    }
  }
  std::ostream& stream() { return *out_; }

 private:
  std::ofstream file_;
  std::ostream* out_;
};

void emit_json(Json doc, const std::string& command, const OutputOptions& o,
               std::ostream& out, Json extra_meta = Json::object()) {
  if (!o.no_meta) {
    Json meta{{"tool", "kcover"}, {"version", KCOVER_VERSION}, {"command", command},
              {"created", utc_now()}};
    for (auto& [key, value] : extra_meta.items()) meta[key] = value;
    doc["meta"] = std::move(meta);
  }
  Sink sink(o, out);
  sink.stream() << doc.dump(2) << "\n";
}

// Geometry flags shared by bounds and tile.
struct GeometryOptions {
  std::string domain = "224x224";
  std::string mask;
  std::string patch;
  std::string patch_pct;
  std::string preset;
  int k = 1;
  int m = 0;
  int n = 0;
};

void add_geometry_options(CLI::App* cmd, GeometryOptions& g) {
  cmd->add_option("--domain", g.domain, "Image size WxH")->capture_default_str();
  cmd->add_option("--mask", g.mask, "Mask size WxH");
  cmd->add_option("--patch", g.patch, "Patch size WxH in pixels");
  cmd->add_option("--patch-pct", g.patch_pct,
                  "Square patch covering this percentage of the image");
  cmd->add_option("--preset", g.preset, "Named mask/patch pair, e.g. imagenet-3pct");
  cmd->add_option("--k", g.k, "Coverage fold")->capture_default_str();
  cmd->add_option("--m", g.m, "Offset count along x (k = m*n)");
  cmd->add_option("--n", g.n, "Offset count along y (k = m*n)");
}

TilingConfig resolve_geometry(const GeometryOptions& g) {
  const auto [lx, ly] = parse_size(g.domain, "--domain");
  const DomainSize domain(lx, ly);
  std::optional<MaskSpec> mask;
  std::optional<PatchSpec> patch;
  if (!g.preset.empty()) {
    const auto preset = find_preset(g.preset);
    if (!preset) {
      std::string names;
      for (const Preset& p : presets()) names += (names.empty() ? "" : ", ") + std::string(p.name);
      usage_error("unknown preset '" + g.preset + "' (known: " + names + ")");
    }
    mask = MaskSpec(preset->mask_side, preset->mask_side);
    const int side = patch_side_for_percent(preset->patch_percent, domain);
    patch = PatchSpec(side, side);
  }
  if (!g.mask.empty()) {
    const auto [mx, my] = parse_size(g.mask, "--mask");
    mask = MaskSpec(mx, my);
  }
  if (!g.patch.empty() && !g.patch_pct.empty()) usage_error("--patch and --patch-pct are exclusive");
  if (!g.patch.empty()) {
    const auto [px, py] = parse_size(g.patch, "--patch");
    patch = PatchSpec(px, py);
  } else if (!g.patch_pct.empty()) {
    const int side = patch_side_for_percent(g.patch_pct, domain);
    patch = PatchSpec(side, side);
  }
  if (!mask) usage_error("--mask or --preset is required");
  if (!patch) usage_error("--patch, --patch-pct or --preset is required");
  if (g.k < 1) usage_error("--k must be at least 1");

  TilingConfig config;
  if (g.m == 0 && g.n == 0) {
    config = TilingConfig::with_default_folds(domain, *mask, *patch, g.k);
  } else {
    int m = g.m;
    int n = g.n;
    if (m == 0) m = n > 0 && g.k % n == 0 ? g.k / n : 0;
    if (n == 0) n = m > 0 && g.k % m == 0 ? g.k / m : 0;
    if (m < 1 || n < 1) usage_error("--m and --n must be positive divisors of --k");
    config = {domain, *mask, *patch, g.k, m, n};
  }
  config.validate();
  return config;
}

struct ClassifierOptions {
  std::string spec;
  std::uint32_t classes = 0;
  int timeout_ms = 10'000;
  std::string fill = "zero";
};

void add_classifier_options(CLI::App* cmd, ClassifierOptions& c) {
  cmd->add_option("--classifier", c.spec,
                  "constant:L | mean:T1,T2,... | table:FILE | external:COMMAND")
      ->required();
  cmd->add_option("--classes", c.classes, "Class count for constant classifiers");
  cmd->add_option("--timeout-ms", c.timeout_ms, "External classifier timeout")
      ->capture_default_str();
  cmd->add_option("--fill", c.fill, "zero | mean | const:V or const:R,G,B")
      ->capture_default_str();
}

Json read_json_file(const std::string& path, std::istream& in, const std::string& what) {
  try {
    if (path == "-") return Json::parse(in);
    std::ifstream file(path);
    if (!file) throw Error(ErrorKind::kIo, "cannot open " + what + " '" + path + "'");
    return Json::parse(file);
  } catch (const Json::parse_error& e) {
    usage_error(what + " is not valid JSON: " + e.what());
  }
}

ClassifierSpec parse_classifier(const ClassifierOptions& c) {
  const auto colon = c.spec.find(':');
  if (colon == std::string::npos) usage_error("bad --classifier '" + c.spec + "'");
  const std::string kind = c.spec.substr(0, colon);
  const std::string arg = c.spec.substr(colon + 1);
  ClassifierSpec spec;
  if (kind == "constant") {
    spec = ConstantLabel{Label{static_cast<std::uint32_t>(parse_int(arg, "label"))}, c.classes};
  } else if (kind == "mean") {
    MeanThreshold mean;
    for (const std::string& t : split(arg, ',')) {
      try {
        std::size_t used = 0;
        mean.thresholds.push_back(std::stod(t, &used));
        if (used != t.size()) throw std::invalid_argument(t);
      } catch (const std::exception&) {
        usage_error("bad threshold '" + t + "'");
      }
    }
    spec = mean;
  } else if (kind == "table") {
    std::istringstream none;
    LookupTable table = lookup_table_from_json(read_json_file(arg, none, "lookup table"));
    spec = table;
  } else if (kind == "external") {
    ExternalCommand ext;
    std::istringstream words(arg);
    for (std::string w; words >> w;) ext.argv.push_back(w);
    ext.timeout = std::chrono::milliseconds(c.timeout_ms);
    spec = ext;
  } else {
    usage_error("unknown classifier kind '" + kind + "'");
  }
  validate(spec);
  return spec;
}

FillPolicy parse_fill(const std::string& text) {
  if (text == "zero") return FillPolicy::zero();
  if (text == "mean") return FillPolicy::mean();
  if (text.rfind("const:", 0) == 0) {
    std::vector<std::uint8_t> values;
    for (const std::string& v : split(text.substr(6), ',')) {
      const int x = parse_int(v, "fill value");
      if (x < 0 || x > 255) usage_error("fill values must be in 0..255");
      values.push_back(static_cast<std::uint8_t>(x));
    }
    if (values.size() != 1 && values.size() != 3) usage_error("const fill takes 1 or 3 values");
    return FillPolicy::constant(values);
  }
  usage_error("bad --fill '" + text + "'");
}

MaskSet read_mask_set(const std::string& path, std::istream& in) {
  return mask_set_from_json(read_json_file(path, in, "mask set"));
}

Json counts_json(const LabelCounts& counts) {
  Json out = Json::object();
  for (const auto& [label, count] : counts) out[std::to_string(label.id)] = count;
  return out;
}

// ---- commands ----

struct BoundsCommand {
  GeometryOptions geometry;
  OutputOptions output;
  std::string sweep;
};

int run_bounds(const BoundsCommand& cmd, std::ostream& out) {
  const TilingConfig config = resolve_geometry(cmd.geometry);
  if (cmd.sweep.empty()) {
    const BoundsReport r = mask_count_bounds(config);
    if (cmd.output.pretty) {
      Sink sink(cmd.output, out);
      auto& s = sink.stream();
      s << "single_lb_1d      " << r.single_lb_x << " x " << r.single_lb_y << "\n"
        << "single_lb_2d      " << r.single_lb_2d << "\n"
        << "kfold_lb          " << r.kfold_lb << "\n"
        << "replicated_count  " << r.replicated_count << "\n"
        << "offset_count      " << r.offset_count << "\n"
        << "approx_ratio      " << r.approx_ratio.num << "/" << r.approx_ratio.den << "\n";
      return kExitOk;
    }
    emit_json(Json{{"config", to_json(config)}, {"bounds", to_json(r)}}, "bounds", cmd.output, out);
    return kExitOk;
  }

  // --sweep mask=A:B or patch=A:B varies the square side of one of the two.
  const auto eq = cmd.sweep.find('=');
  const std::string which = cmd.sweep.substr(0, eq);
  if (eq == std::string::npos || (which != "mask" && which != "patch")) {
    usage_error("--sweep expects mask=A:B or patch=A:B");
  }
  const auto [lo, hi] = parse_range(cmd.sweep.substr(eq + 1), "--sweep");
  Json rows = Json::array();
  std::ostringstream csv;
  csv << "mask_side,patch_side,single_lb_2d,kfold_lb,replicated_count,offset_count,approx_ratio\n";
  for (int side = lo; side <= hi; ++side) {
    TilingConfig c = config;
    if (which == "mask") {
      c.mask = MaskSpec(side, side);
    } else {
      c.patch = PatchSpec(side, side);
    }
    if (c.mask.mx <= c.patch.px || c.mask.my <= c.patch.py) continue;
    if (c.patch.px > c.domain.lx || c.patch.py > c.domain.ly) continue;
    const BoundsReport r = mask_count_bounds(c);
    rows.push_back(Json{{"mask_side", c.mask.mx}, {"patch_side", c.patch.px},
                        {"single_lb_2d", r.single_lb_2d}, {"kfold_lb", r.kfold_lb},
                        {"replicated_count", r.replicated_count},
                        {"offset_count", r.offset_count},
                        {"approx_ratio", r.approx_ratio.value()}});
    csv << c.mask.mx << "," << c.patch.px << "," << r.single_lb_2d << "," << r.kfold_lb << ","
        << r.replicated_count << "," << r.offset_count << "," << std::setprecision(6)
        << r.approx_ratio.value() << "\n";
  }
  if (cmd.output.csv) {
    Sink sink(cmd.output, out);
    sink.stream() << csv.str();
    return kExitOk;
  }
  emit_json(Json{{"config", to_json(config)}, {"sweep", which}, {"rows", std::move(rows)}},
            "bounds", cmd.output, out);
  return kExitOk;
}

struct TileCommand {
  GeometryOptions geometry;
  OutputOptions output;
  std::string strategy = "offset";
};

int run_tile(const TileCommand& cmd, std::ostream& out) {
  const TilingConfig config = resolve_geometry(cmd.geometry);
  const MaskSet set = build_mask_set(config, parse_strategy(cmd.strategy));
  if (cmd.output.pretty) {
    Sink sink(cmd.output, out);
    sink.stream() << "strategy " << to_string(set.strategy) << "\n"
                  << "masks    " << set.size() << "\n"
                  << "fold     " << set.config.k << " (" << set.config.m << " x "
                  << set.config.n << ")\n";
    if (set.strategy == Strategy::kOffset) {
      sink.stream() << "stride   " << set.stride_x << " x " << set.stride_y << "\n";
    }
    return kExitOk;
  }
  emit_json(to_json(set), "tile", cmd.output, out);
  return kExitOk;
}

struct VerifyCommand {
  std::string masks = "-";
  std::string patch;
  int k = 0;
  std::size_t gap_limit = 128;
  unsigned jobs = 1;
  OutputOptions output;
};

int run_verify(const VerifyCommand& cmd, std::istream& in, std::ostream& out) {
  MaskSet set = read_mask_set(cmd.masks, in);
  if (!cmd.patch.empty()) {
    const auto [px, py] = parse_size(cmd.patch, "--patch");
    set.config.patch = PatchSpec(px, py);
  }
  if (cmd.k != 0) {
    if (cmd.k < 0) usage_error("--k must be positive");
    set.config.k = cmd.k;
  }
  check_mask_set(set);
  const CoverageReport report = verify(set, {cmd.gap_limit, std::max(1u, cmd.jobs)});
  if (cmd.output.pretty) {
    Sink sink(cmd.output, out);
    auto& s = sink.stream();
    s << "masks            " << set.size() << "\n"
      << "anchors checked  " << report.anchors_checked << "\n"
      << "multiplicity     " << report.min_multiplicity << " .. " << report.max_multiplicity
      << " (need " << report.k << ")\n"
      << "gaps             " << report.gap_count << "\n";
    for (const Anchor& a : report.gaps) s << "  gap at (" << a.ax << ", " << a.ay << ")\n";
    s << (report.covered() ? "covered\n" : "NOT covered\n");
  } else {
    emit_json(to_json(report), "verify", cmd.output, out);
  }
  return report.covered() ? kExitOk : kExitFailed;
}

struct InferCommand {
  std::string masks = "-";
  std::string image;
  ClassifierOptions classifier;
  OutputOptions output;
};

int run_infer(const InferCommand& cmd, std::istream& in, std::ostream& out) {
  const MaskSet set = read_mask_set(cmd.masks, in);
  check_mask_set(set);
  const FillPolicy fill = parse_fill(cmd.classifier.fill);
  const ClassifierSpec spec = parse_classifier(cmd.classifier);
  const Image image = read_image(std::filesystem::path(cmd.image));
  auto classifier = make_classifier(spec);
  const PredictionVector preds = predict_all(image, set, *classifier, fill);
  const AggregationOutcome outcome = aggregate(preds.labels, set.config.k);
  if (cmd.output.pretty) {
    Sink sink(cmd.output, out);
    sink.stream() << "label " << outcome.label.id << " (" << to_string(outcome.rule)
                  << (outcome.tie_broken ? ", tie broken" : "") << ")\n";
    return kExitOk;
  }
  Json labels = Json::array();
  for (Label l : preds.labels) labels.push_back(l.id);
  emit_json(Json{{"image", cmd.image},
                 {"outcome", to_json(outcome)},
                 {"counts", counts_json(count_labels(preds.labels))},
                 {"predictions", std::move(labels)}},
            "infer", cmd.output, out);
  return kExitOk;
}

struct CertifyCommand {
  std::string masks = "-";
  std::string image;
  std::string manifest;
  int label = -1;
  std::string search = "dominance";
  ClassifierOptions classifier;
  OutputOptions output;
};

int run_certify(const CertifyCommand& cmd, std::istream& in, std::ostream& out) {
  if (cmd.image.empty() == cmd.manifest.empty()) usage_error("give exactly one of --image and --manifest");
  if (!cmd.image.empty() && cmd.label < 0) usage_error("--image needs --label");
  CertifyOptions options;
  if (cmd.search == "brute") {
    options.search = AllocationSearch::kBruteForce;
  } else if (cmd.search != "dominance") {
    usage_error("--search must be dominance or brute");
  }
  const MaskSet set = read_mask_set(cmd.masks, in);
  const FillPolicy fill = parse_fill(cmd.classifier.fill);
  const ClassifierSpec spec = parse_classifier(cmd.classifier);
  const CoveragePlan plan(set);
  auto classifier = make_classifier(spec);

  if (!cmd.image.empty()) {
    const Image image = read_image(std::filesystem::path(cmd.image));
    const Label truth{static_cast<std::uint32_t>(cmd.label)};
    const CertificationResult r = certify(image, truth, plan, *classifier, fill, options);
    if (cmd.output.pretty) {
      Sink sink(cmd.output, out);
      auto& s = sink.stream();
      s << (r.certified ? "certified" : "NOT certified") << ", predicted " << r.predicted.id
        << "\n";
      if (r.failing_anchor) {
        s << "witness: patch at (" << r.failing_anchor->ax << ", " << r.failing_anchor->ay
          << ") -> label " << r.failing_outcome->label.id << " ("
          << to_string(r.failing_outcome->rule) << ")\n";
      }
    } else {
      Json doc = to_json(r);
      doc["image"] = cmd.image;
      doc["label"] = cmd.label;
      emit_json(std::move(doc), "certify", cmd.output, out);
    }
    return r.certified ? kExitOk : kExitFailed;
  }

  Manifest manifest = load_manifest(cmd.manifest);
  EvalSummary summary = evaluate(manifest.images, set, *classifier, fill, options);
  std::vector<EvalError> errors = manifest.errors;
  errors.insert(errors.end(), summary.errors.begin(), summary.errors.end());
  summary.errors = std::move(errors);
  if (cmd.output.pretty) {
    Sink sink(cmd.output, out);
    sink.stream() << "images     " << summary.total << " (" << summary.errors.size()
                  << " excluded)\n"
                  << "clean      " << format_ratio(summary.clean_accuracy()) << "\n"
                  << "certified  " << format_ratio(summary.certified_accuracy()) << "\n";
    return kExitOk;
  }
  emit_json(to_json(summary), "certify", cmd.output, out);
  return kExitOk;
}

struct BenchCommand {
  std::vector<std::int64_t> n{36};
  std::string sweep;
  std::string domain = "224x224";
  std::string mask = "56x56";
  std::uint64_t seed = 0;
  OutputOptions output;
};

// Seconds per masked forward pass of the built-in mean classifier.
double time_per_pass(DomainSize domain, MaskSpec mask, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Image image(domain.lx, domain.ly, 3);
  for (auto& v : image.mutable_pixels()) v = static_cast<std::uint8_t>(rng());
  auto classifier = make_classifier(MeanThreshold{{64, 128, 192}});
  const int reps = 16;
  volatile std::uint32_t sink = 0;
  const auto start = std::chrono::steady_clock::now();
  for (int i = 0; i < reps; ++i) {
    const MaskPlacement p{i % domain.lx, (i * 7) % domain.ly, true};
    sink = sink + classifier->classify(apply_mask(image, p, mask, FillPolicy::zero())).id;
  }
  const std::chrono::duration<double> took = std::chrono::steady_clock::now() - start;
  return took.count() / reps;
}

int run_bench(const BenchCommand& cmd, std::ostream& out) {
  std::vector<std::int64_t> ns = cmd.n;
  if (!cmd.sweep.empty()) {
    const auto [lo, hi] = parse_range(cmd.sweep, "--sweep");
    ns.clear();
    for (int v = lo; v <= hi; ++v) ns.push_back(v);
  }
  Json rows = Json::array();
  std::ostringstream csv;
  csv << "n,single_round,double_masking\n";
  for (std::int64_t n : ns) {
    const ForwardPassCounts c = forward_pass_counts(n);
    rows.push_back(Json{{"n", n}, {"single_round", c.single_round}, {"double_masking", c.double_masking}});
    csv << n << "," << c.single_round << "," << c.double_masking << "\n";
  }
  if (cmd.output.csv) {
    Sink sink(cmd.output, out);
    sink.stream() << csv.str();
    return kExitOk;
  }
  if (cmd.output.pretty) {
    Sink sink(cmd.output, out);
    for (const Json& r : rows) {
      sink.stream() << "n=" << r["n"] << "  single round " << r["single_round"] << "  double masking "
                    << r["double_masking"] << "\n";
    }
    return kExitOk;
  }
  Json doc = ns.size() == 1 ? rows[0] : Json{{"rows", rows}};
  Json timing = Json::object();
  if (!cmd.output.no_meta) {
    const auto [lx, ly] = parse_size(cmd.domain, "--domain");
    const auto [mx, my] = parse_size(cmd.mask, "--mask");
    const double per_pass = time_per_pass(DomainSize(lx, ly), MaskSpec(mx, my), cmd.seed);
    Json t = Json::array();
    for (std::int64_t n : ns) {
      const ForwardPassCounts c = forward_pass_counts(n);
      t.push_back(Json{{"n", n},
                       {"single_round_seconds", per_pass * static_cast<double>(c.single_round)},
                       {"double_masking_seconds", per_pass * static_cast<double>(c.double_masking)}});
    }
    timing = Json{{"seconds_per_pass", per_pass}, {"timing", std::move(t)}};
  }
  emit_json(std::move(doc), "bench", cmd.output, out, std::move(timing));
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"kcover: mask tilings with certified patch robustness", "kcover"};
  app.require_subcommand(1);
  app.set_version_flag("--version", KCOVER_VERSION);

  BoundsCommand bounds;
  auto* bounds_cmd = app.add_subcommand("bounds", "Closed-form mask-count bounds");
  add_geometry_options(bounds_cmd, bounds.geometry);
  add_output_options(bounds_cmd, bounds.output);
  bounds_cmd->add_option("--sweep", bounds.sweep, "mask=A:B or patch=A:B square-side sweep");
  bounds_cmd->add_flag("--csv", bounds.output.csv, "CSV rows for --sweep");

  TileCommand tile;
  auto* tile_cmd = app.add_subcommand("tile", "Build a k-fold mask set");
  add_geometry_options(tile_cmd, tile.geometry);
  add_output_options(tile_cmd, tile.output);
  tile_cmd->add_option("--strategy", tile.strategy, "single | replicated | offset")
      ->capture_default_str();

  VerifyCommand verify_args;
  auto* verify_cmd = app.add_subcommand("verify", "Exhaustively check k-fold coverage");
  verify_cmd->add_option("--masks", verify_args.masks, "Mask set file, - for stdin")
      ->capture_default_str();
  verify_cmd->add_option("--patch", verify_args.patch, "Check against this patch size instead");
  verify_cmd->add_option("--k", verify_args.k, "Check against this fold instead");
  verify_cmd->add_option("--gap-limit", verify_args.gap_limit, "Gaps listed in the report")
      ->capture_default_str();
  verify_cmd->add_option("--jobs", verify_args.jobs, "Worker threads")
      ->envname("KCOVER_JOBS")
      ->capture_default_str();
  add_output_options(verify_cmd, verify_args.output);

  InferCommand infer_args;
  auto* infer_cmd = app.add_subcommand("infer", "Aggregate predictions over masked views");
  infer_cmd->add_option("--masks", infer_args.masks, "Mask set file, - for stdin")
      ->capture_default_str();
  infer_cmd->add_option("--image", infer_args.image, "PGM, PPM or raw image")->required();
  add_classifier_options(infer_cmd, infer_args.classifier);
  add_output_options(infer_cmd, infer_args.output);

  CertifyCommand certify_args;
  auto* certify_cmd = app.add_subcommand("certify", "Certify one image or a labelled manifest");
  certify_cmd->add_option("--masks", certify_args.masks, "Mask set file, - for stdin")
      ->capture_default_str();
  certify_cmd->add_option("--image", certify_args.image, "PGM, PPM or raw image");
  certify_cmd->add_option("--label", certify_args.label, "True label of --image");
  certify_cmd->add_option("--manifest", certify_args.manifest, "CSV with header path,label");
  certify_cmd->add_option("--search", certify_args.search, "dominance | brute")
      ->capture_default_str();
  add_classifier_options(certify_cmd, certify_args.classifier);
  add_output_options(certify_cmd, certify_args.output);

  BenchCommand bench;
  auto* bench_cmd = app.add_subcommand("bench", "Forward passes against double masking");
  bench_cmd->add_option("--n", bench.n, "First-round mask counts")->capture_default_str();
  bench_cmd->add_option("--sweep", bench.sweep, "Range A:B of mask counts");
  bench_cmd->add_option("--domain", bench.domain, "Image size for timing")->capture_default_str();
  bench_cmd->add_option("--mask", bench.mask, "Mask size for timing")->capture_default_str();
  bench_cmd->add_option("--seed", bench.seed, "Seed of the timing image")->capture_default_str();
  add_output_options(bench_cmd, bench.output);
  bench_cmd->add_flag("--csv", bench.output.csv, "CSV rows");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*bounds_cmd) return run_bounds(bounds, out);
    if (*tile_cmd) return run_tile(tile, out);
    if (*verify_cmd) return run_verify(verify_args, in, out);
    if (*infer_cmd) return run_infer(infer_args, in, out);
    if (*certify_cmd) return run_certify(certify_args, in, out);
    if (*bench_cmd) return run_bench(bench, out);
  } catch (const Error& e) {
    err << "kcover: " << e.what() << "\n";
    return e.kind() == ErrorKind::kCoverage ? kExitFailed : kExitConfig;
  } catch (const std::exception& e) {
    err << "kcover: " << e.what() << "\n";
    return kExitConfig;
  }
  return kExitConfig;
}

}  // namespace kcover::cli
