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

// Acceptance suite: one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "attack.hpp"
#include "kcover/certify.hpp"
#include "kcover/coverage.hpp"
#include "kcover/error.hpp"
#include "kcover/tiling.hpp"
#include "generators.hpp"
#include "oracles.hpp"

namespace kcover {
namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void fail(const std::string& why) {
    if (pass) detail << "first failure: " << why << "; ";
    pass = false;
  }
};

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// Reference bound values, every preset and every mask/patch-percentage pair,
// each call under 1 ms.
void bounds_criterion(Outcome& o) {
  double slowest = 0;
  auto timed = [&](const TilingConfig& c) {
    const auto start = Clock::now();
    const BoundsReport r = mask_count_bounds(c);
    slowest = std::max(slowest, seconds_since(start));
    return r;
  };
  const BoundsReport ref = timed({{224, 224}, {56, 56}, {39, 39}, 6, 3, 2});
  if (ref.kfold_lb != 1044) o.fail("kfold_lb " + std::to_string(ref.kfold_lb));
  if (ref.replicated_count != 1176) o.fail("replicated_count " + std::to_string(ref.replicated_count));
  if (ref.offset_count != 1080) o.fail("offset_count " + std::to_string(ref.offset_count));

  const DomainSize d(224, 224);
  int pairs = 0;
  for (const Preset& p : presets()) {
    if (patch_side_for_percent(p.patch_percent, d) != p.patch_side) {
      o.fail(std::string(p.name) + " patch side");
    }
    try {
      timed({d, {p.mask_side, p.mask_side}, {p.patch_side, p.patch_side}, 6, 3, 2});
      ++pairs;
    } catch (const Error& e) {
      o.fail(std::string(p.name) + ": " + e.what());
    }
  }
  for (int mask : {16, 32, 48, 56}) {
    for (const char* pct : {"0.4", "1", "2", "2.4", "3"}) {
      const int side = patch_side_for_percent(pct, d);
      if (side >= mask) continue;  // the mask cannot hide a patch this large
      timed({d, {mask, mask}, {side, side}, 6, 3, 2});
      ++pairs;
    }
  }
  if (slowest >= 1e-3) o.fail("slowest call " + std::to_string(slowest) + " s");
  o.detail << "1044/1176/1080 reproduced, " << pairs << " preset pairs, slowest "
           << slowest * 1e6 << " us";
}

// Exhaustive verification of at least 500 random tilings, zero gaps, < 60 s.
void coverage_criterion(Outcome& o) {
  std::mt19937_64 rng(0xC0FE);
  const auto start = Clock::now();
  int configs = 0;
  std::int64_t anchors = 0;
  for (Strategy s : {Strategy::kSingle, Strategy::kReplicated, Strategy::kOffset}) {
    for (int i = 0; i < 400; ++i) {
      const TilingConfig c = testgen::random_config(rng, s, 64, 9);
      const MaskSet set = build_mask_set(c, s);
      const CoverageReport r = verify(set);
      anchors += r.anchors_checked;
      ++configs;
      if (r.min_multiplicity < set.config.k) {
        std::ostringstream why;
        why << to_string(s) << " " << c.domain.lx << "x" << c.domain.ly << " mask " << c.mask.mx
            << "x" << c.mask.my << " patch " << c.patch.px << "x" << c.patch.py << " k " << c.k;
        o.fail(why.str());
      }
    }
  }
  const double took = seconds_since(start);
  if (took >= 60) o.fail("took " + std::to_string(took) + " s");
  o.detail << configs << " configs, " << anchors << " anchors, " << took << " s";
}

// replicated_count / kfold_lb <= 2 on at least 10^4 tuples with the mask no
// larger than the domain, and exactly 2 at L = 18, M - p = 17.
void ratio_criterion(Outcome& o) {
  std::mt19937_64 rng(0x4A710);
  int tuples = 0;
  double worst = 0;
  for (int i = 0; i < 20000; ++i) {
    const int lx = testgen::uniform(rng, 2, 512);
    const int ly = testgen::uniform(rng, 2, 512);
    const int px = testgen::uniform(rng, 1, lx - 1);
    const int py = testgen::uniform(rng, 1, ly - 1);
    const int mx = testgen::uniform(rng, px + 1, lx);
    const int my = testgen::uniform(rng, py + 1, ly);
    const int k = testgen::uniform(rng, 1, 16);
    const BoundsReport r = mask_count_bounds({{lx, ly}, {mx, my}, {px, py}, k, 1, k});
    ++tuples;
    // Exact rational comparison: replicated <= 2 * lb.
    if (r.replicated_count > 2 * r.kfold_lb) {
      o.fail("L=" + std::to_string(lx) + "x" + std::to_string(ly) + " M=" + std::to_string(mx) +
             "x" + std::to_string(my) + " p=" + std::to_string(px) + "x" + std::to_string(py));
    }
    worst = std::max(worst, r.approx_ratio.value());
  }
  const BoundsReport w = mask_count_bounds({{18, 18}, {20, 20}, {3, 3}, 1, 1, 1});
  if (!(w.approx_ratio == Rational{2, 1}) || w.replicated_count != 4 || w.kfold_lb != 2) {
    o.fail("witness ratio " + std::to_string(w.replicated_count) + "/" +
           std::to_string(w.kfold_lb));
  }
  o.detail << tuples << " tuples, max ratio " << worst << ", witness " << w.replicated_count
           << "/" << w.kfold_lb;
}

// Masked adversarial view equals masked clean view bit for bit whenever the
// mask fully covers the patch.
void neutralization_criterion(Outcome& o) {
  std::mt19937_64 rng(0x5EED);
  int tuples = 0;
  const FillPolicy fills[] = {FillPolicy::zero(), FillPolicy::constant({200, 10, 77}),
                              FillPolicy::mean()};
  while (tuples < 12000) {
    const DomainSize d(testgen::uniform(rng, 1, 32), testgen::uniform(rng, 1, 32));
    const PatchSpec patch(testgen::uniform(rng, 1, d.lx), testgen::uniform(rng, 1, d.ly));
    const MaskSpec mask(testgen::uniform(rng, patch.px, d.lx + 4),
                        testgen::uniform(rng, patch.py, d.ly + 4));
    const Anchor a{testgen::uniform(rng, 0, d.lx - patch.px), testgen::uniform(rng, 0, d.ly - patch.py)};
    MaskPlacement p;
    if (rng() % 2) {
      // Any start that keeps the patch inside the mask, possibly off the image.
      p = {testgen::uniform(rng, a.ax + patch.px - mask.mx, a.ax),
           testgen::uniform(rng, a.ay + patch.py - mask.my, a.ay), false};
    } else {
      p = {testgen::uniform(rng, 0, d.lx - 1), testgen::uniform(rng, 0, d.ly - 1), true};
    }
    if (!fully_covers(p, mask, a, patch, d)) continue;
    const int channels = rng() % 2 ? 3 : 1;
    const Image clean = oracle::random_image(rng, d.lx, d.ly, channels);
    Image content = oracle::random_image(rng, patch.px, patch.py, channels);
    if (rng() % 2) content = oracle::hostile_content(clean, a, patch);
    const Image attacked = apply_patch(clean, a, patch, content);
    FillPolicy fill = fills[tuples % 3];
    if (fill.mode == FillPolicy::Mode::kConstant && channels == 1) fill.values.resize(1);
    if (apply_mask(attacked, p, mask, fill) != apply_mask(clean, p, mask, fill)) {
      o.fail("tuple " + std::to_string(tuples));
    }
    ++tuples;
  }
  o.detail << tuples << " covered tuples, 3 fill policies";
}

// Small instances: certified images survive exhaustive attack simulation, and
// the dominance search agrees with full brute force everywhere.
void soundness_criterion(Outcome& o) {
  std::mt19937_64 rng(0xA77AC);
  const auto start = Clock::now();
  int instances = 0, certified = 0, refuted = 0, agree = 0;
  std::int64_t replays = 0;
  for (int i = 0; i < 3000; ++i) {
    const auto classes = static_cast<std::uint32_t>(testgen::uniform(rng, 2, 4));
    const auto inst = oracle::random_small_instance(rng, 8, classes);
    auto classifier = make_classifier(inst.table);
    const FillPolicy fill = FillPolicy::zero();
    const CoveragePlan plan(inst.set);
    const auto dom = certify(inst.image, inst.truth, plan, *classifier, fill);
    const auto brute = certify(inst.image, inst.truth, plan, *classifier, fill,
                               {AllocationSearch::kBruteForce});
    ++instances;
    if (dom.certified != brute.certified) {
      o.fail("dominance/brute disagree on instance " + std::to_string(i));
      continue;
    }
    // Per-index enumeration of every free-vote labelling at every anchor.
    const auto clean = predict_all(inst.image, inst.set, *classifier, fill).labels;
    bool index_attack = aggregate(clean, inst.set.config.k).label != inst.truth;
    for (std::size_t a = 0; a < plan.anchors().size() && !index_attack; ++a) {
      index_attack = oracle::vote_attack_exists(clean, plan.covering(a), inst.truth, classes,
                                                inst.set.config.k);
    }
    if (index_attack == dom.certified) {
      o.fail("per-index enumeration disagrees on instance " + std::to_string(i));
      continue;
    }
    ++agree;
    if (dom.certified) {
      ++certified;
      if (auto hit = oracle::simulate_attack(inst, fill, &replays)) {
        o.fail("certified instance " + std::to_string(i) + " broken at (" +
               std::to_string(hit->anchor.ax) + "," + std::to_string(hit->anchor.ay) + ")");
      }
    } else {
      ++refuted;
    }
  }
  const double took = seconds_since(start);
  if (took >= 300) o.fail("took " + std::to_string(took) + " s");
  if (certified == 0 || refuted == 0) o.fail("degenerate sample");
  o.detail << instances << " instances (" << certified << " certified, " << refuted
           << " not), " << agree << " verdicts agree, " << replays << " end-to-end replays, "
           << took << " s";
}

class CountingClassifier : public Classifier {
 public:
  explicit CountingClassifier(ClassifierSpec spec) : inner_(make_classifier(spec)) {}
  Label classify(const Image& image) override {
    ++calls;
    return inner_->classify(image);
  }
  std::uint32_t num_classes() const override { return inner_->num_classes(); }
  std::int64_t calls = 0;

 private:
  std::unique_ptr<Classifier> inner_;
};

// certify makes exactly n classifier calls; the double-masking model n + n^2.
void call_count_criterion(Outcome& o) {
  std::mt19937_64 rng(0xCA11);
  const MaskSet set36 = single_cover_2d({{224, 224}, {56, 56}, {23, 23}, 1, 1, 1});
  if (set36.size() != 36) o.fail("reference set has " + std::to_string(set36.size()) + " masks");
  const ForwardPassCounts ref = forward_pass_counts(36);
  if (ref.single_round != 36 || ref.double_masking != 1332) o.fail("forward_pass_counts(36)");
  {
    CountingClassifier c(MeanThreshold{{100, 128, 150}});
    const Image img = oracle::random_image(rng, 224, 224, 3);
    certify(img, Label{2}, set36, c, FillPolicy::zero());
    if (c.calls != 36) o.fail("n=36 set made " + std::to_string(c.calls) + " calls");
  }
  int sets = 1;
  for (Strategy s : {Strategy::kSingle, Strategy::kReplicated, Strategy::kOffset}) {
    for (int i = 0; i < 20; ++i) {
      const TilingConfig cfg = testgen::random_config(rng, s, 40, 6);
      const MaskSet set = build_mask_set(cfg, s);
      CountingClassifier c(MeanThreshold{{100, 150}});
      const Image img = oracle::random_image(rng, cfg.domain.lx, cfg.domain.ly, 1);
      certify(img, Label{1}, set, c, FillPolicy::mean());
      const auto n = static_cast<std::int64_t>(set.size());
      if (c.calls != n) o.fail("set of " + std::to_string(n) + " made " + std::to_string(c.calls));
      const auto model = forward_pass_counts(n);
      if (model.single_round != n || model.double_masking != n + n * n) o.fail("model at n=" + std::to_string(n));
      ++sets;
    }
  }
  o.detail << "n=36: 36 calls vs 1332 modeled; " << sets << " mask sets checked";
}

// certified_accuracy <= clean_accuracy on every random dataset.
void metric_order_criterion(Outcome& o) {
  std::mt19937_64 rng(0x0DE7);
  int datasets = 0, images = 0;
  for (int i = 0; i < 200; ++i) {
    const MaskSet set = i % 2 ? oracle::random_small_mask_set(rng, 8)
                              : build_mask_set(testgen::random_config(rng, Strategy::kOffset, 24, 4),
                                               Strategy::kOffset);
    const auto& d = set.config.domain;
    std::vector<LabeledImage> data;
    const int size = testgen::uniform(rng, 1, 10);
    for (int j = 0; j < size; ++j) {
      data.push_back({oracle::random_image(rng, d.lx, d.ly, 1),
                      Label{static_cast<std::uint32_t>(rng() % 3)}, ""});
    }
    const ClassifierSpec spec = i % 3 == 0 ? ClassifierSpec{ConstantLabel{Label{1}, 3}}
                                           : ClassifierSpec{MeanThreshold{{115, 140}}};
    auto classifier = make_classifier(spec);
    const EvalSummary s = evaluate(data, set, *classifier, FillPolicy::mean());
    ++datasets;
    images += static_cast<int>(s.total);
    if (s.certified_count > s.clean_correct) o.fail("dataset " + std::to_string(i));
  }
  o.detail << datasets << " datasets, " << images << " images";
}

}  // namespace
}  // namespace kcover

int main() {
  using kcover::Outcome;
  struct Criterion {
    const char* name;
    std::function<void(Outcome&)> check;
  };
  const Criterion criteria[] = {
      {"bound formulas", kcover::bounds_criterion},
      {"coverage soundness", kcover::coverage_criterion},
      {"approximation ratio", kcover::ratio_criterion},
      {"neutralization", kcover::neutralization_criterion},
      {"certification soundness", kcover::soundness_criterion},
      {"call counts", kcover::call_count_criterion},
      {"metric ordering", kcover::metric_order_criterion},
  };
  int failed = 0;
  for (const Criterion& c : criteria) {
    Outcome o;
    try {
      c.check(o);
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    std::printf("%s  %-24s %s\n", o.pass ? "PASS" : "FAIL", c.name, o.detail.str().c_str());
    std::fflush(stdout);
    failed += o.pass ? 0 : 1;
  }
  return failed;
}
