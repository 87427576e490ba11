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

#ifndef KCOVER_TESTS_ATTACK_HPP_
#define KCOVER_TESTS_ATTACK_HPP_

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <stdexcept>
#include <utility>
#include <vector>

#include "kcover/certify.hpp"
#include "kcover/classifier.hpp"
#include "kcover/coverage.hpp"
#include "kcover/image.hpp"
#include "generators.hpp"
#include "oracles.hpp"

namespace kcover::oracle {

struct SmallInstance {
  MaskSet set;
  Image image;
  LookupTable table;  // labels of the clean masked views
  Label truth;
};

// Up to `max_masks` random placements on a domain of at most 16x16, with k
// set to some value the placements actually reach.
inline MaskSet random_small_mask_set(std::mt19937_64& rng, int max_masks) {
  for (;;) {
    const DomainSize d(testgen::uniform(rng, 3, 16), testgen::uniform(rng, 3, 16));
    const PatchSpec patch(testgen::uniform(rng, 1, std::min(4, d.lx)),
                          testgen::uniform(rng, 1, std::min(4, d.ly)));
    const MaskSpec mask(testgen::uniform(rng, patch.px, d.lx),
                        testgen::uniform(rng, patch.py, d.ly));
    const bool wrap = rng() % 3 == 0;
    MaskSet set;
    set.strategy = wrap ? Strategy::kOffset : Strategy::kReplicated;
    const int n = testgen::uniform(rng, 1, max_masks);
    for (int i = 0; i < n; ++i) {
      const int x0 = testgen::uniform(rng, 0, d.lx - (wrap ? 1 : std::min(mask.mx, d.lx)));
      const int y0 = testgen::uniform(rng, 0, d.ly - (wrap ? 1 : std::min(mask.my, d.ly)));
      set.placements.push_back({x0, y0, wrap});
    }
    set.config = {d, mask, patch, 1, 1, 1};
    const int reach = verify(set).min_multiplicity;
    if (reach < 1) continue;
    const int k = testgen::uniform(rng, 1, reach);
    set.config.k = k;
    set.config.n = k;
    return set;
  }
}

// Clean views are labelled mostly with the truth so that a fair share of the
// instances certify.
inline SmallInstance random_small_instance(std::mt19937_64& rng, int max_masks,
                                           std::uint32_t classes) {
  SmallInstance inst;
  inst.set = random_small_mask_set(rng, max_masks);
  const auto& d = inst.set.config.domain;
  inst.image = random_image(rng, d.lx, d.ly, rng() % 2 ? 3 : 1);
  inst.truth = Label{static_cast<std::uint32_t>(rng() % classes)};
  inst.table.classes = classes;
  inst.table.fallback = inst.truth;
  const int noise = testgen::uniform(rng, 0, 4);
  for (const Image& view : masked_views(inst.image, inst.set, FillPolicy::zero())) {
    Label l = inst.truth;
    if (testgen::uniform(rng, 0, 9) < noise) l = Label{static_cast<std::uint32_t>(rng() % classes)};
    inst.table.table.emplace(image_digest(view), l);
  }
  return inst;
}

struct AttackResult {
  Anchor anchor;
  std::vector<Label> votes;
};

// Places hostile content at every admissible anchor and lets the classifier
// answer anything (labels < classes) on every masked view it has not seen
// before. Views already in the table keep their label. Returns the first
// labelling that moves the aggregate off the truth. Each winning labelling,
// and one labelling per anchor, is replayed end to end through infer() with
// the extended table.
inline std::optional<AttackResult> simulate_attack(const SmallInstance& inst,
                                                   const FillPolicy& fill,
                                                   std::int64_t* replays = nullptr) {
  const MaskSet& set = inst.set;
  const auto& c = set.config;
  const std::uint32_t classes = inst.table.classes;
  const std::vector<Image> clean_views = masked_views(inst.image, set, fill);
  // (fixed labels sorted, number of distinct attacker-controlled views) -> safe
  std::map<std::pair<std::vector<Label>, int>, bool> memo;

  for (int ay = 0; ay + c.patch.py <= c.domain.ly; ++ay) {
    for (int ax = 0; ax + c.patch.px <= c.domain.lx; ++ax) {
      const Anchor a{ax, ay};
      const Image attacked = apply_patch(inst.image, a, c.patch, hostile_content(inst.image, a, c.patch));
      const std::vector<Image> views = masked_views(attacked, set, fill);

      std::vector<Label> votes(set.size());
      std::vector<std::uint64_t> free_digests;
      std::vector<int> slot(set.size(), -1);
      std::vector<Label> fixed;
      for (std::size_t i = 0; i < set.size(); ++i) {
        const bool covered = kcover::fully_covers(set.placements[i], c.mask, a, c.patch, c.domain);
        if (covered && views[i] != clean_views[i]) {
          throw std::logic_error("covered view changed under the patch");
        }
        const std::uint64_t digest = image_digest(views[i]);
        const auto known = inst.table.table.find(digest);
        if (known != inst.table.table.end()) {
          votes[i] = known->second;
          fixed.push_back(votes[i]);
          continue;
        }
        auto it = std::find(free_digests.begin(), free_digests.end(), digest);
        slot[i] = static_cast<int>(it - free_digests.begin());
        if (it == free_digests.end()) free_digests.push_back(digest);
      }
      std::sort(fixed.begin(), fixed.end());
      const int d = static_cast<int>(free_digests.size());
      auto key = std::make_pair(fixed, d);
      const bool seen = memo.count(key) > 0;

      auto replay = [&](const std::vector<Label>& assign) {
        LookupTable extended = inst.table;
        for (int j = 0; j < d; ++j) extended.table[free_digests[j]] = assign[j];
        const auto classifier = make_classifier(extended);
        if (replays) ++*replays;
        return infer(attacked, set, *classifier, fill).label;
      };

      std::optional<AttackResult> found;
      bool replayed = false;
      for_each_assignment(d, classes, [&](const std::vector<Label>& assign) {
        for (std::size_t i = 0; i < set.size(); ++i) {
          if (slot[i] >= 0) votes[i] = assign[slot[i]];
        }
        const Label got = aggregate(votes, c.k).label;
        if (!replayed) {
          replayed = true;
          if (replay(assign) != got) throw std::logic_error("replay disagrees with vote model");
        }
        if (got != inst.truth) {
          if (replay(assign) != got) throw std::logic_error("replay disagrees with vote model");
          found = AttackResult{a, votes};
          return false;
        }
        return !seen;
      });
      if (found) return found;
      memo[key] = true;
    }
  }
  return std::nullopt;
}

}  // namespace kcover::oracle

#endif  // KCOVER_TESTS_ATTACK_HPP_
