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

#include "kcover/certify.hpp"

#include <algorithm>
#include <cstdio>
#include <map>

#include "kcover/error.hpp"

namespace kcover {
namespace {

constexpr int kMaxBruteForceFreeVotes = 12;
constexpr std::uint64_t kMaxBruteForceVectors = 20'000'000;

void add_votes(LabelCounts& counts, Label label, int votes) {
  if (votes <= 0) return;
  auto it = std::lower_bound(
      counts.begin(), counts.end(), label,
      [](const std::pair<Label, int>& e, Label l) { return e.first < l; });
  if (it != counts.end() && it->first == label) {
    it->second += votes;
  } else {
    counts.insert(it, {label, votes});
  }
}

bool has_label(const LabelCounts& counts, Label label) {
  return std::any_of(counts.begin(), counts.end(),
                     [&](const auto& e) { return e.first == label; });
}

using Found = std::optional<std::pair<LabelCounts, AggregationOutcome>>;

// Labels the adversary needs: every fixed label other than the true one, and
// the two smallest unused labels. Unused labels differ only in id, and a
// smaller id only helps the adversary win majority ties.
std::vector<Label> target_labels(const LabelCounts& fixed, Label true_label,
                                 std::uint32_t num_classes) {
  std::vector<Label> targets;
  for (const auto& [label, count] : fixed) {
    if (label != true_label) targets.push_back(label);
  }
  int fresh = 0;
  for (std::uint32_t id = 0; id < num_classes && fresh < 2; ++id) {
    const Label l{id};
    if (l == true_label || has_label(fixed, l)) continue;
    targets.push_back(l);
    ++fresh;
  }
  return targets;
}

Found try_allocation(const LabelCounts& fixed, const LabelCounts& free_votes,
                     Label true_label, int k) {
  LabelCounts all = fixed;
  for (const auto& [label, votes] : free_votes) add_votes(all, label, votes);
  const AggregationOutcome out = aggregate_counts(all, k);
  if (out.label != true_label) return std::make_pair(free_votes, out);
  return std::nullopt;
}

Found search_dominance(const LabelCounts& fixed, int free, Label true_label,
                       std::uint32_t num_classes, int k) {
  const std::vector<Label> targets = target_labels(fixed, true_label, num_classes);
  for (int to_true = 0; to_true <= free; ++to_true) {
    const int rest = free - to_true;
    if (rest == 0) {
      LabelCounts alloc;
      add_votes(alloc, true_label, to_true);
      if (auto f = try_allocation(fixed, alloc, true_label, k)) return f;
      continue;
    }
    for (std::size_t a = 0; a < targets.size(); ++a) {
      for (std::size_t b = a; b < targets.size(); ++b) {
        // b == a only needs the single split that puts everything on a.
        const int first = b == a ? rest : 0;
        for (int on_a = first; on_a <= rest; ++on_a) {
          LabelCounts alloc;
          add_votes(alloc, true_label, to_true);
          add_votes(alloc, targets[a], on_a);
          add_votes(alloc, targets[b], rest - on_a);
          if (auto f = try_allocation(fixed, alloc, true_label, k)) return f;
        }
      }
    }
  }
  return std::nullopt;
}

std::uint64_t count_vectors(int free, std::uint32_t classes) {
  // C(free + classes - 1, free), saturating.
  long double c = 1;
  for (int i = 1; i <= free; ++i) c = c * (static_cast<long double>(classes) - 1 + i) / i;
  return c > 1e18L ? UINT64_MAX : static_cast<std::uint64_t>(c + 0.5L);
}

bool enumerate_vectors(std::uint32_t label, int left, std::uint32_t classes,
                       LabelCounts& alloc, const LabelCounts& fixed,
                       Label true_label, int k, Found& found) {
  if (label + 1 == classes) {
    LabelCounts full = alloc;
    add_votes(full, Label{label}, left);
    found = try_allocation(fixed, full, true_label, k);
    return found.has_value();
  }
  for (int here = left; here >= 0; --here) {
    LabelCounts next = alloc;
    add_votes(next, Label{label}, here);
    if (enumerate_vectors(label + 1, left - here, classes, next, fixed,
                          true_label, k, found)) {
      return true;
    }
  }
  return false;
}

Found search_brute_force(const LabelCounts& fixed, int free, Label true_label,
                         std::uint32_t num_classes, int k) {
  if (free > kMaxBruteForceFreeVotes) {
    throw Error(ErrorKind::kConfig,
                "brute-force search supports at most 12 free votes, got " +
                    std::to_string(free));
  }
  if (count_vectors(free, num_classes) > kMaxBruteForceVectors) {
    throw Error(ErrorKind::kConfig, "brute-force search space too large");
  }
  Found found;
  LabelCounts alloc;
  enumerate_vectors(0, free, num_classes, alloc, fixed, true_label, k, found);
  return found;
}

}  // namespace

std::string_view to_string(AggregationRule rule) {
  switch (rule) {
    case AggregationRule::kUnanimous:
      return "unanimous";
    case AggregationRule::kExactK:
      return "exact_k";
    case AggregationRule::kMajority:
      return "majority";
  }
  return "unknown";
}

LabelCounts count_labels(std::span<const Label> labels) {
  std::map<Label, int> counts;
  for (Label l : labels) ++counts[l];
  return LabelCounts(counts.begin(), counts.end());
}

AggregationOutcome aggregate_counts(const LabelCounts& counts, int k) {
  if (counts.empty()) {
    throw Error(ErrorKind::kConfig, "cannot aggregate an empty prediction vector");
  }
  if (counts.size() == 1) return {counts.front().first, AggregationRule::kUnanimous, false};

  std::optional<Label> exact;
  int exact_hits = 0;
  for (const auto& [label, count] : counts) {
    if (count == k) {
      ++exact_hits;
      exact = label;
    }
  }
  if (exact_hits == 1) return {*exact, AggregationRule::kExactK, false};

  // counts is ascending by label, so the first maximum is the smallest id.
  auto best = counts.begin();
  int at_max = 0;
  for (auto it = counts.begin(); it != counts.end(); ++it) {
    if (it->second > best->second) {
      best = it;
      at_max = 1;
    } else if (it->second == best->second) {
      ++at_max;
    }
  }
  return {best->first, AggregationRule::kMajority, at_max > 1};
}

AggregationOutcome aggregate(std::span<const Label> labels, int k) {
  return aggregate_counts(count_labels(labels), k);
}

PredictionVector predict_all(const Image& image, const MaskSet& set,
                             Classifier& classifier, const FillPolicy& fill) {
  PredictionVector out;
  out.labels.reserve(set.size());
  for_each_masked_view(image, set, fill, [&](std::size_t i, const Image& view) {
    try {
      out.labels.push_back(classifier.classify(view));
    } catch (const Error& e) {
      throw Error(e.kind(), "mask " + std::to_string(i) + ": " + e.what());
    }
  });
  return out;
}

AggregationOutcome infer(const Image& image, const MaskSet& set,
                         Classifier& classifier, const FillPolicy& fill) {
  return aggregate(predict_all(image, set, classifier, fill).labels, set.config.k);
}

CoveragePlan::CoveragePlan(MaskSet set) : set_(std::move(set)) {
  check_mask_set(set_);
  report_ = verify(set_);
  if (!report_.covered()) {
    throw Error(ErrorKind::kCoverage,
                "mask set does not k-cover patch (min multiplicity " +
                    std::to_string(report_.min_multiplicity) + " < k=" +
                    std::to_string(set_.config.k) + ")");
  }
  const AnchorRect range = admissible_anchors(set_.config.domain, set_.config.patch);
  anchors_.reserve(static_cast<std::size_t>(range.count()));
  covers_.reserve(static_cast<std::size_t>(range.count()));
  for (int ay = range.ay_lo; ay <= range.ay_hi; ++ay) {
    for (int ax = range.ax_lo; ax <= range.ax_hi; ++ax) {
      anchors_.push_back({ax, ay});
      covers_.push_back(covering_set(set_, {ax, ay}));
    }
  }
}

std::optional<std::pair<LabelCounts, AggregationOutcome>> find_adversarial_allocation(
    const LabelCounts& fixed, int free_votes, Label true_label,
    std::uint32_t num_classes, int k, AllocationSearch search) {
  if (free_votes < 0) throw Error(ErrorKind::kConfig, "negative free vote count");
  if (fixed.empty() && free_votes == 0) {
    throw Error(ErrorKind::kConfig, "no votes to aggregate");
  }
  return search == AllocationSearch::kBruteForce
             ? search_brute_force(fixed, free_votes, true_label, num_classes, k)
             : search_dominance(fixed, free_votes, true_label, num_classes, k);
}

CertificationResult certify_predictions(const PredictionVector& clean,
                                        Label true_label,
                                        const CoveragePlan& plan,
                                        std::uint32_t num_classes,
                                        const CertifyOptions& options) {
  const MaskSet& set = plan.mask_set();
  const int k = set.config.k;
  const std::size_t n = set.size();
  if (clean.labels.size() != n) {
    throw Error(ErrorKind::kConfig, "prediction vector length does not match mask set");
  }

  CertificationResult result;
  result.masks_evaluated = n;
  result.anchors_checked = static_cast<std::int64_t>(plan.anchors().size());
  const AggregationOutcome clean_outcome = aggregate(clean.labels, k);
  result.predicted = clean_outcome.label;

  auto split_votes = [&](std::size_t anchor_index) {
    const auto& cover = plan.covering(anchor_index);
    std::vector<Label> fixed, free;
    std::size_t next = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (next < cover.size() && cover[next] == i) {
        fixed.push_back(clean.labels[i]);
        ++next;
      } else {
        free.push_back(clean.labels[i]);
      }
    }
    return std::make_pair(count_labels(fixed), count_labels(free));
  };

  if (clean_outcome.label != true_label) {
    // Leaving the image untouched is itself an admissible attack.
    auto [fixed, free] = split_votes(0);
    result.failing_anchor = plan.anchors().front();
    result.failing_allocation = VoteAllocation{std::move(fixed), std::move(free)};
    result.failing_outcome = clean_outcome;
    return result;
  }

  // Many anchors share the same fixed vote histogram; search each one once.
  std::map<std::pair<LabelCounts, int>, bool> safe;
  for (std::size_t a = 0; a < plan.anchors().size(); ++a) {
    const auto& cover = plan.covering(a);
    std::vector<Label> fixed_labels;
    fixed_labels.reserve(cover.size());
    for (std::uint32_t i : cover) fixed_labels.push_back(clean.labels[i]);
    LabelCounts fixed = count_labels(fixed_labels);
    const int free = static_cast<int>(n - cover.size());

    auto key = std::make_pair(fixed, free);
    if (safe.count(key)) continue;
    auto found = find_adversarial_allocation(fixed, free, true_label, num_classes,
                                             k, options.search);
    if (found) {
      result.failing_anchor = plan.anchors()[a];
      result.failing_allocation = VoteAllocation{std::move(fixed), std::move(found->first)};
      result.failing_outcome = found->second;
      return result;
    }
    safe.emplace(std::move(key), true);
  }
  result.certified = true;
  return result;
}

CertificationResult certify(const Image& image, Label true_label,
                            const CoveragePlan& plan, Classifier& classifier,
                            const FillPolicy& fill, const CertifyOptions& options) {
  const PredictionVector clean = predict_all(image, plan.mask_set(), classifier, fill);
  return certify_predictions(clean, true_label, plan, classifier.num_classes(), options);
}

CertificationResult certify(const Image& image, Label true_label,
                            const MaskSet& set, Classifier& classifier,
                            const FillPolicy& fill, const CertifyOptions& options) {
  const CoveragePlan plan(set);
  return certify(image, true_label, plan, classifier, fill, options);
}

Rational EvalSummary::clean_accuracy() const {
  return total == 0 ? Rational{0, 1} : Rational::reduced(clean_correct, total);
}

Rational EvalSummary::certified_accuracy() const {
  return total == 0 ? Rational{0, 1} : Rational::reduced(certified_count, total);
}

std::string format_ratio(Rational r) {
  // Round half up at four decimals using integer arithmetic.
  const std::int64_t scaled = (r.num * 20000 + r.den) / (2 * r.den);
  char buf[32];
  std::snprintf(buf, sizeof buf, "%lld.%04lld",
                static_cast<long long>(scaled / 10000),
                static_cast<long long>(scaled % 10000));
  return buf;
}

EvalSummary evaluate(std::span<const LabeledImage> dataset, const MaskSet& set,
                     Classifier& classifier, const FillPolicy& fill,
                     const CertifyOptions& options) {
  const CoveragePlan plan(set);
  EvalSummary summary;
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    const LabeledImage& item = dataset[i];
    try {
      const PredictionVector preds = predict_all(item.image, set, classifier, fill);
      const bool clean_ok = aggregate(preds.labels, set.config.k).label == item.label;
      const CertificationResult cert = certify_predictions(
          preds, item.label, plan, classifier.num_classes(), options);
      ++summary.total;
      if (clean_ok) ++summary.clean_correct;
      if (cert.certified) ++summary.certified_count;
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::kCoverage) throw;
      summary.errors.push_back({i, item.name, e.what()});
    }
  }
  return summary;
}

}  // namespace kcover
