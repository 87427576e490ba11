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

#ifndef KCOVER_CERTIFY_HPP_
#define KCOVER_CERTIFY_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "kcover/classifier.hpp"
#include "kcover/coverage.hpp"
#include "kcover/image.hpp"
#include "kcover/tiling.hpp"

namespace kcover {

// labels[i] is the prediction on the view masked by placement i.
struct PredictionVector {
  std::vector<Label> labels;
};

enum class AggregationRule { kUnanimous, kExactK, kMajority };

std::string_view to_string(AggregationRule rule);

struct AggregationOutcome {
  Label label;
  AggregationRule rule = AggregationRule::kUnanimous;
  bool tie_broken = false;

  friend bool operator==(const AggregationOutcome&, const AggregationOutcome&) = default;
};

// (label, count) pairs, ascending by label, counts > 0.
using LabelCounts = std::vector<std::pair<Label, int>>;

LabelCounts count_labels(std::span<const Label> labels);

// Vote aggregation:
//  1. all labels equal                    -> that label, kUnanimous
//  2. exactly one label has count == k    -> that label, kExactK
//  3. otherwise the most frequent label   -> kMajority; ties go to the
//     smallest label id and set tie_broken
// Rule 2 is skipped when two or more labels have count k.
AggregationOutcome aggregate(std::span<const Label> labels, int k);
AggregationOutcome aggregate_counts(const LabelCounts& counts, int k);

// Runs the classifier once per placement. Errors carry the mask index.
PredictionVector predict_all(const Image& image, const MaskSet& set,
                             Classifier& classifier, const FillPolicy& fill);

AggregationOutcome infer(const Image& image, const MaskSet& set,
                         Classifier& classifier, const FillPolicy& fill);

// A mask set whose k-fold coverage has been checked, with the covering set of
// every admissible anchor precomputed. Construction throws
// Error(kCoverage, "mask set does not k-cover patch") when coverage fails.
class CoveragePlan {
 public:
  explicit CoveragePlan(MaskSet set);

  const MaskSet& mask_set() const { return set_; }
  const CoverageReport& report() const { return report_; }
  const std::vector<Anchor>& anchors() const { return anchors_; }
  // Ascending placement indices covering anchors()[i].
  const std::vector<std::uint32_t>& covering(std::size_t i) const { return covers_[i]; }

 private:
  MaskSet set_;
  CoverageReport report_;
  std::vector<Anchor> anchors_;
  std::vector<std::vector<std::uint32_t>> covers_;
};

enum class AllocationSearch {
  kDominance,   // polynomial family of two-target allocations
  kBruteForce,  // every count vector over all labels; at most 12 free votes
};

struct CertifyOptions {
  AllocationSearch search = AllocationSearch::kDominance;
};

// Label counts of one adversarial configuration at one anchor.
struct VoteAllocation {
  LabelCounts fixed_votes;  // predictions of the masks covering the patch
  LabelCounts free_votes;   // labels the adversary assigns to the others

  friend bool operator==(const VoteAllocation&, const VoteAllocation&) = default;
};

struct CertificationResult {
  bool certified = false;
  Label predicted;  // aggregate over the clean masked views
  std::optional<Anchor> failing_anchor;
  std::optional<VoteAllocation> failing_allocation;
  std::optional<AggregationOutcome> failing_outcome;
  std::size_t masks_evaluated = 0;
  std::int64_t anchors_checked = 0;
};

// Worst-case check given the clean predictions: certified iff the clean
// aggregate is true_label and, at every admissible anchor, no assignment of
// the non-covering masks' votes (labels < num_classes) moves the aggregate
// away from true_label. Covering masks keep their clean votes because the
// patch is entirely hidden from them.
CertificationResult certify_predictions(const PredictionVector& clean,
                                        Label true_label,
                                        const CoveragePlan& plan,
                                        std::uint32_t num_classes,
                                        const CertifyOptions& options = {});

// Searches for an allocation of `free_votes` extra votes that makes the
// aggregate differ from true_label. Exposed for testing.
std::optional<std::pair<LabelCounts, AggregationOutcome>> find_adversarial_allocation(
    const LabelCounts& fixed, int free_votes, Label true_label,
    std::uint32_t num_classes, int k, AllocationSearch search);

CertificationResult certify(const Image& image, Label true_label,
                            const CoveragePlan& plan, Classifier& classifier,
                            const FillPolicy& fill,
                            const CertifyOptions& options = {});

CertificationResult certify(const Image& image, Label true_label,
                            const MaskSet& set, Classifier& classifier,
                            const FillPolicy& fill,
                            const CertifyOptions& options = {});

struct LabeledImage {
  Image image;
  Label label;
  std::string name;
};

struct EvalError {
  std::size_t index = 0;
  std::string name;
  std::string message;
};

struct EvalSummary {
  std::int64_t clean_correct = 0;
  std::int64_t certified_count = 0;
  std::int64_t total = 0;  // images evaluated, excluding errors
  std::vector<EvalError> errors;

  Rational clean_accuracy() const;
  Rational certified_accuracy() const;
};

// Four-decimal rendering of a ratio, e.g. 2/3 -> "0.6667".
std::string format_ratio(Rational r);

// Clean prediction and certification share one pass of n classifier calls
// per image. Images that fail (dimension mismatch, classifier error) are
// excluded and listed in errors.
EvalSummary evaluate(std::span<const LabeledImage> dataset, const MaskSet& set,
                     Classifier& classifier, const FillPolicy& fill,
                     const CertifyOptions& options = {});

}  // namespace kcover

#endif  // KCOVER_CERTIFY_HPP_
