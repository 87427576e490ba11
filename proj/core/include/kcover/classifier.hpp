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

#ifndef KCOVER_CLASSIFIER_HPP_
#define KCOVER_CLASSIFIER_HPP_

#include <chrono>
#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "kcover/image.hpp"

namespace kcover {

struct Label {
  std::uint32_t id = 0;

  friend auto operator<=>(const Label&, const Label&) = default;
};

// Buckets the global mean sample value: the label is the number of
// thresholds t with t <= mean. Thresholds must be strictly increasing.
struct MeanThreshold {
  std::vector<double> thresholds;
};

// Maps the FNV-1a digest of the exact pixel bytes to a label.
struct LookupTable {
  std::map<std::uint64_t, Label> table;
  Label fallback;
  std::uint32_t classes = 0;  // 0: one more than the largest label used
};

struct ConstantLabel {
  Label label;
  std::uint32_t classes = 0;  // 0: label + 1
};

// A child process speaking the line-delimited JSON protocol on stdin/stdout.
struct ExternalCommand {
  std::vector<std::string> argv;
  std::chrono::milliseconds timeout{10'000};
};

using ClassifierSpec =
    std::variant<MeanThreshold, LookupTable, ConstantLabel, ExternalCommand>;

// Throws Error(kConfig) if the spec breaks its invariants.
void validate(const ClassifierSpec& spec);

class Classifier {
 public:
  virtual ~Classifier() = default;

  virtual Label classify(const Image& image) = 0;

  // Labels are always < num_classes().
  virtual std::uint32_t num_classes() const = 0;
};

std::unique_ptr<Classifier> make_classifier(const ClassifierSpec& spec);

// One-shot helpers. For external specs each call starts a fresh process.
Label classify(const ClassifierSpec& spec, const Image& image);
std::vector<Label> classify_batch(const ClassifierSpec& spec,
                                  std::span<const Image> images);
std::vector<Label> classify_batch(Classifier& classifier,
                                  std::span<const Image> images);

// 64-bit FNV-1a over the raw bytes.
std::uint64_t fnv1a64(std::span<const std::uint8_t> bytes);
inline std::uint64_t image_digest(const Image& image) {
  return fnv1a64(image.pixels());
}

Label mean_threshold_label(const MeanThreshold& spec, const Image& image);

}  // namespace kcover

#endif  // KCOVER_CLASSIFIER_HPP_
