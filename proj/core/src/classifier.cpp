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

#include "kcover/classifier.hpp"

#include <algorithm>
#include <string>

#include "kcover/error.hpp"
#include "kcover/external_classifier.hpp"

namespace kcover {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

[[noreturn]] void config_error(const std::string& what) {
  throw Error(ErrorKind::kConfig, what);
}

std::uint32_t lookup_classes(const LookupTable& spec) {
  if (spec.classes != 0) return spec.classes;
  std::uint32_t top = spec.fallback.id;
  for (const auto& [digest, label] : spec.table) top = std::max(top, label.id);
  return top + 1;
}

class MeanThresholdClassifier : public Classifier {
 public:
  explicit MeanThresholdClassifier(MeanThreshold spec) : spec_(std::move(spec)) {}
  Label classify(const Image& image) override {
    return mean_threshold_label(spec_, image);
  }
  std::uint32_t num_classes() const override {
    return static_cast<std::uint32_t>(spec_.thresholds.size() + 1);
  }

 private:
  MeanThreshold spec_;
};

class LookupTableClassifier : public Classifier {
 public:
  explicit LookupTableClassifier(LookupTable spec)
      : spec_(std::move(spec)), classes_(lookup_classes(spec_)) {}
  Label classify(const Image& image) override {
    const auto it = spec_.table.find(image_digest(image));
    return it == spec_.table.end() ? spec_.fallback : it->second;
  }
  std::uint32_t num_classes() const override { return classes_; }

 private:
  LookupTable spec_;
  std::uint32_t classes_;
};

class ConstantClassifier : public Classifier {
 public:
  explicit ConstantClassifier(ConstantLabel spec) : spec_(spec) {}
  Label classify(const Image&) override { return spec_.label; }
  std::uint32_t num_classes() const override {
    return spec_.classes != 0 ? spec_.classes : spec_.label.id + 1;
  }

 private:
  ConstantLabel spec_;
};

}  // namespace

void validate(const ClassifierSpec& spec) {
  std::visit(
      Overloaded{
          [](const MeanThreshold& s) {
            for (std::size_t i = 1; i < s.thresholds.size(); ++i) {
              if (!(s.thresholds[i - 1] < s.thresholds[i])) {
                config_error("mean thresholds must be strictly increasing");
              }
            }
          },
          [](const LookupTable& s) {
            if (s.classes == 0) return;
            if (s.fallback.id >= s.classes) {
              config_error("lookup default label exceeds class count");
            }
            for (const auto& [digest, label] : s.table) {
              if (label.id >= s.classes) {
                config_error("lookup label " + std::to_string(label.id) +
                             " exceeds class count");
              }
            }
          },
          [](const ConstantLabel& s) {
            if (s.classes != 0 && s.label.id >= s.classes) {
              config_error("constant label exceeds class count");
            }
          },
          [](const ExternalCommand& s) {
            if (s.argv.empty()) config_error("external classifier needs a command");
            if (s.timeout.count() <= 0) config_error("external timeout must be positive");
          },
      },
      spec);
}

std::unique_ptr<Classifier> make_classifier(const ClassifierSpec& spec) {
  validate(spec);
  return std::visit(
      Overloaded{
          [](const MeanThreshold& s) -> std::unique_ptr<Classifier> {
            return std::make_unique<MeanThresholdClassifier>(s);
          },
          [](const LookupTable& s) -> std::unique_ptr<Classifier> {
            return std::make_unique<LookupTableClassifier>(s);
          },
          [](const ConstantLabel& s) -> std::unique_ptr<Classifier> {
            return std::make_unique<ConstantClassifier>(s);
          },
          [](const ExternalCommand& s) -> std::unique_ptr<Classifier> {
            return std::make_unique<ExternalClassifier>(s.argv, s.timeout);
          },
      },
      spec);
}

Label classify(const ClassifierSpec& spec, const Image& image) {
  return make_classifier(spec)->classify(image);
}

std::vector<Label> classify_batch(Classifier& classifier,
                                  std::span<const Image> images) {
  std::vector<Label> out;
  out.reserve(images.size());
  for (std::size_t i = 0; i < images.size(); ++i) {
    try {
      out.push_back(classifier.classify(images[i]));
    } catch (const Error& e) {
      throw Error(e.kind(), "image " + std::to_string(i) + ": " + e.what());
    }
  }
  return out;
}

std::vector<Label> classify_batch(const ClassifierSpec& spec,
                                  std::span<const Image> images) {
  auto classifier = make_classifier(spec);
  return classify_batch(*classifier, images);
}

std::uint64_t fnv1a64(std::span<const std::uint8_t> bytes) {
  std::uint64_t hash = 14695981039346656037ull;
  for (std::uint8_t b : bytes) {
    hash ^= b;
    hash *= 1099511628211ull;
  }
  return hash;
}

Label mean_threshold_label(const MeanThreshold& spec, const Image& image) {
  std::uint64_t sum = 0;
  for (std::uint8_t v : image.pixels()) sum += v;
  const double count = static_cast<double>(image.pixels().size());
  const double total = static_cast<double>(sum);
  std::uint32_t label = 0;
  for (double t : spec.thresholds) {
    if (t * count <= total) ++label;
  }
  return Label{label};
}

}  // namespace kcover
