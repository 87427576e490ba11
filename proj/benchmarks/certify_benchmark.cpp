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

#include <random>

#include <benchmark/benchmark.h>

#include "kcover/certify.hpp"

namespace kcover {
namespace {

Image noise(int w, int h, int channels, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Image img(w, h, channels);
  for (auto& v : img.mutable_pixels()) v = static_cast<std::uint8_t>(rng());
  return img;
}

void BM_Aggregate(benchmark::State& state) {
  std::mt19937_64 rng(1);
  std::vector<Label> labels(static_cast<std::size_t>(state.range(0)));
  for (auto& l : labels) l = Label{static_cast<std::uint32_t>(rng() % 10)};
  for (auto _ : state) benchmark::DoNotOptimize(aggregate(labels, 6));
}
BENCHMARK(BM_Aggregate)->Arg(36)->Arg(950);

void BM_ApplyMask(benchmark::State& state) {
  const Image img = noise(224, 224, 3, 2);
  const FillPolicy fill = state.range(0) ? FillPolicy::mean() : FillPolicy::zero();
  for (auto _ : state) {
    benchmark::DoNotOptimize(apply_mask(img, {200, 200, true}, MaskSpec(56, 56), fill));
  }
}
BENCHMARK(BM_ApplyMask)->Arg(0)->Arg(1);

void BM_AllocationSearch(benchmark::State& state) {
  const LabelCounts fixed{{Label{0}, 6}, {Label{1}, 2}};
  const auto search = static_cast<AllocationSearch>(state.range(1));
  for (auto _ : state) {
    benchmark::DoNotOptimize(find_adversarial_allocation(
        fixed, static_cast<int>(state.range(0)), Label{0}, 4, 6, search));
  }
}
BENCHMARK(BM_AllocationSearch)->ArgsProduct({{4, 8, 12}, {0, 1}});

void BM_CertifyImageNetOffset(benchmark::State& state) {
  const MaskSet set = offset_tiling({{224, 224}, {56, 56}, {39, 39}, 6, 3, 2});
  const CoveragePlan plan(set);
  const Image img = noise(224, 224, 3, 3);
  auto classifier = make_classifier(ConstantLabel{Label{1}, 10});
  for (auto _ : state) {
    benchmark::DoNotOptimize(certify(img, Label{1}, plan, *classifier, FillPolicy::zero()));
  }
  state.SetLabel(std::to_string(set.size()) + " masks");
}
BENCHMARK(BM_CertifyImageNetOffset)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace kcover
