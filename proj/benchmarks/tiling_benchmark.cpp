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

#include <benchmark/benchmark.h>

#include "kcover/coverage.hpp"
#include "kcover/tiling.hpp"

namespace kcover {
namespace {

const TilingConfig kImageNet{{224, 224}, {56, 56}, {39, 39}, 6, 3, 2};

void BM_MaskCountBounds(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(mask_count_bounds(kImageNet));
}
BENCHMARK(BM_MaskCountBounds);

void BM_BuildMaskSet(benchmark::State& state) {
  const auto strategy = static_cast<Strategy>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(build_mask_set(kImageNet, strategy));
  state.SetLabel(std::string(to_string(strategy)));
}
BENCHMARK(BM_BuildMaskSet)->DenseRange(0, 2);

void BM_Verify(benchmark::State& state) {
  const MaskSet set = build_mask_set(kImageNet, static_cast<Strategy>(state.range(0)));
  const VerifyOptions options{128, static_cast<unsigned>(state.range(1))};
  for (auto _ : state) benchmark::DoNotOptimize(verify(set, options));
  state.SetLabel(std::string(to_string(set.strategy)) + ", " + std::to_string(set.size()) + " masks");
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(set.size()) * 186 * 186);
}
BENCHMARK(BM_Verify)->ArgsProduct({{0, 1, 2}, {1, 4}})->UseRealTime()->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace kcover
