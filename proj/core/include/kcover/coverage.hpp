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

#ifndef KCOVER_COVERAGE_HPP_
#define KCOVER_COVERAGE_HPP_

#include <cstddef>
#include <cstdint>
#include <map>
#include <vector>

#include "kcover/geometry.hpp"
#include "kcover/tiling.hpp"

namespace kcover {

struct CoverageReport {
  int k = 1;  // target multiplicity taken from the mask set
  int min_multiplicity = 0;
  int max_multiplicity = 0;
  std::map<int, std::int64_t> histogram;  // multiplicity -> anchor count
  std::vector<Anchor> gaps;               // first gap_limit anchors below k
  std::int64_t gap_count = 0;             // exact, never capped
  std::int64_t anchors_checked = 0;

  bool covered() const { return min_multiplicity >= k; }
  friend bool operator==(const CoverageReport&, const CoverageReport&) = default;
};

struct VerifyOptions {
  std::size_t gap_limit = 128;
  unsigned jobs = 1;
};

// Exhaustive check: for every admissible anchor, count the placements that
// fully cover the patch there. Anchors are visited in row-major order
// (ay outer), so the gap list is deterministic for any job count.
CoverageReport verify(const MaskSet& set, const VerifyOptions& options = {});

// Indices of the placements that fully cover the patch at `anchor`, ascending.
std::vector<std::uint32_t> covering_set(const MaskSet& set, Anchor anchor);

}  // namespace kcover

#endif  // KCOVER_COVERAGE_HPP_
