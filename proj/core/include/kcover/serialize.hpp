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

#ifndef KCOVER_SERIALIZE_HPP_
#define KCOVER_SERIALIZE_HPP_

#include <nlohmann/json.hpp>

#include "kcover/certify.hpp"
#include "kcover/classifier.hpp"
#include "kcover/coverage.hpp"
#include "kcover/tiling.hpp"

namespace kcover {

using Json = nlohmann::ordered_json;

inline constexpr int kMaskSetVersion = 1;

// {version, domain:{lx,ly}, mask:{mx,my}, patch:{px,py}, k, m, n, strategy,
//  stride_x, stride_y, placements:[{x0,y0,wrap}...]}
Json to_json(const MaskSet& set);
// Validates geometry and wrap flags (check_mask_set) but keeps the placement
// list exactly as stored.
MaskSet mask_set_from_json(const Json& doc);

Json to_json(const CoverageReport& report);
Json to_json(const BoundsReport& report);
Json to_json(const TilingConfig& config);
Json to_json(const ForwardPassCounts& counts);
Json to_json(const AggregationOutcome& outcome);
Json to_json(const CertificationResult& result);
Json to_json(const EvalSummary& summary);

// Lookup-table classifier file:
//   {"classes": K, "default": L, "entries": {"<16 hex digits>": L, ...}}
LookupTable lookup_table_from_json(const Json& doc);
Json to_json(const LookupTable& table);

}  // namespace kcover

#endif  // KCOVER_SERIALIZE_HPP_
