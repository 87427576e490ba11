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

#ifndef KCOVER_TILING_HPP_
#define KCOVER_TILING_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "kcover/geometry.hpp"

namespace kcover {

enum class Strategy { kSingle, kReplicated, kOffset };

std::string_view to_string(Strategy s);
Strategy parse_strategy(std::string_view name);

// Geometry plus the coverage target. k = m * n, where m and n are the
// horizontal and vertical folds used by offset tiling.
struct TilingConfig {
  DomainSize domain;
  MaskSpec mask;
  PatchSpec patch;
  int k = 1;
  int m = 1;
  int n = 1;

  // Splits k into m (largest divisor of k not above sqrt(k)) and n = k / m.
  static TilingConfig with_default_folds(DomainSize domain, MaskSpec mask,
                                         PatchSpec patch, int k);

  // Effective anchor extent of one mask along each axis: mask - patch + 1.
  int effective_x() const { return mask.mx - patch.px + 1; }
  int effective_y() const { return mask.my - patch.py + 1; }

  // Throws Error(kConfig) on k/m/n mismatch or a mask smaller than the patch.
  void validate() const;

  friend bool operator==(const TilingConfig&, const TilingConfig&) = default;
};

struct MaskSet {
  TilingConfig config;
  Strategy strategy = Strategy::kSingle;
  std::vector<MaskPlacement> placements;
  int stride_x = 0;  // offset strategy only
  int stride_y = 0;

  std::size_t size() const { return placements.size(); }
  friend bool operator==(const MaskSet&, const MaskSet&) = default;
};

// Checks the invariants that must hold for any mask set we act on: at least
// one placement and wrap flags consistent with the strategy. Placement counts
// are not checked so that edited mask-set files can still be verified.
void check_mask_set(const MaskSet& set);

struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  static Rational reduced(std::int64_t num, std::int64_t den);
  double value() const { return static_cast<double>(num) / den; }
  friend bool operator==(const Rational&, const Rational&) = default;
};

// Closed-form mask counts, evaluated with the patch extent p standing in for
// the continuous patch width:
//   single_lb_x      = ceil(Lx / (Mx - px))
//   single_lb_2d     = ceil(Lx Ly / ((Mx - px)(My - py)))
//   kfold_lb         = k * single_lb_2d
//   replicated_count = k * ceil(Lx / (Mx - px)) * ceil(Ly / (My - py))
//   offset_count     = ceil(m Lx / (Mx - px)) * ceil(n Ly / (My - py))
struct BoundsReport {
  std::int64_t single_lb_x = 0;
  std::int64_t single_lb_y = 0;
  std::int64_t single_lb_2d = 0;
  std::int64_t kfold_lb = 0;
  std::int64_t replicated_count = 0;
  std::int64_t offset_count = 0;
  Rational approx_ratio;  // replicated_count / kfold_lb

  friend bool operator==(const BoundsReport&, const BoundsReport&) = default;
};

// Requires mx > px and my > py; throws Error("mask cannot cover patch").
BoundsReport mask_count_bounds(const TilingConfig& config);

// Start offsets i * E, E = M - p + 1, for i = 0 .. ceil((L - p + 1) / E) - 1.
// The last mask may extend past L.
std::vector<int> single_cover_1d(int length, int mask, int patch);

// Row-major cartesian product of the per-axis single covers. The returned
// set's config has k = m = n = 1.
MaskSet single_cover_2d(const TilingConfig& config);

// k consecutive copies of the single cover.
MaskSet replicated_tiling(const TilingConfig& config);

// Wrapped grid with strides sx = floor(Ex / m), sy = floor(Ey / n), sorted by
// (y0, x0). Requires the mask to fit in the domain.
MaskSet offset_tiling(const TilingConfig& config);

MaskSet build_mask_set(const TilingConfig& config, Strategy strategy);

struct ForwardPassCounts {
  std::int64_t single_round = 0;    // one masked pass per mask
  std::int64_t double_masking = 0;  // first round plus every pair: n + n^2
};

ForwardPassCounts forward_pass_counts(std::int64_t n);

// Named geometry presets for 224x224 inputs.
struct Preset {
  std::string_view name;
  int mask_side;
  int patch_side;
  std::string_view patch_percent;
};

const std::vector<Preset>& presets();
std::optional<Preset> find_preset(std::string_view name);

// Smallest square side s with s^2 >= pct/100 * lx * ly, computed exactly from
// a decimal string such as "3" or "0.4".
int patch_side_for_percent(std::string_view percent, DomainSize domain);

}  // namespace kcover

#endif  // KCOVER_TILING_HPP_
