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

#include "kcover/tiling.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <string>

#include "kcover/error.hpp"

namespace kcover {
namespace {

std::int64_t ceil_div(std::int64_t a, std::int64_t b) { return (a + b - 1) / b; }

[[noreturn]] void config_error(const std::string& what) {
  throw Error(ErrorKind::kConfig, what);
}

MaskSet make_set(const TilingConfig& config, Strategy strategy) {
  MaskSet set;
  set.config = config;
  set.strategy = strategy;
  return set;
}

}  // namespace

std::string_view to_string(Strategy s) {
  switch (s) {
    case Strategy::kSingle:
      return "single";
    case Strategy::kReplicated:
      return "replicated";
    case Strategy::kOffset:
      return "offset";
  }
  return "unknown";
}

Strategy parse_strategy(std::string_view name) {
  if (name == "single") return Strategy::kSingle;
  if (name == "replicated") return Strategy::kReplicated;
  if (name == "offset") return Strategy::kOffset;
  config_error("unknown strategy '" + std::string(name) + "'");
}

TilingConfig TilingConfig::with_default_folds(DomainSize domain, MaskSpec mask,
                                              PatchSpec patch, int k) {
  if (k < 1) config_error("k must be positive");
  int m = 1;
  for (int d = 1; std::int64_t{d} * d <= k; ++d) {
    if (k % d == 0) m = d;
  }
  return {domain, mask, patch, k, m, k / m};
}

void TilingConfig::validate() const {
  if (k < 1 || m < 1 || n < 1) config_error("k, m and n must be positive");
  if (std::int64_t{m} * n != k) {
    config_error("k must equal m * n (k=" + std::to_string(k) +
                 ", m=" + std::to_string(m) + ", n=" + std::to_string(n) + ")");
  }
  if (mask.mx < patch.px || mask.my < patch.py) {
    config_error("mask cannot cover patch");
  }
  admissible_anchors(domain, patch);
}

void check_mask_set(const MaskSet& set) {
  if (set.placements.empty()) config_error("mask set has no placements");
  const bool wrap = set.strategy == Strategy::kOffset;
  for (const MaskPlacement& p : set.placements) {
    if (p.wrap != wrap) {
      config_error("placement wrap flag does not match strategy '" +
                   std::string(to_string(set.strategy)) + "'");
    }
    if (p.wrap && (p.x0 < 0 || p.x0 >= set.config.domain.lx || p.y0 < 0 ||
                   p.y0 >= set.config.domain.ly)) {
      config_error("wrapped placement is not canonical");
    }
  }
}

Rational Rational::reduced(std::int64_t num, std::int64_t den) {
  if (den == 0) config_error("zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const std::int64_t g = std::gcd(num, den);
  return g == 0 ? Rational{0, 1} : Rational{num / g, den / g};
}

BoundsReport mask_count_bounds(const TilingConfig& config) {
  const std::int64_t ex = config.mask.mx - config.patch.px;
  const std::int64_t ey = config.mask.my - config.patch.py;
  if (ex <= 0 || ey <= 0) config_error("mask cannot cover patch");
  if (config.k < 1 || config.m < 1 || config.n < 1) {
    config_error("k, m and n must be positive");
  }
  const std::int64_t lx = config.domain.lx;
  const std::int64_t ly = config.domain.ly;

  BoundsReport r;
  r.single_lb_x = ceil_div(lx, ex);
  r.single_lb_y = ceil_div(ly, ey);
  r.single_lb_2d = ceil_div(lx * ly, ex * ey);
  r.kfold_lb = config.k * r.single_lb_2d;
  r.replicated_count = config.k * r.single_lb_x * r.single_lb_y;
  r.offset_count = ceil_div(config.m * lx, ex) * ceil_div(config.n * ly, ey);
  r.approx_ratio = Rational::reduced(r.replicated_count, r.kfold_lb);
  return r;
}

std::vector<int> single_cover_1d(int length, int mask, int patch) {
  if (patch < 1 || mask < 1 || length < 1) config_error("extents must be positive");
  if (mask < patch) config_error("mask cannot cover patch");
  if (length < patch) config_error("patch exceeds domain");
  const int step = mask - patch + 1;
  const int count = static_cast<int>(ceil_div(length - patch + 1, step));
  std::vector<int> starts(count);
  for (int i = 0; i < count; ++i) starts[i] = i * step;
  return starts;
}

MaskSet single_cover_2d(const TilingConfig& config) {
  TilingConfig single = config;
  single.k = single.m = single.n = 1;
  single.validate();
  const auto xs = single_cover_1d(config.domain.lx, config.mask.mx, config.patch.px);
  const auto ys = single_cover_1d(config.domain.ly, config.mask.my, config.patch.py);
  MaskSet set = make_set(single, Strategy::kSingle);
  set.placements.reserve(xs.size() * ys.size());
  for (int y : ys) {
    for (int x : xs) set.placements.push_back({x, y, false});
  }
  return set;
}

MaskSet replicated_tiling(const TilingConfig& config) {
  if (config.k < 1) config_error("k must be positive");
  const MaskSet single = single_cover_2d(config);
  MaskSet set = make_set(config, Strategy::kReplicated);
  set.placements.reserve(single.size() * config.k);
  for (int copy = 0; copy < config.k; ++copy) {
    set.placements.insert(set.placements.end(), single.placements.begin(),
                          single.placements.end());
  }
  return set;
}

MaskSet offset_tiling(const TilingConfig& config) {
  config.validate();
  const DomainSize d = config.domain;
  if (config.mask.mx > d.lx || config.mask.my > d.ly) {
    config_error("mask exceeds domain; wrapped tiling needs mask <= domain");
  }
  const int sx = config.effective_x() / config.m;
  const int sy = config.effective_y() / config.n;
  if (sx < 1 || sy < 1) config_error("k too large for mask/patch geometry");

  MaskSet set = make_set(config, Strategy::kOffset);
  set.stride_x = sx;
  set.stride_y = sy;
  const int cols = static_cast<int>(ceil_div(d.lx, sx));
  const int rows = static_cast<int>(ceil_div(d.ly, sy));
  set.placements.reserve(static_cast<std::size_t>(cols) * rows);
  for (int j = 0; j < rows; ++j) {
    for (int i = 0; i < cols; ++i) {
      set.placements.push_back(
          MaskPlacement::canonical(i * sx, j * sy, true, d));
    }
  }
  std::sort(set.placements.begin(), set.placements.end(),
            [](const MaskPlacement& a, const MaskPlacement& b) {
              return a.y0 != b.y0 ? a.y0 < b.y0 : a.x0 < b.x0;
            });
  set.placements.erase(
      std::unique(set.placements.begin(), set.placements.end()),
      set.placements.end());
  return set;
}

MaskSet build_mask_set(const TilingConfig& config, Strategy strategy) {
  switch (strategy) {
    case Strategy::kSingle:
      return single_cover_2d(config);
    case Strategy::kReplicated:
      return replicated_tiling(config);
    case Strategy::kOffset:
      return offset_tiling(config);
  }
  config_error("unknown strategy");
}

ForwardPassCounts forward_pass_counts(std::int64_t n) {
  if (n < 1) config_error("mask count must be positive");
  return {n, n + n * n};
}

const std::vector<Preset>& presets() {
  static const std::vector<Preset> kPresets = {
      {"imagenet-1pct", 32, 23, "1"},     {"imagenet-2pct", 48, 32, "2"},
      {"imagenet-3pct", 56, 39, "3"},     {"imagenette-1pct", 32, 23, "1"},
      {"imagenette-2pct", 48, 32, "2"},   {"imagenette-3pct", 56, 39, "3"},
      {"cifar10-0.4pct", 16, 15, "0.4"},  {"cifar10-2.4pct", 56, 35, "2.4"},
  };
  return kPresets;
}

std::optional<Preset> find_preset(std::string_view name) {
  for (const Preset& p : presets()) {
    if (p.name == name) return p;
  }
  return std::nullopt;
}

int patch_side_for_percent(std::string_view percent, DomainSize domain) {
  // percent = digits / 10^scale
  std::int64_t digits = 0;
  std::int64_t scale = 1;
  bool seen_point = false;
  bool seen_digit = false;
  for (char c : percent) {
    if (c == '.' && !seen_point) {
      seen_point = true;
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      seen_digit = true;
      digits = digits * 10 + (c - '0');
      if (seen_point) scale *= 10;
      if (digits > 1'000'000 || scale > 1'000'000) {
        config_error("patch percentage has too many digits");
      }
    } else {
      config_error("invalid patch percentage '" + std::string(percent) + "'");
    }
  }
  if (!seen_digit || digits == 0) config_error("patch percentage must be positive");
  if (digits > 100 * scale) config_error("patch percentage exceeds 100");
  // s^2 >= digits * lx * ly / (100 * scale)
  const std::int64_t target = digits * domain.pixel_count();
  const std::int64_t den = 100 * scale;
  std::int64_t side = 1;
  while (side * side * den < target) ++side;
  return static_cast<int>(side);
}

}  // namespace kcover
