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

#include "kcover/geometry.hpp"

#include <algorithm>
#include <string>

#include "kcover/error.hpp"

namespace kcover {
namespace {

void require_positive(int a, int b, const char* what) {
  if (a < 1 || b < 1) {
    throw Error(ErrorKind::kConfig, std::string(what) + " must be at least 1x1, got " +
                                        std::to_string(a) + "x" +
                                        std::to_string(b));
  }
}

int floor_mod(int v, int m) {
  const int r = v % m;
  return r < 0 ? r + m : r;
}

struct Segment {
  int lo;  // inclusive
  int hi;  // exclusive
};

// Pieces of a toroidal 1-D mask [x0, x0+m) on an axis of length len.
std::vector<Segment> wrapped_segments(int x0, int m, int len) {
  const int start = floor_mod(x0, len);
  const int width = std::min(m, len);
  if (width == len) return {{0, len}};
  if (start + width <= len) return {{start, start + width}};
  return {{start, len}, {0, start + width - len}};
}

struct AnchorSpan {
  int lo;  // inclusive
  int hi;  // inclusive
};

// Admissible 1-D anchors whose patch [a, a+p) lies inside the mask.
std::vector<AnchorSpan> axis_anchor_spans(int x0, int m, int p, int len,
                                          bool wrap) {
  std::vector<AnchorSpan> out;
  if (m < p) return out;
  const int last_admissible = len - p;
  auto push = [&](int lo, int hi) {
    lo = std::max(lo, 0);
    hi = std::min(hi, last_admissible);
    if (lo <= hi) out.push_back({lo, hi});
  };
  if (!wrap) {
    push(x0, x0 + m - p);
    return out;
  }
  for (const Segment& s : wrapped_segments(x0, m, len)) push(s.lo, s.hi - p);
  std::sort(out.begin(), out.end(),
            [](const AnchorSpan& a, const AnchorSpan& b) { return a.lo < b.lo; });
  return out;
}

// Patch [a, a+p) inside the toroidal mask starting at x0 with extent m.
bool axis_wrapped_contains(int x0, int m, int a, int p, int len) {
  if (m >= len) return true;
  const int offset = floor_mod(a - x0, len);
  return offset + p <= m;
}

}  // namespace

DomainSize::DomainSize(int lx_in, int ly_in) : lx(lx_in), ly(ly_in) {
  require_positive(lx, ly, "domain");
}

PatchSpec::PatchSpec(int px_in, int py_in) : px(px_in), py(py_in) {
  require_positive(px, py, "patch");
}

MaskSpec::MaskSpec(int mx_in, int my_in) : mx(mx_in), my(my_in) {
  require_positive(mx, my, "mask");
}

MaskPlacement MaskPlacement::canonical(int x0, int y0, bool wrap,
                                       DomainSize domain) {
  if (!wrap) return {x0, y0, false};
  return {floor_mod(x0, domain.lx), floor_mod(y0, domain.ly), true};
}

AnchorRect admissible_anchors(DomainSize domain, PatchSpec patch) {
  if (patch.px > domain.lx || patch.py > domain.ly) {
    throw Error(ErrorKind::kConfig, "patch exceeds domain");
  }
  return {0, domain.lx - patch.px, 0, domain.ly - patch.py};
}

bool is_admissible(Anchor anchor, DomainSize domain, PatchSpec patch) {
  return anchor.ax >= 0 && anchor.ay >= 0 &&
         anchor.ax + patch.px <= domain.lx && anchor.ay + patch.py <= domain.ly;
}

std::vector<Rect> mask_pixel_set(MaskPlacement placement, MaskSpec mask,
                                 DomainSize domain) {
  if (!placement.wrap) {
    Rect r{std::max(placement.x0, 0), std::max(placement.y0, 0),
           std::min(placement.x0 + mask.mx, domain.lx),
           std::min(placement.y0 + mask.my, domain.ly)};
    if (r.empty()) r = Rect{};
    return {r};
  }
  std::vector<Rect> out;
  for (const Segment& ys : wrapped_segments(placement.y0, mask.my, domain.ly)) {
    for (const Segment& xs :
         wrapped_segments(placement.x0, mask.mx, domain.lx)) {
      out.push_back({xs.lo, ys.lo, xs.hi, ys.hi});
    }
  }
  return out;
}

bool fully_covers(MaskPlacement placement, MaskSpec mask, Anchor anchor,
                  PatchSpec patch, DomainSize domain) {
  if (!placement.wrap) {
    return placement.x0 <= anchor.ax &&
           anchor.ax + patch.px <= placement.x0 + mask.mx &&
           placement.y0 <= anchor.ay &&
           anchor.ay + patch.py <= placement.y0 + mask.my;
  }
  return axis_wrapped_contains(placement.x0, mask.mx, anchor.ax, patch.px,
                               domain.lx) &&
         axis_wrapped_contains(placement.y0, mask.my, anchor.ay, patch.py,
                               domain.ly);
}

std::vector<AnchorRect> effective_anchor_region(MaskPlacement placement,
                                                MaskSpec mask, PatchSpec patch,
                                                DomainSize domain) {
  std::vector<AnchorRect> out;
  const auto xs = axis_anchor_spans(placement.x0, mask.mx, patch.px, domain.lx,
                                    placement.wrap);
  const auto ys = axis_anchor_spans(placement.y0, mask.my, patch.py, domain.ly,
                                    placement.wrap);
  for (const AnchorSpan& y : ys) {
    for (const AnchorSpan& x : xs) out.push_back({x.lo, x.hi, y.lo, y.hi});
  }
  return out;
}

}  // namespace kcover
