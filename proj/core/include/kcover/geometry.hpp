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

#ifndef KCOVER_GEOMETRY_HPP_
#define KCOVER_GEOMETRY_HPP_

#include <compare>
#include <cstdint>
#include <vector>

namespace kcover {

// Image domain of lx columns by ly rows. Pixels are addressed 0..lx-1,
// 0..ly-1.
struct DomainSize {
  int lx = 1;
  int ly = 1;

  DomainSize() = default;
  DomainSize(int lx, int ly);

  std::int64_t pixel_count() const { return std::int64_t{lx} * ly; }
  friend bool operator==(const DomainSize&, const DomainSize&) = default;
};

// Adversarial patch extent in pixels.
struct PatchSpec {
  int px = 1;
  int py = 1;

  PatchSpec() = default;
  PatchSpec(int px, int py);

  friend bool operator==(const PatchSpec&, const PatchSpec&) = default;
};

// Mask extent in pixels.
struct MaskSpec {
  int mx = 1;
  int my = 1;

  MaskSpec() = default;
  MaskSpec(int mx, int my);

  friend bool operator==(const MaskSpec&, const MaskSpec&) = default;
};

// Top-left pixel of a patch position.
struct Anchor {
  int ax = 0;
  int ay = 0;

  friend auto operator<=>(const Anchor&, const Anchor&) = default;
};

// Top-left corner of a mask. Non-wrapped placements may hang off any edge of
// the domain; wrapped placements are toroidal and always stored with
// 0 <= x0 < lx, 0 <= y0 < ly (see canonical()).
struct MaskPlacement {
  int x0 = 0;
  int y0 = 0;
  bool wrap = false;

  static MaskPlacement canonical(int x0, int y0, bool wrap, DomainSize domain);

  friend auto operator<=>(const MaskPlacement&, const MaskPlacement&) = default;
};

// Half-open pixel rectangle [x0, x1) x [y0, y1).
struct Rect {
  int x0 = 0;
  int y0 = 0;
  int x1 = 0;
  int y1 = 0;

  bool empty() const { return x1 <= x0 || y1 <= y0; }
  std::int64_t area() const {
    return empty() ? 0 : std::int64_t{x1 - x0} * (y1 - y0);
  }
  bool contains(int x, int y) const {
    return x >= x0 && x < x1 && y >= y0 && y < y1;
  }
  friend bool operator==(const Rect&, const Rect&) = default;
};

// Inclusive anchor ranges [ax_lo, ax_hi] x [ay_lo, ay_hi].
struct AnchorRect {
  int ax_lo = 0;
  int ax_hi = -1;
  int ay_lo = 0;
  int ay_hi = -1;

  bool empty() const { return ax_hi < ax_lo || ay_hi < ay_lo; }
  std::int64_t count() const {
    return empty() ? 0
                   : std::int64_t{ax_hi - ax_lo + 1} * (ay_hi - ay_lo + 1);
  }
  bool contains(Anchor a) const {
    return a.ax >= ax_lo && a.ax <= ax_hi && a.ay >= ay_lo && a.ay <= ay_hi;
  }
  friend bool operator==(const AnchorRect&, const AnchorRect&) = default;
};

// All patch positions that keep the patch inside the domain:
// [0, lx-px] x [0, ly-py]. Throws Error("patch exceeds domain") otherwise.
AnchorRect admissible_anchors(DomainSize domain, PatchSpec patch);

bool is_admissible(Anchor anchor, DomainSize domain, PatchSpec patch);

// Pixels zeroed by a mask, clipped to the domain. A non-wrapped placement
// yields exactly one (possibly empty) rectangle. A wrapped placement is split
// at the domain seams into up to four non-empty, pairwise disjoint pieces.
std::vector<Rect> mask_pixel_set(MaskPlacement placement, MaskSpec mask,
                                 DomainSize domain);

// True iff every pixel of the patch at `anchor` is masked by `placement`.
bool fully_covers(MaskPlacement placement, MaskSpec mask, Anchor anchor,
                  PatchSpec patch, DomainSize domain);

// The admissible anchors for which fully_covers() holds, as at most four
// disjoint rectangles. Empty if the mask is smaller than the patch.
std::vector<AnchorRect> effective_anchor_region(MaskPlacement placement,
                                                MaskSpec mask, PatchSpec patch,
                                                DomainSize domain);

}  // namespace kcover

#endif  // KCOVER_GEOMETRY_HPP_
