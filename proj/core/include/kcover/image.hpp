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

#ifndef KCOVER_IMAGE_HPP_
#define KCOVER_IMAGE_HPP_

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "kcover/geometry.hpp"
#include "kcover/tiling.hpp"

namespace kcover {

// 8-bit raster, row-major, channels interleaved. channels is 1 or 3.
class Image {
 public:
  Image() = default;
  Image(int width, int height, int channels);  // zero-filled
  Image(int width, int height, int channels, std::vector<std::uint8_t> pixels);

  int width() const { return width_; }
  int height() const { return height_; }
  int channels() const { return channels_; }
  DomainSize domain() const { return {width_, height_}; }

  std::span<const std::uint8_t> pixels() const { return pixels_; }
  std::span<std::uint8_t> mutable_pixels() { return pixels_; }

  std::size_t offset(int x, int y, int c = 0) const {
    return (static_cast<std::size_t>(y) * width_ + x) * channels_ + c;
  }
  std::uint8_t at(int x, int y, int c = 0) const { return pixels_[offset(x, y, c)]; }
  std::uint8_t& at(int x, int y, int c = 0) { return pixels_[offset(x, y, c)]; }

  friend bool operator==(const Image&, const Image&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  int channels_ = 1;
  std::vector<std::uint8_t> pixels_;
};

// How masked pixels are replaced. kMean uses the per-channel mean (rounded
// to nearest) of the pixels the mask leaves visible, so the fill never
// depends on what is under the mask.
struct FillPolicy {
  enum class Mode { kZero, kConstant, kMean };

  Mode mode = Mode::kZero;
  std::vector<std::uint8_t> values;  // kConstant: one per channel, or one for all

  static FillPolicy zero() { return {}; }
  static FillPolicy constant(std::vector<std::uint8_t> values) {
    return {Mode::kConstant, std::move(values)};
  }
  static FillPolicy mean() { return {Mode::kMean, {}}; }
};

// x' = r * z + (1 - r) * x with r the indicator of the patch rectangle.
// `content` must be px x py with the image's channel count.
Image apply_patch(const Image& image, Anchor anchor, PatchSpec patch,
                  const Image& content);

Image apply_mask(const Image& image, MaskPlacement placement, MaskSpec mask,
                 const FillPolicy& fill);

// One view per placement, in placement order.
std::vector<Image> masked_views(const Image& image, const MaskSet& set,
                                const FillPolicy& fill);

// Streaming form of masked_views; views are produced one at a time.
void for_each_masked_view(
    const Image& image, const MaskSet& set, const FillPolicy& fill,
    const std::function<void(std::size_t index, const Image& view)>& visit);

// The patch-sized region of `image` at `anchor`.
Image crop(const Image& image, Anchor anchor, PatchSpec patch);

}  // namespace kcover

#endif  // KCOVER_IMAGE_HPP_
