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

#include "kcover/image.hpp"

#include <string>

#include "kcover/error.hpp"

namespace kcover {
namespace {

void check_same_domain(const Image& image, DomainSize domain) {
  if (image.domain() != domain) {
    throw Error(ErrorKind::kConfig,
                "image is " + std::to_string(image.width()) + "x" +
                    std::to_string(image.height()) +
                    " but mask set domain is " + std::to_string(domain.lx) +
                    "x" + std::to_string(domain.ly));
  }
}

std::vector<std::uint8_t> fill_values(const Image& image,
                                      const std::vector<Rect>& masked,
                                      const FillPolicy& fill) {
  const int channels = image.channels();
  std::vector<std::uint8_t> out(channels, 0);
  switch (fill.mode) {
    case FillPolicy::Mode::kZero:
      break;
    case FillPolicy::Mode::kConstant:
      if (fill.values.size() == 1) {
        out.assign(channels, fill.values[0]);
      } else if (static_cast<int>(fill.values.size()) == channels) {
        out = fill.values;
      } else {
        throw Error(ErrorKind::kConfig,
                    "constant fill needs 1 or " + std::to_string(channels) +
                        " values");
      }
      break;
    case FillPolicy::Mode::kMean: {
      std::vector<std::uint64_t> sums(channels, 0);
      std::uint64_t visible = 0;
      for (int y = 0; y < image.height(); ++y) {
        for (int x = 0; x < image.width(); ++x) {
          bool hidden = false;
          for (const Rect& r : masked) hidden = hidden || r.contains(x, y);
          if (hidden) continue;
          ++visible;
          for (int c = 0; c < channels; ++c) sums[c] += image.at(x, y, c);
        }
      }
      if (visible > 0) {
        for (int c = 0; c < channels; ++c) {
          out[c] = static_cast<std::uint8_t>((2 * sums[c] + visible) / (2 * visible));
        }
      }
      break;
    }
  }
  return out;
}

}  // namespace

Image::Image(int width, int height, int channels)
    : Image(width, height, channels,
            std::vector<std::uint8_t>(
                width > 0 && height > 0 && channels > 0
                    ? static_cast<std::size_t>(width) * height * channels
                    : 0)) {}

Image::Image(int width, int height, int channels,
             std::vector<std::uint8_t> pixels)
    : width_(width), height_(height), channels_(channels),
      pixels_(std::move(pixels)) {
  if (width < 1 || height < 1) {
    throw Error(ErrorKind::kConfig, "image dimensions must be positive");
  }
  if (channels != 1 && channels != 3) {
    throw Error(ErrorKind::kConfig,
                "image must have 1 or 3 channels, got " + std::to_string(channels));
  }
  const std::size_t expected = static_cast<std::size_t>(width) * height * channels;
  if (pixels_.size() != expected) {
    throw Error(ErrorKind::kConfig,
                "pixel buffer has " + std::to_string(pixels_.size()) +
                    " samples, expected " + std::to_string(expected));
  }
}

Image apply_patch(const Image& image, Anchor anchor, PatchSpec patch,
                  const Image& content) {
  if (content.width() != patch.px || content.height() != patch.py ||
      content.channels() != image.channels()) {
    throw Error(ErrorKind::kConfig, "patch content dimensions do not match patch");
  }
  if (!is_admissible(anchor, image.domain(), patch)) {
    throw Error(ErrorKind::kConfig, "patch anchor is not admissible");
  }
  Image out = image;
  const std::size_t row_bytes = static_cast<std::size_t>(patch.px) * image.channels();
  for (int y = 0; y < patch.py; ++y) {
    const auto src = content.pixels().subspan(content.offset(0, y), row_bytes);
    std::copy(src.begin(), src.end(),
              out.mutable_pixels().begin() + out.offset(anchor.ax, anchor.ay + y));
  }
  return out;
}

Image apply_mask(const Image& image, MaskPlacement placement, MaskSpec mask,
                 const FillPolicy& fill) {
  const std::vector<Rect> masked = mask_pixel_set(placement, mask, image.domain());
  const std::vector<std::uint8_t> values = fill_values(image, masked, fill);
  Image out = image;
  const int channels = image.channels();
  for (const Rect& r : masked) {
    for (int y = r.y0; y < r.y1; ++y) {
      for (int x = r.x0; x < r.x1; ++x) {
        for (int c = 0; c < channels; ++c) out.at(x, y, c) = values[c];
      }
    }
  }
  return out;
}

void for_each_masked_view(
    const Image& image, const MaskSet& set, const FillPolicy& fill,
    const std::function<void(std::size_t, const Image&)>& visit) {
  check_same_domain(image, set.config.domain);
  for (std::size_t i = 0; i < set.placements.size(); ++i) {
    visit(i, apply_mask(image, set.placements[i], set.config.mask, fill));
  }
}

std::vector<Image> masked_views(const Image& image, const MaskSet& set,
                                const FillPolicy& fill) {
  check_same_domain(image, set.config.domain);
  std::vector<Image> views;
  views.reserve(set.placements.size());
  for (const MaskPlacement& p : set.placements) {
    views.push_back(apply_mask(image, p, set.config.mask, fill));
  }
  return views;
}

Image crop(const Image& image, Anchor anchor, PatchSpec patch) {
  if (!is_admissible(anchor, image.domain(), patch)) {
    throw Error(ErrorKind::kConfig, "crop region is outside the image");
  }
  Image out(patch.px, patch.py, image.channels());
  for (int y = 0; y < patch.py; ++y) {
    for (int x = 0; x < patch.px; ++x) {
      for (int c = 0; c < image.channels(); ++c) {
        out.at(x, y, c) = image.at(anchor.ax + x, anchor.ay + y, c);
      }
    }
  }
  return out;
}

}  // namespace kcover
