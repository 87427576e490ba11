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

#ifndef KCOVER_IMAGE_IO_HPP_
#define KCOVER_IMAGE_IO_HPP_

#include <filesystem>
#include <iosfwd>

#include "kcover/image.hpp"

namespace kcover {

enum class ImageFormat { kPgm, kPpm, kRaw };

// Binary PGM (P5) for 1 channel, PPM (P6) for 3. Maxval is written as 255.
void write_pnm(std::ostream& out, const Image& image);

// Raw: width, height, channels as little-endian uint32, then the samples.
void write_raw(std::ostream& out, const Image& image);

// Detects P5/P6 by magic, anything else is parsed as raw. PNM maxval must be
// in [1, 255]; samples are kept as stored.
Image read_image(std::istream& in);
Image read_image(const std::filesystem::path& path);

void write_image(const std::filesystem::path& path, const Image& image,
                 ImageFormat format);

// .pgm/.ppm/.pnm select PNM, everything else raw.
ImageFormat format_for_path(const std::filesystem::path& path);

}  // namespace kcover

#endif  // KCOVER_IMAGE_IO_HPP_
