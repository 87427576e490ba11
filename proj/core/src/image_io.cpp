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

#include "kcover/image_io.hpp"

#include <array>
#include <cctype>
#include <fstream>
#include <istream>
#include <iterator>
#include <ostream>
#include <string>

#include "kcover/error.hpp"

namespace kcover {
namespace {

[[noreturn]] void io_error(const std::string& what) {
  throw Error(ErrorKind::kIo, what);
}

// Next whitespace-delimited header token, skipping '#' comments.
std::string pnm_token(std::istream& in) {
  std::string token;
  int ch;
  while ((ch = in.get()) != EOF) {
    if (ch == '#') {
      while ((ch = in.get()) != EOF && ch != '\n') {
      }
      continue;
    }
    if (!std::isspace(ch)) break;
  }
  while (ch != EOF && !std::isspace(ch) && ch != '#') {
    token.push_back(static_cast<char>(ch));
    ch = in.get();
  }
  if (ch == '#') in.unget();
  if (token.empty()) io_error("truncated PNM header");
  return token;
}

int pnm_int(std::istream& in, const char* field) {
  const std::string token = pnm_token(in);
  int value = 0;
  for (char c : token) {
    if (!std::isdigit(static_cast<unsigned char>(c)) || value > 100'000'000) {
      io_error(std::string("bad PNM ") + field + " '" + token + "'");
    }
    value = value * 10 + (c - '0');
  }
  return value;
}

Image read_pnm(std::istream& in, int channels) {
  const int width = pnm_int(in, "width");
  const int height = pnm_int(in, "height");
  const int maxval = pnm_int(in, "maxval");
  if (width < 1 || height < 1) io_error("PNM dimensions must be positive");
  if (maxval < 1 || maxval > 255) io_error("only 8-bit PNM (maxval <= 255) is supported");
  // pnm_token consumed exactly one whitespace byte after maxval.
  std::vector<std::uint8_t> pixels(static_cast<std::size_t>(width) * height * channels);
  in.read(reinterpret_cast<char*>(pixels.data()),
          static_cast<std::streamsize>(pixels.size()));
  if (in.gcount() != static_cast<std::streamsize>(pixels.size())) {
    io_error("truncated PNM pixel data");
  }
  return Image(width, height, channels, std::move(pixels));
}

std::uint32_t read_u32_le(const std::array<unsigned char, 12>& b, int at) {
  return std::uint32_t{b[at]} | (std::uint32_t{b[at + 1]} << 8) |
         (std::uint32_t{b[at + 2]} << 16) | (std::uint32_t{b[at + 3]} << 24);
}

void write_u32_le(std::ostream& out, std::uint32_t v) {
  const char bytes[4] = {static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff),
                         static_cast<char>((v >> 16) & 0xff),
                         static_cast<char>((v >> 24) & 0xff)};
  out.write(bytes, 4);
}

Image read_raw(std::istream& in, const std::array<unsigned char, 12>& header) {
  const std::uint32_t width = read_u32_le(header, 0);
  const std::uint32_t height = read_u32_le(header, 4);
  const std::uint32_t channels = read_u32_le(header, 8);
  if (width < 1 || height < 1 || width > 1u << 20 || height > 1u << 20) {
    io_error("raw image has implausible dimensions");
  }
  if (channels != 1 && channels != 3) io_error("raw image must have 1 or 3 channels");
  std::vector<std::uint8_t> pixels(std::size_t{width} * height * channels);
  in.read(reinterpret_cast<char*>(pixels.data()),
          static_cast<std::streamsize>(pixels.size()));
  if (in.gcount() != static_cast<std::streamsize>(pixels.size())) {
    io_error("truncated raw pixel data");
  }
  return Image(static_cast<int>(width), static_cast<int>(height),
               static_cast<int>(channels), std::move(pixels));
}

}  // namespace

void write_pnm(std::ostream& out, const Image& image) {
  out << (image.channels() == 1 ? "P5" : "P6") << '\n'
      << image.width() << ' ' << image.height() << '\n'
      << 255 << '\n';
  out.write(reinterpret_cast<const char*>(image.pixels().data()),
            static_cast<std::streamsize>(image.pixels().size()));
  if (!out) io_error("failed writing PNM");
}

void write_raw(std::ostream& out, const Image& image) {
  write_u32_le(out, static_cast<std::uint32_t>(image.width()));
  write_u32_le(out, static_cast<std::uint32_t>(image.height()));
  write_u32_le(out, static_cast<std::uint32_t>(image.channels()));
  out.write(reinterpret_cast<const char*>(image.pixels().data()),
            static_cast<std::streamsize>(image.pixels().size()));
  if (!out) io_error("failed writing raw image");
}

Image read_image(std::istream& in) {
  std::array<unsigned char, 12> header{};
  in.read(reinterpret_cast<char*>(header.data()), 2);
  if (in.gcount() != 2) io_error("empty or truncated image");
  if (header[0] == 'P' && (header[1] == '5' || header[1] == '6')) {
    const int next = in.peek();
    if (next != EOF && std::isspace(next)) {
      return read_pnm(in, header[1] == '5' ? 1 : 3);
    }
  }
  in.read(reinterpret_cast<char*>(header.data()) + 2, 10);
  if (in.gcount() != 10) io_error("truncated raw image header");
  return read_raw(in, header);
}

Image read_image(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) io_error("cannot open image '" + path.string() + "'");
  try {
    return read_image(in);
  } catch (const Error& e) {
    io_error(path.string() + ": " + e.what());
  }
}

ImageFormat format_for_path(const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  for (char& c : ext) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (ext == ".pgm") return ImageFormat::kPgm;
  if (ext == ".ppm" || ext == ".pnm") return ImageFormat::kPpm;
  return ImageFormat::kRaw;
}

void write_image(const std::filesystem::path& path, const Image& image,
                 ImageFormat format) {
  std::ofstream out(path, std::ios::binary);
  if (!out) io_error("cannot open '" + path.string() + "' for writing");
  if (format == ImageFormat::kRaw) {
    write_raw(out, image);
    return;
  }
  const int want = format == ImageFormat::kPgm ? 1 : 3;
  if (image.channels() != want) {
    io_error("PGM holds 1 channel and PPM 3; image has " +
             std::to_string(image.channels()));
  }
  write_pnm(out, image);
}

}  // namespace kcover
