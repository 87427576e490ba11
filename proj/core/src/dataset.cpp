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

#include "kcover/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <string>

#include "kcover/error.hpp"
#include "kcover/image_io.hpp"

namespace kcover {
namespace {

std::string trim(std::string s) {
  const auto not_space = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

}  // namespace

Manifest load_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kConfig, "cannot open manifest '" + path.string() + "'");
  const std::filesystem::path base = path.parent_path();

  std::string line;
  if (!std::getline(in, line) || trim(line) != "path,label") {
    throw Error(ErrorKind::kConfig, "manifest header must be 'path,label'");
  }
  Manifest manifest;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty()) continue;
    const auto comma = line.rfind(',');
    if (comma == std::string::npos) {
      throw Error(ErrorKind::kConfig, "manifest row " + std::to_string(row + 1) +
                                          " has no label column");
    }
    const std::string rel = trim(line.substr(0, comma));
    const std::string label_text = trim(line.substr(comma + 1));
    std::uint32_t label = 0;
    try {
      std::size_t used = 0;
      const unsigned long v = std::stoul(label_text, &used);
      if (used != label_text.size() || v > UINT32_MAX) throw std::invalid_argument("label");
      label = static_cast<std::uint32_t>(v);
    } catch (const std::exception&) {
      throw Error(ErrorKind::kConfig, "manifest row " + std::to_string(row + 1) +
                                          ": bad label '" + label_text + "'");
    }
    try {
      manifest.images.push_back({read_image(base / rel), Label{label}, rel});
    } catch (const Error& e) {
      manifest.errors.push_back({row, rel, e.what()});
    }
    ++row;
  }
  return manifest;
}

}  // namespace kcover
