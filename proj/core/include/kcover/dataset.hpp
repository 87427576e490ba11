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

#ifndef KCOVER_DATASET_HPP_
#define KCOVER_DATASET_HPP_

#include <filesystem>
#include <vector>

#include "kcover/certify.hpp"

namespace kcover {

struct Manifest {
  std::vector<LabeledImage> images;
  std::vector<EvalError> errors;  // rows whose image could not be read
};

// CSV with header `path,label`; paths are relative to the manifest's
// directory. A malformed header or row is a config error; an unreadable image
// is recorded in errors and skipped.
Manifest load_manifest(const std::filesystem::path& path);

}  // namespace kcover

#endif  // KCOVER_DATASET_HPP_
