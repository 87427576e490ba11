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

#ifndef KCOVER_ERROR_HPP_
#define KCOVER_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace kcover {

// Broad classes of failure. The CLI maps kConfig to exit code 2.
enum class ErrorKind {
  kConfig,    // invalid geometry, arguments or input files
  kProtocol,  // external classifier misbehaved
  kCoverage,  // a mask set does not provide the required coverage
  kIo,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace kcover

#endif  // KCOVER_ERROR_HPP_
