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

#ifndef KCOVER_EXTERNAL_CLASSIFIER_HPP_
#define KCOVER_EXTERNAL_CLASSIFIER_HPP_

#include <sys/types.h>

#include <chrono>
#include <cstdint>
#include <deque>
#include <string>
#include <vector>

#include "kcover/classifier.hpp"

namespace kcover {

// Runs a classifier in a child process. Wire protocol, one JSON object per
// line on the child's stdin/stdout:
//   child:  {"ready": true, "classes": K}                       (once)
//   parent: {"id": N, "width": W, "height": H, "channels": C,
//            "pixels": "<base64>"}
//   child:  {"id": N, "label": L}
// Requests are strictly sequential. Any other output, an id mismatch or
// L >= K is a protocol error. Destruction closes the child's stdin and waits
// up to the timeout before killing it.
class ExternalClassifier : public Classifier {
 public:
  ExternalClassifier(std::vector<std::string> argv,
                     std::chrono::milliseconds timeout);
  ~ExternalClassifier() override;

  ExternalClassifier(const ExternalClassifier&) = delete;
  ExternalClassifier& operator=(const ExternalClassifier&) = delete;

  Label classify(const Image& image) override;
  std::uint32_t num_classes() const override { return classes_; }

  // Closes stdin and reaps the child. Returns its exit status, or -1 if it
  // had to be killed. Idempotent.
  int shutdown();

  // Recent protocol lines, pixel payloads elided.
  std::string transcript() const;

 private:
  [[noreturn]] void fail(const std::string& what);
  std::string read_line();
  void write_line(const std::string& line);
  void note(const std::string& direction, const std::string& line);

  std::vector<std::string> argv_;
  std::chrono::milliseconds timeout_;
  pid_t pid_ = -1;
  int to_child_ = -1;
  int from_child_ = -1;
  std::string buffer_;
  std::uint64_t next_id_ = 0;
  std::uint32_t classes_ = 0;
  int exit_status_ = 0;
  std::deque<std::string> transcript_;
};

}  // namespace kcover

#endif  // KCOVER_EXTERNAL_CLASSIFIER_HPP_
