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

#include "kcover/external_classifier.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <thread>

#include <nlohmann/json.hpp>

#include "kcover/base64.hpp"
#include "kcover/error.hpp"

namespace kcover {
namespace {

using Clock = std::chrono::steady_clock;
using nlohmann::json;

constexpr std::size_t kTranscriptLines = 16;
constexpr std::size_t kMaxLine = 1 << 20;

void ignore_sigpipe_once() {
  static const bool done = [] {
    struct sigaction current {};
    sigaction(SIGPIPE, nullptr, &current);
    if (current.sa_handler == SIG_DFL) signal(SIGPIPE, SIG_IGN);
    return true;
  }();
  (void)done;
}

std::string elide(const std::string& line) {
  // Keep transcripts short: drop base64 payloads.
  const auto at = line.find("\"pixels\":\"");
  if (at == std::string::npos) return line.size() > 256 ? line.substr(0, 256) + "..." : line;
  const auto end = line.find('"', at + 10);
  return line.substr(0, at + 10) + "..." +
         (end == std::string::npos ? "" : line.substr(end));
}

}  // namespace

ExternalClassifier::ExternalClassifier(std::vector<std::string> argv,
                                       std::chrono::milliseconds timeout)
    : argv_(std::move(argv)), timeout_(timeout) {
  if (argv_.empty()) throw Error(ErrorKind::kConfig, "external classifier needs a command");
  if (timeout_.count() <= 0) throw Error(ErrorKind::kConfig, "external timeout must be positive");
  ignore_sigpipe_once();

  int in_pipe[2];   // parent -> child
  int out_pipe[2];  // child -> parent
  if (pipe2(in_pipe, O_CLOEXEC) != 0) throw Error(ErrorKind::kIo, "pipe failed");
  if (pipe2(out_pipe, O_CLOEXEC) != 0) {
    close(in_pipe[0]);
    close(in_pipe[1]);
    throw Error(ErrorKind::kIo, "pipe failed");
  }

  std::vector<char*> args;
  for (std::string& a : argv_) args.push_back(a.data());
  args.push_back(nullptr);

  pid_ = fork();
  if (pid_ < 0) {
    for (int fd : {in_pipe[0], in_pipe[1], out_pipe[0], out_pipe[1]}) close(fd);
    throw Error(ErrorKind::kIo, "fork failed");
  }
  if (pid_ == 0) {
    dup2(in_pipe[0], STDIN_FILENO);
    dup2(out_pipe[1], STDOUT_FILENO);
    execvp(args[0], args.data());
    _exit(127);
  }
  close(in_pipe[0]);
  close(out_pipe[1]);
  to_child_ = in_pipe[1];
  from_child_ = out_pipe[0];

  const std::string line = read_line();
  json hello;
  try {
    hello = json::parse(line);
  } catch (const json::exception&) {
    fail("handshake is not JSON");
  }
  if (!hello.is_object() || hello.value("ready", false) != true ||
      !hello.contains("classes") || !hello["classes"].is_number_unsigned() ||
      hello["classes"].get<std::uint64_t>() == 0 ||
      hello["classes"].get<std::uint64_t>() > UINT32_MAX) {
    fail("bad handshake");
  }
  classes_ = hello["classes"].get<std::uint32_t>();
}

ExternalClassifier::~ExternalClassifier() { shutdown(); }

int ExternalClassifier::shutdown() {
  if (pid_ <= 0) return exit_status_;
  if (to_child_ >= 0) {
    close(to_child_);
    to_child_ = -1;
  }
  const auto deadline = Clock::now() + timeout_;
  int status = 0;
  pid_t done = 0;
  while ((done = waitpid(pid_, &status, WNOHANG)) == 0 && Clock::now() < deadline) {
    std::this_thread::sleep_for(std::chrono::milliseconds(2));
  }
  if (done == 0) {
    kill(pid_, SIGKILL);
    waitpid(pid_, &status, 0);
    exit_status_ = -1;
  } else {
    exit_status_ = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }
  pid_ = -1;
  if (from_child_ >= 0) {
    close(from_child_);
    from_child_ = -1;
  }
  return exit_status_;
}

void ExternalClassifier::note(const std::string& direction, const std::string& line) {
  transcript_.push_back(direction + " " + elide(line));
  if (transcript_.size() > kTranscriptLines) transcript_.pop_front();
}

std::string ExternalClassifier::transcript() const {
  std::string out;
  for (const std::string& l : transcript_) out += l + "\n";
  return out;
}

void ExternalClassifier::fail(const std::string& what) {
  const std::string message = "external classifier: " + what + "\n" + transcript();
  shutdown();
  throw Error(ErrorKind::kProtocol, message);
}

void ExternalClassifier::write_line(const std::string& line) {
  if (to_child_ < 0) fail("process is not running");
  note(">", line);
  std::string data = line + "\n";
  std::size_t written = 0;
  while (written < data.size()) {
    const ssize_t n = write(to_child_, data.data() + written, data.size() - written);
    if (n < 0) {
      if (errno == EINTR) continue;
      fail(std::string("write failed: ") + std::strerror(errno));
    }
    written += static_cast<std::size_t>(n);
  }
}

std::string ExternalClassifier::read_line() {
  if (from_child_ < 0) fail("process is not running");
  const auto deadline = Clock::now() + timeout_;
  for (;;) {
    const auto nl = buffer_.find('\n');
    if (nl != std::string::npos) {
      std::string line = buffer_.substr(0, nl);
      buffer_.erase(0, nl + 1);
      note("<", line);
      return line;
    }
    if (buffer_.size() > kMaxLine) fail("response line too long");
    const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(
        deadline - Clock::now());
    if (left.count() <= 0) fail("timed out waiting for response");
    pollfd pfd{from_child_, POLLIN, 0};
    const int ready = poll(&pfd, 1, static_cast<int>(left.count()));
    if (ready < 0) {
      if (errno == EINTR) continue;
      fail("poll failed");
    }
    if (ready == 0) fail("timed out waiting for response");
    char chunk[4096];
    const ssize_t n = read(from_child_, chunk, sizeof chunk);
    if (n < 0) {
      if (errno == EINTR) continue;
      fail("read failed");
    }
    if (n == 0) fail("process closed its output");
    buffer_.append(chunk, static_cast<std::size_t>(n));
  }
}

Label ExternalClassifier::classify(const Image& image) {
  const std::uint64_t id = next_id_++;
  json request = {{"id", id},
                  {"width", image.width()},
                  {"height", image.height()},
                  {"channels", image.channels()},
                  {"pixels", base64_encode(image.pixels())}};
  write_line(request.dump());
  const std::string line = read_line();
  json response;
  try {
    response = json::parse(line);
  } catch (const json::exception&) {
    fail("response is not JSON");
  }
  if (!response.is_object() || !response.contains("id") ||
      !response["id"].is_number_unsigned() ||
      response["id"].get<std::uint64_t>() != id) {
    fail("response id does not match request " + std::to_string(id));
  }
  if (response.contains("error")) fail("classifier reported an error");
  if (!response.contains("label") || !response["label"].is_number_integer()) {
    fail("response has no integer label");
  }
  const auto label = response["label"].get<std::int64_t>();
  if (label < 0 || label >= static_cast<std::int64_t>(classes_)) {
    fail("label " + std::to_string(label) + " outside declared class count " +
         std::to_string(classes_));
  }
  return Label{static_cast<std::uint32_t>(label)};
}

}  // namespace kcover
