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

// Scripted child for the external classifier protocol tests.
//
//   fake_classifier mirror T1,T2,...   mean-threshold labels, K = #T + 1
//   fake_classifier <fault> [K]        one of the misbehaviours below
//
// Faults: no-handshake, bad-handshake, wrong-id, big-label, garbage,
// error, hang, crash, linger (ignores EOF on stdin).

#include <chrono>
#include <cstdint>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "kcover/base64.hpp"

namespace {

void sleep_forever() {
  for (;;) std::this_thread::sleep_for(std::chrono::seconds(60));
}

std::vector<double> parse_thresholds(const std::string& arg) {
  std::vector<double> out;
  std::stringstream ss(arg);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
  return out;
}

void send(const nlohmann::json& j) { std::cout << j.dump() << "\n" << std::flush; }

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) return 64;
  const std::string mode = argv[1];
  std::vector<double> thresholds;
  std::uint32_t classes = 3;
  if (mode == "mirror") {
    if (argc < 3) return 64;
    thresholds = parse_thresholds(argv[2]);
    classes = static_cast<std::uint32_t>(thresholds.size() + 1);
  } else if (argc >= 3) {
    classes = static_cast<std::uint32_t>(std::stoul(argv[2]));
  }

  if (mode == "no-handshake") sleep_forever();
  if (mode == "bad-handshake") {
    std::cout << "hello\n" << std::flush;
    sleep_forever();
  }
  send({{"ready", true}, {"classes", classes}});

  std::string line;
  while (std::getline(std::cin, line)) {
    const auto request = nlohmann::json::parse(line);
    const auto id = request.at("id").get<std::uint64_t>();
    if (mode == "hang") sleep_forever();
    if (mode == "crash") return 3;
    if (mode == "garbage") {
      std::cout << "not json\n" << std::flush;
      continue;
    }
    if (mode == "error") {
      send({{"id", id}, {"error", "boom"}});
      continue;
    }
    if (mode == "wrong-id") {
      send({{"id", id + 1}, {"label", 0}});
      continue;
    }
    if (mode == "big-label") {
      send({{"id", id}, {"label", classes}});
      continue;
    }
    // mirror and linger
    std::uint32_t label = 0;
    if (mode == "mirror") {
      const auto bytes = kcover::base64_decode(request.at("pixels").get<std::string>());
      if (!bytes) return 65;
      std::uint64_t sum = 0;
      for (auto b : *bytes) sum += b;
      const double count = static_cast<double>(bytes->size());
      for (double t : thresholds) label += t * count <= static_cast<double>(sum) ? 1 : 0;
    }
    send({{"id", id}, {"label", label}});
  }
  if (mode == "linger") sleep_forever();
  return 0;
}
