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

#include <chrono>
#include <random>
#include <string>

#include <gmock/gmock.h>
#include <gtest/gtest.h>

#include "kcover/base64.hpp"
#include "kcover/error.hpp"
#include "oracles.hpp"

namespace kcover {
namespace {

using ::testing::HasSubstr;
using namespace std::chrono_literals;

std::vector<std::string> fake(std::vector<std::string> args) {
  args.insert(args.begin(), KCOVER_FAKE_CLASSIFIER);
  return args;
}

// Runs one classify call and returns the protocol error text.
std::string protocol_error(const std::string& mode, std::chrono::milliseconds timeout = 2s) {
  try {
    ExternalClassifier c(fake({mode}), timeout);
    c.classify(Image(2, 2, 1));
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kProtocol) << e.what();
    return e.what();
  }
  ADD_FAILURE() << mode << " did not fail";
  return "";
}

TEST(Base64Test, KnownVectorsAndRoundTrip) {
  const std::string text = "foobar";
  const std::vector<std::uint8_t> bytes(text.begin(), text.end());
  EXPECT_EQ(base64_encode(std::span(bytes).first(0)), "");
  EXPECT_EQ(base64_encode(std::span(bytes).first(1)), "Zg==");
  EXPECT_EQ(base64_encode(std::span(bytes).first(2)), "Zm8=");
  EXPECT_EQ(base64_encode(bytes), "Zm9vYmFy");
  std::mt19937_64 rng(71);
  for (int len = 0; len < 64; ++len) {
    std::vector<std::uint8_t> data(len);
    for (auto& b : data) b = static_cast<std::uint8_t>(rng());
    ASSERT_EQ(base64_decode(base64_encode(data)), data);
  }
  EXPECT_FALSE(base64_decode("Zm9"));
  EXPECT_FALSE(base64_decode("Zm9v!mFy"));
}

TEST(ExternalClassifierTest, MirrorMatchesBuiltIn) {
  const MeanThreshold spec{{40, 90, 127.5, 200}};
  ExternalClassifier child(fake({"mirror", "40,90,127.5,200"}), 5s);
  EXPECT_EQ(child.num_classes(), 5u);
  std::mt19937_64 rng(72);
  for (int i = 0; i < 100; ++i) {
    Image img = oracle::random_image(rng, 1 + i % 9, 1 + i % 4, i % 2 ? 3 : 1);
    // Skew the brightness so every bucket is hit.
    const int shift = static_cast<int>(rng() % 256) - 128;
    for (auto& v : img.mutable_pixels()) v = static_cast<std::uint8_t>(std::clamp(v + shift, 0, 255));
    ASSERT_EQ(child.classify(img), mean_threshold_label(spec, img)) << "image " << i;
  }
  EXPECT_EQ(child.shutdown(), 0);
  EXPECT_EQ(child.shutdown(), 0);
}

TEST(ExternalClassifierTest, ViaClassifierSpec) {
  const ClassifierSpec spec = ExternalCommand{fake({"mirror", "128"}), 5s};
  auto c = make_classifier(spec);
  EXPECT_EQ(c->num_classes(), 2u);
  std::vector<Image> images{Image(3, 3, 1), Image(3, 3, 1, std::vector<std::uint8_t>(9, 200))};
  EXPECT_EQ(classify_batch(*c, images), (std::vector<Label>{Label{0}, Label{1}}));
}

TEST(ExternalClassifierTest, TranscriptElidesPixels) {
  ExternalClassifier child(fake({"mirror", "128"}), 5s);
  child.classify(Image(4, 4, 3));
  const std::string t = child.transcript();
  EXPECT_THAT(t, HasSubstr("\"ready\""));
  EXPECT_THAT(t, HasSubstr("\"label\""));
  EXPECT_THAT(t, ::testing::Not(HasSubstr("AAAAAAAA")));
}

TEST(ExternalClassifierTest, ProtocolViolations) {
  EXPECT_THAT(protocol_error("bad-handshake"), HasSubstr("handshake"));
  EXPECT_THAT(protocol_error("wrong-id"), HasSubstr("id"));
  EXPECT_THAT(protocol_error("big-label"), HasSubstr("outside declared class count"));
  EXPECT_THAT(protocol_error("garbage"), HasSubstr("not JSON"));
  EXPECT_THAT(protocol_error("error"), HasSubstr("reported an error"));
  EXPECT_THAT(protocol_error("crash"), HasSubstr("closed its output"));
}

TEST(ExternalClassifierTest, ErrorsCarryTheTranscript) {
  EXPECT_THAT(protocol_error("wrong-id"), HasSubstr("\"id\":1"));
}

TEST(ExternalClassifierTest, Timeouts) {
  const auto start = std::chrono::steady_clock::now();
  EXPECT_THAT(protocol_error("hang", 300ms), HasSubstr("timed out"));
  EXPECT_THAT(protocol_error("no-handshake", 300ms), HasSubstr("timed out"));
  EXPECT_LT(std::chrono::steady_clock::now() - start, 5s);
}

TEST(ExternalClassifierTest, ShutdownKillsALingeringChild) {
  ExternalClassifier child(fake({"linger"}), 300ms);
  EXPECT_EQ(child.classify(Image(1, 1, 1)), Label{0});
  EXPECT_EQ(child.shutdown(), -1);
}

TEST(ExternalClassifierTest, MissingProgram) {
  EXPECT_THROW(ExternalClassifier({"/nonexistent/classifier"}, 1s), Error);
  EXPECT_THROW(ExternalClassifier({}, 1s), Error);
}

}  // namespace
}  // namespace kcover
