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

#include "kcover/serialize.hpp"

#include <gtest/gtest.h>

#include "kcover/coverage.hpp"
#include "kcover/error.hpp"

namespace kcover {
namespace {

TEST(SerializeTest, MaskSetRoundTrip) {
  for (Strategy s : {Strategy::kSingle, Strategy::kReplicated, Strategy::kOffset}) {
    const MaskSet set = build_mask_set({{40, 30}, {14, 12}, {5, 4}, 4, 2, 2}, s);
    const Json j = to_json(set);
    EXPECT_EQ(j.at("version"), kMaskSetVersion);
    EXPECT_EQ(mask_set_from_json(Json::parse(j.dump())), set);
  }
}

TEST(SerializeTest, MaskSetFieldOrderIsStable) {
  const MaskSet set = single_cover_2d({{10, 10}, {10, 10}, {3, 3}, 1, 1, 1});
  EXPECT_EQ(to_json(set).dump(),
            R"({"version":1,"domain":{"lx":10,"ly":10},"mask":{"mx":10,"my":10},)"
            R"("patch":{"px":3,"py":3},"k":1,"m":1,"n":1,"strategy":"single",)"
            R"("stride_x":0,"stride_y":0,"placements":[{"x0":0,"y0":0,"wrap":false}]})");
}

TEST(SerializeTest, RejectsMalformedMaskSets) {
  const Json good = to_json(single_cover_2d({{10, 10}, {6, 6}, {3, 3}, 1, 1, 1}));
  auto broken = [&](auto edit) {
    Json j = good;
    edit(j);
    return j;
  };
  EXPECT_THROW(mask_set_from_json(broken([](Json& j) { j["version"] = 2; })), Error);
  EXPECT_THROW(mask_set_from_json(broken([](Json& j) { j.erase("mask"); })), Error);
  EXPECT_THROW(mask_set_from_json(broken([](Json& j) { j["strategy"] = "spiral"; })), Error);
  EXPECT_THROW(mask_set_from_json(broken([](Json& j) { j["placements"][0]["wrap"] = true; })), Error);
  EXPECT_THROW(mask_set_from_json(broken([](Json& j) { j["placements"][0] = "x"; })), Error);
  EXPECT_THROW(mask_set_from_json(broken([](Json& j) { j["domain"]["lx"] = 0; })), Error);
  EXPECT_THROW(mask_set_from_json(Json::array()), Error);
}

TEST(SerializeTest, BoundsReport) {
  const Json j = to_json(mask_count_bounds({{224, 224}, {56, 56}, {39, 39}, 6, 3, 2}));
  EXPECT_EQ(j.at("kfold_lb"), 1044);
  EXPECT_EQ(j.at("replicated_count"), 1176);
  EXPECT_EQ(j.at("offset_count"), 1080);
  EXPECT_EQ(j.at("approx_ratio").at("num"), 98);
  EXPECT_EQ(j.at("approx_ratio").at("den"), 87);
}

TEST(SerializeTest, CoverageReport) {
  MaskSet set = single_cover_2d({{10, 10}, {6, 6}, {3, 3}, 1, 1, 1});
  set.placements.pop_back();
  const Json j = to_json(verify(set, {.gap_limit = 2, .jobs = 1}));
  EXPECT_EQ(j.at("gaps").size(), 2u);
  EXPECT_GT(j.at("gap_count").get<int>(), 2);
  EXPECT_TRUE(j.at("histogram").contains("0"));
  EXPECT_EQ(j.at("gaps")[0].dump(), R"({"ax":4,"ay":4})");
}

TEST(SerializeTest, LookupTableRoundTrip) {
  LookupTable t;
  t.classes = 5;
  t.fallback = Label{2};
  t.table[0x0123456789abcdefull] = Label{4};
  t.table[7] = Label{0};
  const Json j = to_json(t);
  EXPECT_TRUE(j.at("entries").contains("0123456789abcdef"));
  EXPECT_TRUE(j.at("entries").contains("0000000000000007"));
  const LookupTable back = lookup_table_from_json(j);
  EXPECT_EQ(back.table, t.table);
  EXPECT_EQ(back.fallback, t.fallback);
  EXPECT_EQ(back.classes, t.classes);
  EXPECT_THROW(lookup_table_from_json(Json::parse(R"({"default":0,"entries":{"xyz":1}})")), Error);
}

TEST(SerializeTest, EvalSummary) {
  EvalSummary s;
  s.total = 3;
  s.clean_correct = 2;
  s.certified_count = 1;
  s.errors.push_back({4, "a.pgm", "bad"});
  const Json j = to_json(s);
  EXPECT_EQ(j.at("clean_accuracy"), "0.6667");
  EXPECT_EQ(j.at("certified_accuracy"), "0.3333");
  EXPECT_EQ(j.at("clean_accuracy_exact"), "2/3");
  EXPECT_EQ(j.at("excluded"), 1);
}

}  // namespace
}  // namespace kcover
