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

#include <cstdio>
#include <string>

#include "kcover/error.hpp"

namespace kcover {
namespace {

[[noreturn]] void format_error(const std::string& what) {
  throw Error(ErrorKind::kConfig, "mask set: " + what);
}

int get_int(const Json& obj, const char* key) {
  if (!obj.is_object() || !obj.contains(key) || !obj.at(key).is_number_integer()) {
    format_error(std::string("missing or non-integer field '") + key + "'");
  }
  const auto v = obj.at(key).get<std::int64_t>();
  if (v < INT32_MIN || v > INT32_MAX) format_error(std::string("field '") + key + "' out of range");
  return static_cast<int>(v);
}

const Json& get_object(const Json& obj, const char* key) {
  if (!obj.contains(key) || !obj.at(key).is_object()) {
    format_error(std::string("missing object '") + key + "'");
  }
  return obj.at(key);
}

Json counts_json(const LabelCounts& counts) {
  Json out = Json::object();
  for (const auto& [label, count] : counts) out[std::to_string(label.id)] = count;
  return out;
}

std::string hex_digest(std::uint64_t d) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(d));
  return buf;
}

Json rational_json(Rational r) {
  return Json{{"num", r.num}, {"den", r.den}, {"value", r.value()}};
}

}  // namespace

Json to_json(const MaskSet& set) {
  const TilingConfig& c = set.config;
  Json placements = Json::array();
  for (const MaskPlacement& p : set.placements) {
    placements.push_back(Json{{"x0", p.x0}, {"y0", p.y0}, {"wrap", p.wrap}});
  }
  return Json{{"version", kMaskSetVersion},
              {"domain", {{"lx", c.domain.lx}, {"ly", c.domain.ly}}},
              {"mask", {{"mx", c.mask.mx}, {"my", c.mask.my}}},
              {"patch", {{"px", c.patch.px}, {"py", c.patch.py}}},
              {"k", c.k},
              {"m", c.m},
              {"n", c.n},
              {"strategy", std::string(to_string(set.strategy))},
              {"stride_x", set.stride_x},
              {"stride_y", set.stride_y},
              {"placements", std::move(placements)}};
}

MaskSet mask_set_from_json(const Json& doc) {
  if (!doc.is_object()) format_error("document is not an object");
  if (get_int(doc, "version") != kMaskSetVersion) format_error("unsupported version");
  MaskSet set;
  const Json& domain = get_object(doc, "domain");
  const Json& mask = get_object(doc, "mask");
  const Json& patch = get_object(doc, "patch");
  set.config.domain = DomainSize(get_int(domain, "lx"), get_int(domain, "ly"));
  set.config.mask = MaskSpec(get_int(mask, "mx"), get_int(mask, "my"));
  set.config.patch = PatchSpec(get_int(patch, "px"), get_int(patch, "py"));
  set.config.k = get_int(doc, "k");
  set.config.m = get_int(doc, "m");
  set.config.n = get_int(doc, "n");
  if (set.config.k < 1 || set.config.m < 1 || set.config.n < 1) {
    format_error("k, m and n must be positive");
  }
  if (!doc.contains("strategy") || !doc.at("strategy").is_string()) {
    format_error("missing field 'strategy'");
  }
  set.strategy = parse_strategy(doc.at("strategy").get<std::string>());
  set.stride_x = get_int(doc, "stride_x");
  set.stride_y = get_int(doc, "stride_y");
  if (!doc.contains("placements") || !doc.at("placements").is_array()) {
    format_error("missing array 'placements'");
  }
  for (const Json& p : doc.at("placements")) {
    if (!p.contains("wrap") || !p.at("wrap").is_boolean()) {
      format_error("placement without boolean 'wrap'");
    }
    set.placements.push_back({get_int(p, "x0"), get_int(p, "y0"), p.at("wrap").get<bool>()});
  }
  check_mask_set(set);
  return set;
}

Json to_json(const CoverageReport& report) {
  Json histogram = Json::object();
  for (const auto& [mult, count] : report.histogram) histogram[std::to_string(mult)] = count;
  Json gaps = Json::array();
  for (const Anchor& a : report.gaps) gaps.push_back(Json{{"ax", a.ax}, {"ay", a.ay}});
  return Json{{"k", report.k},
              {"min_multiplicity", report.min_multiplicity},
              {"max_multiplicity", report.max_multiplicity},
              {"histogram", std::move(histogram)},
              {"gaps", std::move(gaps)},
              {"gap_count", report.gap_count},
              {"anchors_checked", report.anchors_checked}};
}

Json to_json(const BoundsReport& r) {
  return Json{{"single_lb_1d_x", r.single_lb_x},
              {"single_lb_1d_y", r.single_lb_y},
              {"single_lb_2d", r.single_lb_2d},
              {"kfold_lb", r.kfold_lb},
              {"replicated_count", r.replicated_count},
              {"offset_count", r.offset_count},
              {"approx_ratio", rational_json(r.approx_ratio)}};
}

Json to_json(const TilingConfig& c) {
  return Json{{"domain", {{"lx", c.domain.lx}, {"ly", c.domain.ly}}},
              {"mask", {{"mx", c.mask.mx}, {"my", c.mask.my}}},
              {"patch", {{"px", c.patch.px}, {"py", c.patch.py}}},
              {"k", c.k},
              {"m", c.m},
              {"n", c.n}};
}

Json to_json(const ForwardPassCounts& counts) {
  return Json{{"single_round", counts.single_round}, {"double_masking", counts.double_masking}};
}

Json to_json(const AggregationOutcome& o) {
  return Json{{"label", o.label.id},
              {"rule", std::string(to_string(o.rule))},
              {"tie_broken", o.tie_broken}};
}

Json to_json(const CertificationResult& r) {
  Json out{{"certified", r.certified},
           {"predicted", r.predicted.id},
           {"failing_anchor", nullptr},
           {"failing_allocation", nullptr},
           {"failing_outcome", nullptr},
           {"masks_evaluated", r.masks_evaluated},
           {"anchors_checked", r.anchors_checked}};
  if (r.failing_anchor) {
    out["failing_anchor"] = Json{{"ax", r.failing_anchor->ax}, {"ay", r.failing_anchor->ay}};
  }
  if (r.failing_allocation) {
    out["failing_allocation"] = Json{{"fixed_votes", counts_json(r.failing_allocation->fixed_votes)},
                                     {"free_votes", counts_json(r.failing_allocation->free_votes)}};
  }
  if (r.failing_outcome) out["failing_outcome"] = to_json(*r.failing_outcome);
  return out;
}

Json to_json(const EvalSummary& s) {
  Json errors = Json::array();
  for (const EvalError& e : s.errors) {
    errors.push_back(Json{{"index", e.index}, {"name", e.name}, {"message", e.message}});
  }
  const Rational clean = s.clean_accuracy();
  const Rational cert = s.certified_accuracy();
  return Json{{"clean_correct", s.clean_correct},
              {"certified_count", s.certified_count},
              {"total", s.total},
              {"excluded", s.errors.size()},
              {"clean_accuracy", format_ratio(clean)},
              {"certified_accuracy", format_ratio(cert)},
              {"clean_accuracy_exact", std::to_string(clean.num) + "/" + std::to_string(clean.den)},
              {"certified_accuracy_exact", std::to_string(cert.num) + "/" + std::to_string(cert.den)},
              {"errors", std::move(errors)}};
}

LookupTable lookup_table_from_json(const Json& doc) {
  auto bad = [](const std::string& what) -> void {
    throw Error(ErrorKind::kConfig, "lookup table: " + what);
  };
  if (!doc.is_object()) bad("document is not an object");
  LookupTable table;
  if (doc.contains("classes")) {
    if (!doc.at("classes").is_number_unsigned()) bad("'classes' must be a non-negative integer");
    table.classes = doc.at("classes").get<std::uint32_t>();
  }
  if (doc.contains("default")) {
    if (!doc.at("default").is_number_unsigned()) bad("'default' must be a label");
    table.fallback = Label{doc.at("default").get<std::uint32_t>()};
  }
  if (doc.contains("entries")) {
    if (!doc.at("entries").is_object()) bad("'entries' must be an object");
    for (const auto& [key, value] : doc.at("entries").items()) {
      if (key.size() != 16 || key.find_first_not_of("0123456789abcdefABCDEF") != std::string::npos) {
        bad("digest '" + key + "' is not 16 hex digits");
      }
      if (!value.is_number_unsigned()) bad("label for '" + key + "' is not a label");
      table.table[std::stoull(key, nullptr, 16)] = Label{value.get<std::uint32_t>()};
    }
  }
  return table;
}

Json to_json(const LookupTable& table) {
  Json entries = Json::object();
  for (const auto& [digest, label] : table.table) entries[hex_digest(digest)] = label.id;
  return Json{{"classes", table.classes}, {"default", table.fallback.id}, {"entries", std::move(entries)}};
}

}  // namespace kcover
