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

#include "kcover/coverage.hpp"

#include <algorithm>
#include <thread>

namespace kcover {
namespace {

struct RowBlock {
  std::map<int, std::int64_t> histogram;
  std::vector<Anchor> gaps;
  std::int64_t gap_count = 0;
};

int multiplicity(const MaskSet& set, Anchor a) {
  const TilingConfig& c = set.config;
  int count = 0;
  for (const MaskPlacement& p : set.placements) {
    if (fully_covers(p, c.mask, a, c.patch, c.domain)) ++count;
  }
  return count;
}

void scan_rows(const MaskSet& set, const AnchorRect& anchors, int row_begin,
               int row_end, std::size_t gap_limit, RowBlock& out) {
  for (int ay = row_begin; ay < row_end; ++ay) {
    for (int ax = anchors.ax_lo; ax <= anchors.ax_hi; ++ax) {
      const int mult = multiplicity(set, {ax, ay});
      ++out.histogram[mult];
      if (mult < set.config.k) {
        ++out.gap_count;
        if (out.gaps.size() < gap_limit) out.gaps.push_back({ax, ay});
      }
    }
  }
}

}  // namespace

CoverageReport verify(const MaskSet& set, const VerifyOptions& options) {
  const TilingConfig& c = set.config;
  const AnchorRect anchors = admissible_anchors(c.domain, c.patch);
  const int rows = anchors.ay_hi - anchors.ay_lo + 1;
  const int jobs = static_cast<int>(
      std::clamp<unsigned>(options.jobs, 1u, static_cast<unsigned>(rows)));

  std::vector<RowBlock> blocks(jobs);
  const int per_job = (rows + jobs - 1) / jobs;
  auto run = [&](int j) {
    const int begin = anchors.ay_lo + j * per_job;
    const int end = std::min(begin + per_job, anchors.ay_hi + 1);
    scan_rows(set, anchors, begin, end, options.gap_limit, blocks[j]);
  };
  if (jobs == 1) {
    run(0);
  } else {
    std::vector<std::thread> workers;
    workers.reserve(jobs);
    for (int j = 0; j < jobs; ++j) workers.emplace_back(run, j);
    for (auto& w : workers) w.join();
  }

  CoverageReport report;
  report.k = c.k;
  report.anchors_checked = anchors.count();
  for (const RowBlock& b : blocks) {
    for (const auto& [mult, count] : b.histogram) report.histogram[mult] += count;
    report.gap_count += b.gap_count;
    for (const Anchor& a : b.gaps) {
      if (report.gaps.size() >= options.gap_limit) break;
      report.gaps.push_back(a);
    }
  }
  report.min_multiplicity = report.histogram.begin()->first;
  report.max_multiplicity = report.histogram.rbegin()->first;
  return report;
}

std::vector<std::uint32_t> covering_set(const MaskSet& set, Anchor anchor) {
  const TilingConfig& c = set.config;
  std::vector<std::uint32_t> out;
  for (std::size_t i = 0; i < set.placements.size(); ++i) {
    if (fully_covers(set.placements[i], c.mask, anchor, c.patch, c.domain)) {
      out.push_back(static_cast<std::uint32_t>(i));
    }
  }
  return out;
}

}  // namespace kcover
