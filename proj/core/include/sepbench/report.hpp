// Copyright 2026 The sepbench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SEPBENCH_REPORT_HPP_
#define SEPBENCH_REPORT_HPP_

#include <map>
#include <optional>
#include <string>
#include <utility>

#include "sepbench/mixture.hpp"

namespace sepbench {

/// Pooled (corpus-level) WER for one label in one cell: edit counts and
/// reference words are summed across sessions before dividing.
struct WerCellAggregate {
  int64_t substitutions = 0;
  int64_t insertions = 0;
  int64_t deletions = 0;
  int64_t reference_words = 0;
  int64_t sessions = 0;

  int64_t edits() const { return substitutions + insertions + deletions; }
  double wer() const;  // NaN when no reference words were seen
};

struct CellStats {
  int64_t count = 0;  // scored entries in this cell
  std::map<std::string, double> metric_sums;
  std::map<std::string, int64_t> metric_counts;
  std::map<std::string, WerCellAggregate> wer_by_label;

  double metric_mean(const std::string& name) const;
};

/// Aggregate results over the condition grid. Entries without condition
/// tags land in the single (-1, -1) cell.
struct GridReport {
  std::optional<ConditionGrid> grid;
  std::map<std::pair<int, int>, CellStats> cells;  // (t60_bin, snr_bin)
  int64_t total_entries = 0;
  int64_t failed_entries = 0;
  int64_t unmatched_sessions = 0;
};

/// 100 * (baseline - candidate) / baseline, in percent. Positive means the
/// candidate is better; a non-positive baseline yields NaN (rendered as an
/// undefined marker in reports).
double relative_improvement(double wer_baseline, double wer_candidate);

std::string report_to_json(const GridReport& report);
GridReport report_from_json(const std::string& json_text);
std::string report_to_csv(const GridReport& report);

/// One colored cell per grid condition showing the signed WER improvement
/// of the candidate label over the baseline label; green positive, red
/// negative, diverging scale clipped at +-25%. Throws when a label is
/// absent from the report or the report has no grid.
std::string render_heatmap_svg(const GridReport& report,
                               const std::string& baseline_label,
                               const std::string& candidate_label);

}  // namespace sepbench

#endif  // SEPBENCH_REPORT_HPP_
