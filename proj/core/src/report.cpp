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

#include "sepbench/report.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>
#include <vector>

#include <json.hpp>

namespace sepbench {

namespace {

using nlohmann::json;

std::string format_fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
  return buf;
}

std::string format_range(const std::array<double, 2>& r, const char* unit) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%g-%g %s", r[0], r[1], unit);
  return buf;
}

json grid_json(const ConditionGrid& grid) {
  json j;
  j["t60_bins"] = json::array();
  for (const auto& b : grid.t60_bins) j["t60_bins"].push_back({b[0], b[1]});
  j["snr_bins"] = json::array();
  for (const auto& b : grid.snr_bins) j["snr_bins"].push_back({b[0], b[1]});
  return j;
}

}  // namespace

double WerCellAggregate::wer() const {
  if (reference_words == 0) return std::numeric_limits<double>::quiet_NaN();
  return static_cast<double>(edits()) / static_cast<double>(reference_words);
}

double CellStats::metric_mean(const std::string& name) const {
  auto s = metric_sums.find(name);
  auto n = metric_counts.find(name);
  if (s == metric_sums.end() || n == metric_counts.end() || n->second == 0) {
    return std::numeric_limits<double>::quiet_NaN();
  }
  return s->second / static_cast<double>(n->second);
}

double relative_improvement(double wer_baseline, double wer_candidate) {
  if (!(wer_baseline > 0.0)) return std::numeric_limits<double>::quiet_NaN();
  return 100.0 * (wer_baseline - wer_candidate) / wer_baseline;
}

std::string report_to_json(const GridReport& report) {
  json j;
  j["format"] = "sepbench-report-v1";
  j["grid"] = report.grid ? grid_json(*report.grid) : json(nullptr);
  j["total_entries"] = report.total_entries;
  j["failed_entries"] = report.failed_entries;
  j["unmatched_sessions"] = report.unmatched_sessions;

  json cells = json::array();
  for (const auto& [key, stats] : report.cells) {
    json c;
    c["t60_bin"] = key.first;
    c["snr_bin"] = key.second;
    if (report.grid && key.first >= 0 &&
        key.first < static_cast<int>(report.grid->t60_bins.size())) {
      const auto& r = report.grid->t60_bins[key.first];
      c["t60_range"] = {r[0], r[1]};
    }
    if (report.grid && key.second >= 0 &&
        key.second < static_cast<int>(report.grid->snr_bins.size())) {
      const auto& r = report.grid->snr_bins[key.second];
      c["snr_range"] = {r[0], r[1]};
    }
    c["count"] = stats.count;
    json metrics;
    for (const auto& [name, sum] : stats.metric_sums) {
      (void)sum;
      const double mean = stats.metric_mean(name);
      metrics[name] = std::isnan(mean) ? json(nullptr) : json(mean);
    }
    c["metrics"] = metrics;
    json wer_obj = json::object();
    for (const auto& [label, agg] : stats.wer_by_label) {
      json w;
      w["substitutions"] = agg.substitutions;
      w["insertions"] = agg.insertions;
      w["deletions"] = agg.deletions;
      w["reference_words"] = agg.reference_words;
      w["sessions"] = agg.sessions;
      w["wer"] = std::isnan(agg.wer()) ? json(nullptr) : json(agg.wer());
      wer_obj[label] = w;
    }
    c["wer"] = wer_obj;
    json improvements = json::object();
    for (const auto& [base_label, base] : stats.wer_by_label) {
      for (const auto& [cand_label, cand] : stats.wer_by_label) {
        if (base_label == cand_label) continue;
        const double imp =
            relative_improvement(base.wer() * 100.0, cand.wer() * 100.0);
        improvements[base_label + "->" + cand_label] =
            std::isnan(imp) ? json(nullptr) : json(imp);
      }
    }
    c["improvements"] = improvements;
    cells.push_back(c);
  }
  j["cells"] = cells;
  return j.dump(2) + "\n";
}

GridReport report_from_json(const std::string& json_text) {
  json j = json::parse(json_text);
  if (j.value("format", "") != "sepbench-report-v1") {
    throw std::runtime_error("report: unrecognized format tag");
  }
  GridReport report;
  if (!j.at("grid").is_null()) {
    ConditionGrid grid;
    for (const auto& b : j.at("grid").at("t60_bins")) {
      grid.t60_bins.push_back({b.at(0).get<double>(), b.at(1).get<double>()});
    }
    for (const auto& b : j.at("grid").at("snr_bins")) {
      grid.snr_bins.push_back({b.at(0).get<double>(), b.at(1).get<double>()});
    }
    report.grid = grid;
  }
  report.total_entries = j.at("total_entries").get<int64_t>();
  report.failed_entries = j.at("failed_entries").get<int64_t>();
  report.unmatched_sessions = j.value("unmatched_sessions", 0);
  for (const auto& c : j.at("cells")) {
    CellStats stats;
    stats.count = c.at("count").get<int64_t>();
    for (const auto& [name, value] : c.at("metrics").items()) {
      if (value.is_null()) continue;
      // Means round-trip as single-sample sums.
      stats.metric_sums[name] = value.get<double>();
      stats.metric_counts[name] = 1;
    }
    for (const auto& [label, w] : c.at("wer").items()) {
      WerCellAggregate agg;
      agg.substitutions = w.at("substitutions").get<int64_t>();
      agg.insertions = w.at("insertions").get<int64_t>();
      agg.deletions = w.at("deletions").get<int64_t>();
      agg.reference_words = w.at("reference_words").get<int64_t>();
      agg.sessions = w.at("sessions").get<int64_t>();
      stats.wer_by_label[label] = agg;
    }
    report.cells[{c.at("t60_bin").get<int>(), c.at("snr_bin").get<int>()}] = stats;
  }
  return report;
}

std::string report_to_csv(const GridReport& report) {
  // Column set: union over cells, in map order.
  std::vector<std::string> metric_names;
  std::vector<std::string> labels;
  for (const auto& [key, stats] : report.cells) {
    (void)key;
    for (const auto& [name, v] : stats.metric_sums) {
      (void)v;
      if (std::find(metric_names.begin(), metric_names.end(), name) ==
          metric_names.end()) {
        metric_names.push_back(name);
      }
    }
    for (const auto& [label, v] : stats.wer_by_label) {
      (void)v;
      if (std::find(labels.begin(), labels.end(), label) == labels.end()) {
        labels.push_back(label);
      }
    }
  }
  std::sort(metric_names.begin(), metric_names.end());
  std::sort(labels.begin(), labels.end());

  std::string csv = "t60_bin,snr_bin,t60_lo,t60_hi,snr_lo,snr_hi,count";
  for (const auto& m : metric_names) csv += ",mean_" + m;
  for (const auto& l : labels) csv += ",wer_" + l;
  for (const auto& base : labels) {
    for (const auto& cand : labels) {
      if (base != cand) csv += ",improvement_" + base + "_to_" + cand;
    }
  }
  csv += "\n";

  for (const auto& [key, stats] : report.cells) {
    csv += std::to_string(key.first) + "," + std::to_string(key.second);
    if (report.grid && key.first >= 0 && key.second >= 0) {
      const auto& tr = report.grid->t60_bins[key.first];
      const auto& sr = report.grid->snr_bins[key.second];
      csv += "," + format_fixed(tr[0], 3) + "," + format_fixed(tr[1], 3);
      csv += "," + format_fixed(sr[0], 3) + "," + format_fixed(sr[1], 3);
    } else {
      csv += ",,,,";
    }
    csv += "," + std::to_string(stats.count);
    for (const auto& m : metric_names) {
      const double mean = stats.metric_mean(m);
      csv += ",";
      if (!std::isnan(mean)) csv += format_fixed(mean, 6);
    }
    for (const auto& l : labels) {
      csv += ",";
      auto it = stats.wer_by_label.find(l);
      if (it != stats.wer_by_label.end() && !std::isnan(it->second.wer())) {
        csv += format_fixed(it->second.wer() * 100.0, 4);
      }
    }
    for (const auto& base : labels) {
      for (const auto& cand : labels) {
        if (base == cand) continue;
        csv += ",";
        auto bi = stats.wer_by_label.find(base);
        auto ci = stats.wer_by_label.find(cand);
        if (bi != stats.wer_by_label.end() && ci != stats.wer_by_label.end()) {
          const double imp = relative_improvement(bi->second.wer() * 100.0,
                                                  ci->second.wer() * 100.0);
          if (!std::isnan(imp)) csv += format_fixed(imp, 4);
        }
      }
    }
    csv += "\n";
  }
  return csv;
}

std::string render_heatmap_svg(const GridReport& report,
                               const std::string& baseline_label,
                               const std::string& candidate_label) {
  if (!report.grid) {
    throw std::invalid_argument("heatmap: report has no condition grid");
  }
  bool base_seen = false, cand_seen = false;
  for (const auto& [key, stats] : report.cells) {
    (void)key;
    base_seen |= stats.wer_by_label.count(baseline_label) > 0;
    cand_seen |= stats.wer_by_label.count(candidate_label) > 0;
  }
  if (!base_seen) {
    throw std::invalid_argument("heatmap: label not in report: " + baseline_label);
  }
  if (!cand_seen) {
    throw std::invalid_argument("heatmap: label not in report: " + candidate_label);
  }

  const auto& grid = *report.grid;
  const int rows = static_cast<int>(grid.t60_bins.size());
  const int cols = static_cast<int>(grid.snr_bins.size());
  constexpr int kCellW = 96, kCellH = 60, kLeft = 96, kTop = 56, kBottom = 44;
  const int width = kLeft + cols * kCellW + 16;
  const int height = kTop + rows * kCellH + kBottom;

  // Diverging scale clipped at +-25%: white at 0, green positive, red
  // negative (the convention of relative-improvement grids).
  auto cell_color = [](double v) {
    const double t = std::min(std::abs(v), 25.0) / 25.0;
    int r, g, b;
    if (v >= 0.0) {
      r = static_cast<int>(std::lround(255 + t * (26 - 255)));
      g = static_cast<int>(std::lround(255 + t * (152 - 255)));
      b = static_cast<int>(std::lround(255 + t * (80 - 255)));
    } else {
      r = static_cast<int>(std::lround(255 + t * (215 - 255)));
      g = static_cast<int>(std::lround(255 + t * (48 - 255)));
      b = static_cast<int>(std::lround(255 + t * (39 - 255)));
    }
    char buf[16];
    std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", r, g, b);
    return std::string(buf);
  };

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
         std::to_string(width) + "\" height=\"" + std::to_string(height) +
         "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg += "<text x=\"" + std::to_string(width / 2) +
         "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">WER improvement of " +
         candidate_label + " over " + baseline_label + " (%)</text>\n";

  for (int col = 0; col < cols; ++col) {
    const int x = kLeft + col * kCellW + kCellW / 2;
    svg += "<text x=\"" + std::to_string(x) + "\" y=\"" + std::to_string(kTop - 8) +
           "\" text-anchor=\"middle\">" + format_range(grid.snr_bins[col], "dB") +
           "</text>\n";
  }
  for (int row = 0; row < rows; ++row) {
    const int y = kTop + row * kCellH + kCellH / 2 + 4;
    svg += "<text x=\"" + std::to_string(kLeft - 8) + "\" y=\"" + std::to_string(y) +
           "\" text-anchor=\"end\">" + format_range(grid.t60_bins[row], "s") +
           "</text>\n";
  }

  for (int row = 0; row < rows; ++row) {
    for (int col = 0; col < cols; ++col) {
      const int x = kLeft + col * kCellW;
      const int y = kTop + row * kCellH;
      std::string fill = "#eeeeee";
      std::string text = "n/a";
      auto it = report.cells.find({row, col});
      if (it != report.cells.end()) {
        auto base = it->second.wer_by_label.find(baseline_label);
        auto cand = it->second.wer_by_label.find(candidate_label);
        if (base != it->second.wer_by_label.end() &&
            cand != it->second.wer_by_label.end()) {
          const double imp = relative_improvement(base->second.wer() * 100.0,
                                                  cand->second.wer() * 100.0);
          if (!std::isnan(imp)) {
            fill = cell_color(imp);
            text = format_fixed(imp, 1);
          }
        }
      }
      svg += "<rect x=\"" + std::to_string(x) + "\" y=\"" + std::to_string(y) +
             "\" width=\"" + std::to_string(kCellW) + "\" height=\"" +
             std::to_string(kCellH) + "\" fill=\"" + fill +
             "\" stroke=\"#666666\"/>\n";
      svg += "<text x=\"" + std::to_string(x + kCellW / 2) + "\" y=\"" +
             std::to_string(y + kCellH / 2 + 4) + "\" text-anchor=\"middle\">" +
             text + "</text>\n";
    }
  }
  svg += "<text x=\"" + std::to_string(kLeft + cols * kCellW / 2) + "\" y=\"" +
         std::to_string(height - 14) + "\" text-anchor=\"middle\">SNR</text>\n";
  svg += "<text x=\"20\" y=\"" + std::to_string(kTop + rows * kCellH / 2) +
         "\" text-anchor=\"middle\" transform=\"rotate(-90 20 " +
         std::to_string(kTop + rows * kCellH / 2) + ")\">T60</text>\n";
  svg += "</svg>\n";
  return svg;
}

}  // namespace sepbench
