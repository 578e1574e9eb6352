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

#include "sepbench/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <stdexcept>
#include <thread>

#include <set>

#include <json.hpp>

#include "sepbench/metrics.hpp"

namespace sepbench {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

// Runs work(i) over [0, n) on `jobs` threads. Failures are collected and
// logged in index order after the join, so output is identical at any
// parallelism level.
StageResult parallel_entries(int64_t n, int jobs,
                             const std::function<std::string(int64_t)>& work) {
  std::vector<std::string> errors(n);
  std::atomic<int64_t> next{0};
  auto runner = [&]() {
    for (;;) {
      const int64_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        errors[i] = work(i);
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
    }
  };
  const int threads = std::max(1, std::min<int>(jobs, static_cast<int>(n)));
  if (threads == 1) {
    runner();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(runner);
    for (auto& t : pool) t.join();
  }
  StageResult result;
  result.processed = n;
  for (int64_t i = 0; i < n; ++i) {
    if (errors[i] == "skipped") {
      ++result.skipped;
    } else if (!errors[i].empty()) {
      ++result.failed;
      result.failed_indices.push_back(i);
      std::cerr << "error: entry " << i << ": " << errors[i] << "\n";
    }
  }
  return result;
}

bool entry_audio_complete(const std::string& dir, int speakers) {
  if (!fs::exists(dir + "/mixture.wav") || !fs::exists(dir + "/noise.wav")) {
    return false;
  }
  for (int c = 1; c <= speakers; ++c) {
    if (!fs::exists(dir + "/src" + std::to_string(c) + "_direct.wav")) return false;
  }
  return true;
}

bool entry_estimates_complete(const std::string& dir, int speakers) {
  for (int c = 1; c <= speakers; ++c) {
    if (!fs::exists(dir + "/est" + std::to_string(c) + ".wav")) return false;
  }
  return true;
}

std::string json_number_or_null(double v) {
  if (std::isnan(v) || std::isinf(v)) return "null";
  return json(v).dump();
}

std::vector<json> read_jsonl(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path);
  std::vector<json> out;
  std::string line;
  size_t line_no = 0;
  while (std::getline(f, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      out.push_back(json::parse(line));
    } catch (const std::exception& e) {
      throw std::runtime_error(path + " line " + std::to_string(line_no) + ": " +
                               e.what());
    }
  }
  return out;
}

}  // namespace

StftConfig default_stft_config(int sample_rate) {
  if (sample_rate == 16000) return stft_config_from_ms(16.0, 8.0, sample_rate);
  if (sample_rate == 8000) return stft_config_from_ms(32.0, 16.0, sample_rate);
  throw std::invalid_argument("pipeline: unsupported sample rate " +
                              std::to_string(sample_rate));
}

MixtureBundle load_bundle_audio(const std::string& audio_dir,
                                const MixtureSpec& spec, int sample_rate) {
  const std::string dir = audio_dir + "/" + spec.id;
  MixtureBundle bundle;
  bundle.spec = spec;
  bundle.mixture = read_wav(dir + "/mixture.wav");
  bundle.noise = read_wav(dir + "/noise.wav");
  for (size_t c = 1; c <= spec.source_refs.size(); ++c) {
    bundle.direct_path.push_back(
        read_wav(dir + "/src" + std::to_string(c) + "_direct.wav"));
  }
  for (const auto* a :
       {&bundle.mixture, &bundle.noise, &bundle.direct_path.front()}) {
    if (a->sample_rate() != sample_rate) {
      throw std::runtime_error("audio in " + dir + " has sample rate " +
                               std::to_string(a->sample_rate()) + ", manifest says " +
                               std::to_string(sample_rate));
    }
  }
  return bundle;
}

StageResult simulate_stage(const Manifest& manifest, const std::string& audio_dir,
                           int jobs, bool resume) {
  fs::create_directories(audio_dir);
  const int64_t n = static_cast<int64_t>(manifest.entries.size());
  return parallel_entries(n, jobs, [&](int64_t i) -> std::string {
    const MixtureSpec& spec = manifest.entries[i];
    const std::string dir = audio_dir + "/" + spec.id;
    if (resume &&
        entry_audio_complete(dir, static_cast<int>(spec.source_refs.size()))) {
      return "skipped";
    }
    MixtureBundle bundle = realize(spec, manifest.sample_rate);
    write_bundle_audio(audio_dir, bundle);
    return "";
  });
}

StageResult separate_stage(const Manifest& manifest, const std::string& audio_dir,
                           const std::string& est_dir, const std::string& separator,
                           int jobs, bool resume) {
  enum class Kind { passthrough, oracle, irm, ibm, complex_mapping };
  Kind kind;
  if (separator == "passthrough") {
    kind = Kind::passthrough;
  } else if (separator == "oracle_direct") {
    kind = Kind::oracle;
  } else if (separator == "irm") {
    kind = Kind::irm;
  } else if (separator == "ibm") {
    kind = Kind::ibm;
  } else if (separator == "complex_mapping") {
    kind = Kind::complex_mapping;
  } else {
    throw std::invalid_argument(
        "separator must be one of passthrough, oracle_direct, irm, ibm, "
        "complex_mapping; got " + separator);
  }

  fs::create_directories(est_dir);
  const StftConfig stft_cfg = default_stft_config(manifest.sample_rate);
  const int64_t n = static_cast<int64_t>(manifest.entries.size());
  return parallel_entries(n, jobs, [&](int64_t i) -> std::string {
    const MixtureSpec& spec = manifest.entries[i];
    const std::string dir = est_dir + "/" + spec.id;
    if (resume &&
        entry_estimates_complete(dir, static_cast<int>(spec.source_refs.size()))) {
      return "skipped";
    }
    MixtureBundle bundle = load_bundle_audio(audio_dir, spec, manifest.sample_rate);
    SeparationOutput out;
    switch (kind) {
      case Kind::passthrough:
        out = passthrough(bundle);
        break;
      case Kind::oracle:
        out = oracle_direct_path(bundle);
        break;
      case Kind::irm:
        out = ideal_mask(bundle, stft_cfg, MaskKind::irm);
        break;
      case Kind::ibm:
        out = ideal_mask(bundle, stft_cfg, MaskKind::ibm);
        break;
      case Kind::complex_mapping:
        out = ideal_mask(bundle, stft_cfg, MaskKind::complex_mapping);
        break;
    }
    write_estimates(dir, out);
    return "";
  });
}

StageResult score_signals_stage(const Manifest& manifest,
                                const std::string& audio_dir,
                                const std::string& est_dir,
                                const std::string& out_jsonl,
                                const std::vector<std::string>& metrics, int jobs) {
  for (const auto& m : metrics) {
    if (m != "si_sdr" && m != "sdr" && m != "estoi") {
      throw std::invalid_argument("unknown metric: " + m);
    }
  }
  if (metrics.empty()) throw std::invalid_argument("no metrics selected");

  const int64_t n = static_cast<int64_t>(manifest.entries.size());
  std::vector<std::string> lines(n);
  StageResult result = parallel_entries(n, jobs, [&](int64_t i) -> std::string {
    const MixtureSpec& spec = manifest.entries[i];
    const int speakers = static_cast<int>(spec.source_refs.size());
    const int ref_mic = spec.room ? spec.room->array.reference_index : 0;

    std::vector<MultichannelAudio> references;
    for (int c = 1; c <= speakers; ++c) {
      MultichannelAudio s = read_wav(audio_dir + "/" + spec.id + "/src" +
                                     std::to_string(c) + "_direct.wav");
      references.push_back(s.extract_channel(ref_mic));
    }
    const int64_t length = references.front().length();
    SeparationOutput est = load_external(est_dir + "/" + spec.id, speakers, length,
                                         manifest.sample_rate);

    const PitResult pit =
        pit_evaluate_metric(est.estimates, references, PitMetric::si_sdr);

    std::string block;
    for (int s = 0; s < speakers; ++s) {
      const auto& e = est.estimates[s].channel(0);
      const auto& r = references[pit.permutation[s]].channel(0);
      std::string line = "{\"entry_id\":" + json(spec.id).dump() +
                         ",\"speaker\":" + std::to_string(s) +
                         ",\"permutation\":" + std::to_string(pit.permutation[s]);
      for (const auto& m : metrics) {
        double v;
        if (m == "si_sdr") {
          v = si_sdr(e, r);
        } else if (m == "sdr") {
          v = sdr(e, r);
        } else {
          v = estoi(e, r, manifest.sample_rate);
        }
        line += ",\"" + m + "\":" + json_number_or_null(v);
      }
      line += "}\n";
      block += line;
    }
    lines[i] = block;
    return "";
  });

  std::ofstream f(out_jsonl, std::ios::binary);
  if (!f) throw std::runtime_error("cannot create " + out_jsonl);
  for (const auto& block : lines) f << block;
  if (!f) throw std::runtime_error("write failed: " + out_jsonl);
  return result;
}

std::vector<SessionWer> score_transcripts_stage(
    const std::string& ref_path,
    const std::vector<std::pair<std::string, std::string>>& hyp_sets,
    double collar, const std::string& out_dir) {
  std::vector<Transcript> references = read_transcript_tsv(ref_path);
  if (references.empty()) {
    throw std::runtime_error("reference transcript is empty: " + ref_path);
  }
  if (collar > 0.0) {
    for (auto& ref : references) {
      double session_end = 0.0;
      for (const auto& u : ref.utterances) session_end = std::max(session_end, u.end);
      ref = relax_transcript(ref, collar, session_end + collar);
    }
  }

  fs::create_directories(out_dir);
  std::vector<SessionWer> records;
  for (const auto& [label, hyp_path] : hyp_sets) {
    const std::vector<Transcript> hyp_sessions = read_transcript_tsv(hyp_path);

    const std::string jsonl_path = out_dir + "/transcript_scores_" + label + ".jsonl";
    std::ofstream f(jsonl_path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot create " + jsonl_path);

    for (const auto& ref : references) {
      // Hypothesis streams for this session: one per speaker-column id.
      std::vector<HypothesisStream> streams;
      for (const auto& hyp : hyp_sessions) {
        if (hyp.session_id != ref.session_id) continue;
        for (const auto& u : hyp.utterances) {
          auto it = std::find_if(streams.begin(), streams.end(),
                                 [&](const HypothesisStream& s) {
                                   return s.stream_id == u.speaker;
                                 });
          if (it == streams.end()) {
            streams.push_back({u.speaker, {}});
            it = std::prev(streams.end());
          }
          it->utterance_tokens.push_back(u.tokens);
        }
      }

      SessionWer record;
      record.session_id = ref.session_id;
      record.label = label;
      record.result = cpwer(ref, streams);
      const auto& b = record.result.breakdown;
      json assignment = json::array();
      for (const auto& p : record.result.pairs) {
        assignment.push_back({{"stream", p.stream_id},
                              {"speaker", p.speaker_id},
                              {"substitutions", p.breakdown.substitutions},
                              {"insertions", p.breakdown.insertions},
                              {"deletions", p.breakdown.deletions},
                              {"reference_words", p.breakdown.reference_words}});
      }
      f << "{\"session_id\":" << json(record.session_id).dump()
        << ",\"label\":" << json(label).dump()
        << ",\"substitutions\":" << b.substitutions
        << ",\"insertions\":" << b.insertions << ",\"deletions\":" << b.deletions
        << ",\"reference_words\":" << b.reference_words
        << ",\"wer\":" << json_number_or_null(b.wer)
        << ",\"assignment\":" << assignment.dump() << "}\n";
      records.push_back(std::move(record));
    }
    if (!f) throw std::runtime_error("write failed: " + jsonl_path);
  }
  return records;
}

GridReport grid_report_stage(
    const Manifest& manifest, const std::string& signals_jsonl,
    const std::vector<std::pair<std::string, std::string>>& wer_jsonls,
    int64_t failed_entries) {
  GridReport report;
  report.grid = manifest.grid;
  report.total_entries = static_cast<int64_t>(manifest.entries.size());
  report.failed_entries = failed_entries;

  std::map<std::string, std::pair<int, int>> entry_cell;
  for (const auto& e : manifest.entries) {
    const std::pair<int, int> key{e.t60_bin, e.snr_bin};
    entry_cell[e.id] = key;
    report.cells[key].count += 1;
  }

  if (!signals_jsonl.empty()) {
    for (const auto& rec : read_jsonl(signals_jsonl)) {
      const std::string id = rec.at("entry_id").get<std::string>();
      auto it = entry_cell.find(id);
      if (it == entry_cell.end()) {
        ++report.unmatched_sessions;
        continue;
      }
      CellStats& cell = report.cells[it->second];
      for (const char* name : {"si_sdr", "sdr", "estoi"}) {
        if (!rec.contains(name) || rec.at(name).is_null()) continue;
        cell.metric_sums[name] += rec.at(name).get<double>();
        cell.metric_counts[name] += 1;
      }
    }
  }

  for (const auto& [label, path] : wer_jsonls) {
    for (const auto& rec : read_jsonl(path)) {
      const std::string id = rec.at("session_id").get<std::string>();
      auto it = entry_cell.find(id);
      if (it == entry_cell.end()) {
        ++report.unmatched_sessions;
        continue;
      }
      WerCellAggregate& agg = report.cells[it->second].wer_by_label[label];
      agg.substitutions += rec.at("substitutions").get<int64_t>();
      agg.insertions += rec.at("insertions").get<int64_t>();
      agg.deletions += rec.at("deletions").get<int64_t>();
      agg.reference_words += rec.at("reference_words").get<int64_t>();
      agg.sessions += 1;
    }
  }
  return report;
}

PipelineResult run_pipeline(const RunConfig& config) {
  if (config.out_dir.empty()) {
    throw std::invalid_argument("run: output directory is required");
  }
  const Manifest manifest = load_manifest(config.manifest_path);
  if (manifest.entries.empty()) {
    throw std::invalid_argument("run: manifest has no entries");
  }
  fs::create_directories(config.out_dir);

  const std::string audio_dir = config.out_dir + "/audio";
  const std::string est_dir = config.out_dir + "/est";
  const std::string signals_jsonl = config.out_dir + "/signal_scores.jsonl";

  // An entry that fails to simulate also fails downstream; failures are
  // counted once per entry.
  std::set<int64_t> failed_entries;
  StageResult sim = simulate_stage(manifest, audio_dir, config.jobs, config.resume);
  failed_entries.insert(sim.failed_indices.begin(), sim.failed_indices.end());
  StageResult sep = separate_stage(manifest, audio_dir, est_dir, config.separator,
                                   config.jobs, config.resume);
  failed_entries.insert(sep.failed_indices.begin(), sep.failed_indices.end());
  StageResult sig = score_signals_stage(manifest, audio_dir, est_dir, signals_jsonl,
                                        config.metrics, config.jobs);
  failed_entries.insert(sig.failed_indices.begin(), sig.failed_indices.end());
  const int64_t failed = static_cast<int64_t>(failed_entries.size());

  std::vector<std::pair<std::string, std::string>> wer_jsonls;
  if (!config.ref_transcript_path.empty() && !config.hyp_sets.empty()) {
    score_transcripts_stage(config.ref_transcript_path, config.hyp_sets,
                            config.collar, config.out_dir);
    for (const auto& [label, path] : config.hyp_sets) {
      (void)path;
      wer_jsonls.emplace_back(label,
                              config.out_dir + "/transcript_scores_" + label + ".jsonl");
    }
  }

  PipelineResult result;
  result.report = grid_report_stage(manifest, signals_jsonl, wer_jsonls, failed);
  result.total_entries = static_cast<int64_t>(manifest.entries.size());
  result.failed_entries = failed;

  std::ofstream rj(config.out_dir + "/report.json", std::ios::binary);
  rj << report_to_json(result.report);
  std::ofstream rc(config.out_dir + "/report.csv", std::ios::binary);
  rc << report_to_csv(result.report);
  return result;
}

}  // namespace sepbench
