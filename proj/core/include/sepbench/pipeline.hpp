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

#ifndef SEPBENCH_PIPELINE_HPP_
#define SEPBENCH_PIPELINE_HPP_

#include <string>
#include <utility>
#include <vector>

#include "sepbench/mixture.hpp"
#include "sepbench/report.hpp"
#include "sepbench/separators.hpp"
#include "sepbench/transcript.hpp"

namespace sepbench {

struct RunConfig {
  std::string manifest_path;
  std::string out_dir;
  std::string separator = "oracle_direct";
  std::vector<std::string> metrics = {"si_sdr", "sdr", "estoi"};
  std::vector<std::pair<std::string, std::string>> hyp_sets;  // label, path
  std::string ref_transcript_path;
  double collar = 0.0;
  int jobs = 1;
  bool resume = false;
};

struct StageResult {
  int64_t processed = 0;
  int64_t failed = 0;
  int64_t skipped = 0;
  std::vector<int64_t> failed_indices;
};

/// The STFT analysis used by mask separators: 16/8 ms at 16 kHz and
/// 32/16 ms at 8 kHz.
StftConfig default_stft_config(int sample_rate);

/// Reads the per-entry audio layout back into a bundle. Only mixture,
/// direct-path images, and noise are populated (the layout does not carry
/// the reverberant images).
MixtureBundle load_bundle_audio(const std::string& audio_dir,
                                const MixtureSpec& spec, int sample_rate);

/// Synthesizes every manifest entry into <audio_dir>/<id>/. Per-entry
/// failures are logged and counted, not fatal.
StageResult simulate_stage(const Manifest& manifest, const std::string& audio_dir,
                           int jobs, bool resume);

/// Runs a reference separator over simulated audio, writing
/// <est_dir>/<id>/est<i>.wav. separator: passthrough | oracle_direct | irm |
/// ibm | complex_mapping.
StageResult separate_stage(const Manifest& manifest, const std::string& audio_dir,
                           const std::string& est_dir, const std::string& separator,
                           int jobs, bool resume);

/// Scores estimates against the direct-path references at the reference
/// microphone. The permutation is chosen by SI-SDR PIT; one JSON line per
/// (entry, estimate stream) records the requested metrics.
StageResult score_signals_stage(const Manifest& manifest,
                                const std::string& audio_dir,
                                const std::string& est_dir,
                                const std::string& out_jsonl,
                                const std::vector<std::string>& metrics, int jobs);

struct SessionWer {
  std::string session_id;
  std::string label;
  CpWerResult result;
};

/// cpWER of every hypothesis set against the reference transcript,
/// session by session. A positive collar relaxes the reference utterance
/// boundaries first. Writes one JSONL file per label into out_dir and
/// returns all records.
std::vector<SessionWer> score_transcripts_stage(
    const std::string& ref_path,
    const std::vector<std::pair<std::string, std::string>>& hyp_sets,
    double collar, const std::string& out_dir);

/// Joins per-utterance signal scores and per-session WER records with the
/// manifest's condition tags.
GridReport grid_report_stage(
    const Manifest& manifest, const std::string& signals_jsonl,
    const std::vector<std::pair<std::string, std::string>>& wer_jsonls,
    int64_t failed_entries);

struct PipelineResult {
  GridReport report;
  int64_t total_entries = 0;
  int64_t failed_entries = 0;

  bool excess_failures() const {
    return total_entries > 0 &&
           static_cast<double>(failed_entries) > 0.10 * static_cast<double>(total_entries);
  }
};

/// simulate -> separate -> score-signals [-> score-transcripts] ->
/// grid-report, writing report.json and report.csv under config.out_dir.
PipelineResult run_pipeline(const RunConfig& config);

}  // namespace sepbench

#endif  // SEPBENCH_PIPELINE_HPP_
