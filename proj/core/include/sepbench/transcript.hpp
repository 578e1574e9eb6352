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

#ifndef SEPBENCH_TRANSCRIPT_HPP_
#define SEPBENCH_TRANSCRIPT_HPP_

#include <string>
#include <vector>

namespace sepbench {

struct Utterance {
  std::string speaker;
  double start = 0.0;  // seconds
  double end = 0.0;
  std::vector<std::string> tokens;
};

struct Transcript {
  std::string session_id;
  std::vector<Utterance> utterances;
};

struct NormalizePolicy {
  bool lowercase = true;
  // Characters removed before tokenization. Apostrophes survive by default
  // so contractions stay single tokens.
  std::string strip_chars = "!\"#$%&()*+,-./:;<=>?@[\\]^_`{|}~";
};

/// Case-folds (ASCII), strips punctuation, and splits on whitespace. An
/// empty token list is a legal result.
std::vector<std::string> normalize_text(const std::string& raw,
                                        const NormalizePolicy& policy = {});

struct WerBreakdown {
  int64_t substitutions = 0;
  int64_t insertions = 0;
  int64_t deletions = 0;
  int64_t reference_words = 0;
  double wer = 0.0;  // +infinity sentinel for a non-empty hypothesis against
                     // an empty reference

  int64_t edits() const { return substitutions + insertions + deletions; }
};

/// Minimal-edit alignment with unit costs. Among minimal alignments the one
/// with the most substitutions (fewest insertion+deletion pairs) is chosen.
WerBreakdown wer(const std::vector<std::string>& reference,
                 const std::vector<std::string>& hypothesis);

struct HypothesisStream {
  std::string stream_id;
  std::vector<std::vector<std::string>> utterance_tokens;  // in time order
};

/// One matched (hypothesis stream, reference speaker) pair of the cpWER
/// assignment. Empty ids mark the padded pseudo-entities that square the
/// assignment when stream and speaker counts differ.
struct CpWerPair {
  std::string stream_id;
  std::string speaker_id;
  WerBreakdown breakdown;
};

struct CpWerResult {
  std::vector<CpWerPair> pairs;
  WerBreakdown breakdown;  // totals over all pairs; wer over all reference words
};

/// Concatenated minimum-permutation WER: per-speaker and per-stream
/// concatenations, then the speaker-to-stream assignment minimizing total
/// edits. Unmatched reference words count as deletions, unmatched
/// hypothesis words as insertions.
CpWerResult cpwer(const Transcript& reference,
                  const std::vector<HypothesisStream>& streams);

struct SegmentBoundary {
  std::string speaker;
  double start = 0.0;
  double end = 0.0;
};

/// Widens every boundary by the collar, clips to [0, session_length], and
/// merges same-speaker segments that now overlap. Output is grouped by
/// speaker (first-appearance order), each group sorted by start time.
std::vector<SegmentBoundary> apply_collar(
    const std::vector<SegmentBoundary>& boundaries, double collar,
    double session_length);

/// apply_collar over a transcript: merged utterances concatenate their
/// token sequences in time order.
Transcript relax_transcript(const Transcript& transcript, double collar,
                            double session_length);

/// Reads tab-separated lines `session_id speaker_id start_s end_s text`.
/// Utterances that normalize to zero tokens are dropped with a note on
/// stderr. Sessions come back in first-appearance order.
std::vector<Transcript> read_transcript_tsv(const std::string& path,
                                            const NormalizePolicy& policy = {});

void write_transcript_tsv(const std::string& path,
                          const std::vector<Transcript>& transcripts);

}  // namespace sepbench

#endif  // SEPBENCH_TRANSCRIPT_HPP_
