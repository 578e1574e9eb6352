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

#include "sepbench/transcript.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <stdexcept>

#include "sepbench/assignment.hpp"

namespace sepbench {

std::vector<std::string> normalize_text(const std::string& raw,
                                        const NormalizePolicy& policy) {
  std::string cleaned;
  cleaned.reserve(raw.size());
  for (char ch : raw) {
    if (policy.strip_chars.find(ch) != std::string::npos) continue;
    if (policy.lowercase && ch >= 'A' && ch <= 'Z') {
      cleaned.push_back(static_cast<char>(ch - 'A' + 'a'));
    } else {
      cleaned.push_back(ch);
    }
  }
  std::vector<std::string> tokens;
  std::string current;
  for (char ch : cleaned) {
    if (std::isspace(static_cast<unsigned char>(ch))) {
      if (!current.empty()) {
        tokens.push_back(std::move(current));
        current.clear();
      }
    } else {
      current.push_back(ch);
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

WerBreakdown wer(const std::vector<std::string>& reference,
                 const std::vector<std::string>& hypothesis) {
  const size_t n = reference.size();
  const size_t m = hypothesis.size();

  // Cell cost is (edits, insertions + deletions), compared lexicographically
  // so minimal alignments prefer substitutions over insert+delete pairs.
  struct Cell {
    int64_t edits;
    int64_t indel;
    int64_t sub, ins, del;
  };
  auto better = [](const Cell& a, const Cell& b) {
    if (a.edits != b.edits) return a.edits < b.edits;
    return a.indel < b.indel;
  };

  std::vector<Cell> prev(m + 1), cur(m + 1);
  for (size_t j = 0; j <= m; ++j) {
    prev[j] = {static_cast<int64_t>(j), static_cast<int64_t>(j), 0,
               static_cast<int64_t>(j), 0};
  }
  for (size_t i = 1; i <= n; ++i) {
    cur[0] = {static_cast<int64_t>(i), static_cast<int64_t>(i), 0, 0,
              static_cast<int64_t>(i)};
    for (size_t j = 1; j <= m; ++j) {
      const bool match = reference[i - 1] == hypothesis[j - 1];
      Cell diag = prev[j - 1];
      if (!match) {
        diag.edits += 1;
        diag.sub += 1;
      }
      Cell del = prev[j];
      del.edits += 1;
      del.indel += 1;
      del.del += 1;
      Cell ins = cur[j - 1];
      ins.edits += 1;
      ins.indel += 1;
      ins.ins += 1;

      Cell best = diag;
      if (better(del, best)) best = del;
      if (better(ins, best)) best = ins;
      cur[j] = best;
    }
    std::swap(prev, cur);
  }

  const Cell& final_cell = prev[m];
  WerBreakdown out;
  out.substitutions = final_cell.sub;
  out.insertions = final_cell.ins;
  out.deletions = final_cell.del;
  out.reference_words = static_cast<int64_t>(n);
  if (n == 0) {
    out.wer = final_cell.edits == 0 ? 0.0 : std::numeric_limits<double>::infinity();
  } else {
    out.wer = static_cast<double>(final_cell.edits) / static_cast<double>(n);
  }
  return out;
}

namespace {

std::vector<std::string> concatenate_speaker(const Transcript& transcript,
                                             const std::string& speaker) {
  // Stable sort keeps input order on equal start times.
  std::vector<const Utterance*> utts;
  for (const auto& u : transcript.utterances) {
    if (u.speaker == speaker) utts.push_back(&u);
  }
  std::stable_sort(utts.begin(), utts.end(),
                   [](const Utterance* a, const Utterance* b) {
                     return a->start < b->start;
                   });
  std::vector<std::string> tokens;
  for (const Utterance* u : utts) {
    tokens.insert(tokens.end(), u->tokens.begin(), u->tokens.end());
  }
  return tokens;
}

}  // namespace

CpWerResult cpwer(const Transcript& reference,
                  const std::vector<HypothesisStream>& streams) {
  std::vector<std::string> speakers;
  for (const auto& u : reference.utterances) {
    if (std::find(speakers.begin(), speakers.end(), u.speaker) == speakers.end()) {
      speakers.push_back(u.speaker);
    }
  }
  if (speakers.empty()) {
    throw std::invalid_argument("cpwer: reference has no speakers");
  }

  std::vector<std::vector<std::string>> ref_concat;
  for (const auto& s : speakers) {
    ref_concat.push_back(concatenate_speaker(reference, s));
  }
  std::vector<std::vector<std::string>> hyp_concat;
  for (const auto& stream : streams) {
    std::vector<std::string> tokens;
    for (const auto& utt : stream.utterance_tokens) {
      tokens.insert(tokens.end(), utt.begin(), utt.end());
    }
    hyp_concat.push_back(std::move(tokens));
  }

  // Square the problem with empty pseudo-speakers / pseudo-streams.
  const size_t k = std::max(speakers.size(), streams.size());
  ref_concat.resize(k);
  hyp_concat.resize(k);

  std::vector<std::vector<WerBreakdown>> table(k, std::vector<WerBreakdown>(k));
  std::vector<std::vector<double>> cost(k, std::vector<double>(k));
  for (size_t i = 0; i < k; ++i) {
    for (size_t j = 0; j < k; ++j) {
      table[i][j] = wer(ref_concat[j], hyp_concat[i]);
      cost[i][j] = static_cast<double>(table[i][j].edits());
    }
  }
  const AssignmentResult assigned = solve_assignment(cost, /*minimize=*/true);

  CpWerResult result;
  for (size_t i = 0; i < k; ++i) {
    const size_t j = static_cast<size_t>(assigned.assignment[i]);
    CpWerPair pair;
    pair.stream_id = i < streams.size() ? streams[i].stream_id : std::string();
    pair.speaker_id = j < speakers.size() ? speakers[j] : std::string();
    pair.breakdown = table[i][j];
    result.breakdown.substitutions += pair.breakdown.substitutions;
    result.breakdown.insertions += pair.breakdown.insertions;
    result.breakdown.deletions += pair.breakdown.deletions;
    result.breakdown.reference_words += pair.breakdown.reference_words;
    result.pairs.push_back(std::move(pair));
  }
  if (result.breakdown.reference_words == 0) {
    result.breakdown.wer = result.breakdown.edits() == 0
                               ? 0.0
                               : std::numeric_limits<double>::infinity();
  } else {
    result.breakdown.wer =
        static_cast<double>(result.breakdown.edits()) /
        static_cast<double>(result.breakdown.reference_words);
  }
  return result;
}

std::vector<SegmentBoundary> apply_collar(
    const std::vector<SegmentBoundary>& boundaries, double collar,
    double session_length) {
  if (collar < 0.0) throw std::invalid_argument("collar: must be >= 0");

  std::vector<std::string> speakers;
  for (const auto& b : boundaries) {
    if (std::find(speakers.begin(), speakers.end(), b.speaker) == speakers.end()) {
      speakers.push_back(b.speaker);
    }
  }

  std::vector<SegmentBoundary> out;
  for (const auto& speaker : speakers) {
    std::vector<SegmentBoundary> expanded;
    for (const auto& b : boundaries) {
      if (b.speaker != speaker) continue;
      expanded.push_back({speaker, std::max(0.0, b.start - collar),
                          std::min(session_length, b.end + collar)});
    }
    std::stable_sort(expanded.begin(), expanded.end(),
                     [](const SegmentBoundary& a, const SegmentBoundary& b) {
                       return a.start < b.start;
                     });
    for (const auto& seg : expanded) {
      if (!out.empty() && out.back().speaker == speaker &&
          seg.start <= out.back().end) {
        out.back().end = std::max(out.back().end, seg.end);
      } else {
        out.push_back(seg);
      }
    }
  }
  return out;
}

Transcript relax_transcript(const Transcript& transcript, double collar,
                            double session_length) {
  if (collar < 0.0) throw std::invalid_argument("collar: must be >= 0");
  Transcript out;
  out.session_id = transcript.session_id;

  std::vector<std::string> speakers;
  for (const auto& u : transcript.utterances) {
    if (std::find(speakers.begin(), speakers.end(), u.speaker) == speakers.end()) {
      speakers.push_back(u.speaker);
    }
  }
  for (const auto& speaker : speakers) {
    std::vector<Utterance> expanded;
    for (const auto& u : transcript.utterances) {
      if (u.speaker != speaker) continue;
      Utterance e = u;
      e.start = std::max(0.0, u.start - collar);
      e.end = std::min(session_length, u.end + collar);
      expanded.push_back(std::move(e));
    }
    std::stable_sort(expanded.begin(), expanded.end(),
                     [](const Utterance& a, const Utterance& b) {
                       return a.start < b.start;
                     });
    for (auto& u : expanded) {
      if (!out.utterances.empty() && out.utterances.back().speaker == speaker &&
          u.start <= out.utterances.back().end) {
        auto& last = out.utterances.back();
        last.end = std::max(last.end, u.end);
        last.tokens.insert(last.tokens.end(), u.tokens.begin(), u.tokens.end());
      } else {
        out.utterances.push_back(std::move(u));
      }
    }
  }
  return out;
}

std::vector<Transcript> read_transcript_tsv(const std::string& path,
                                            const NormalizePolicy& policy) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("transcript: cannot open " + path);

  std::vector<Transcript> sessions;
  std::map<std::string, size_t> session_index;
  std::string line;
  size_t line_no = 0;
  while (std::getline(f, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;

    std::array<std::string, 4> fields;
    size_t pos = 0;
    for (auto& field : fields) {
      const size_t tab = line.find('\t', pos);
      if (tab == std::string::npos) {
        throw std::runtime_error("transcript: " + path + " line " +
                                 std::to_string(line_no) +
                                 ": expected 5 tab-separated fields");
      }
      field = line.substr(pos, tab - pos);
      pos = tab + 1;
    }
    const std::string text = line.substr(pos);

    Utterance utt;
    utt.speaker = fields[1];
    try {
      utt.start = std::stod(fields[2]);
      utt.end = std::stod(fields[3]);
    } catch (const std::exception&) {
      throw std::runtime_error("transcript: " + path + " line " +
                               std::to_string(line_no) + ": bad start/end time");
    }
    if (!(utt.start < utt.end)) {
      throw std::runtime_error("transcript: " + path + " line " +
                               std::to_string(line_no) +
                               ": start must be earlier than end");
    }
    utt.tokens = normalize_text(text, policy);
    if (utt.tokens.empty()) {
      std::cerr << "note: dropping empty utterance at " << path << " line "
                << line_no << "\n";
      continue;
    }

    const std::string& session = fields[0];
    auto it = session_index.find(session);
    if (it == session_index.end()) {
      session_index.emplace(session, sessions.size());
      sessions.push_back({session, {}});
      it = session_index.find(session);
    }
    sessions[it->second].utterances.push_back(std::move(utt));
  }
  return sessions;
}

void write_transcript_tsv(const std::string& path,
                          const std::vector<Transcript>& transcripts) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("transcript: cannot create " + path);
  char buf[64];
  for (const auto& t : transcripts) {
    for (const auto& u : t.utterances) {
      std::string text;
      for (size_t i = 0; i < u.tokens.size(); ++i) {
        if (i) text.push_back(' ');
        text += u.tokens[i];
      }
      std::snprintf(buf, sizeof(buf), "%.3f\t%.3f", u.start, u.end);
      f << t.session_id << '\t' << u.speaker << '\t' << buf << '\t' << text << '\n';
    }
  }
  if (!f) throw std::runtime_error("transcript: write failed: " + path);
}

}  // namespace sepbench
