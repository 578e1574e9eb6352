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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>

#include "sepbench/rng.hpp"
#include "sepbench/transcript.hpp"

using namespace sepbench;
namespace fs = std::filesystem;

namespace {

using Tokens = std::vector<std::string>;

// Plain quadratic edit-distance oracle (total edits only).
int64_t edit_distance_oracle(const Tokens& ref, const Tokens& hyp) {
  const size_t n = ref.size(), m = hyp.size();
  std::vector<std::vector<int64_t>> dp(n + 1, std::vector<int64_t>(m + 1));
  for (size_t i = 0; i <= n; ++i) dp[i][0] = static_cast<int64_t>(i);
  for (size_t j = 0; j <= m; ++j) dp[0][j] = static_cast<int64_t>(j);
  for (size_t i = 1; i <= n; ++i) {
    for (size_t j = 1; j <= m; ++j) {
      const int64_t sub = dp[i - 1][j - 1] + (ref[i - 1] == hyp[j - 1] ? 0 : 1);
      dp[i][j] = std::min({sub, dp[i - 1][j] + 1, dp[i][j - 1] + 1});
    }
  }
  return dp[n][m];
}

Tokens random_tokens(Rng& rng, int max_len, int vocab) {
  Tokens t;
  const int len = static_cast<int>(rng.uniform_int(max_len + 1));
  for (int i = 0; i < len; ++i) {
    t.push_back("w" + std::to_string(rng.uniform_int(vocab)));
  }
  return t;
}

Transcript make_ref(const std::vector<std::pair<std::string, Tokens>>& speakers) {
  Transcript t;
  t.session_id = "s1";
  double start = 0.0;
  for (const auto& [speaker, tokens] : speakers) {
    t.utterances.push_back({speaker, start, start + 1.0, tokens});
    start += 1.0;
  }
  return t;
}

}  // namespace

TEST_CASE("normalize_text basics") {
  CHECK(normalize_text("Hello, world!") == Tokens{"hello", "world"});
  CHECK(normalize_text("") == Tokens{});
  CHECK(normalize_text("A  b\tc") == Tokens{"a", "b", "c"});
  CHECK(normalize_text("Don't stop") == Tokens{"don't", "stop"});
  CHECK(normalize_text("...!?") == Tokens{});
  NormalizePolicy keep_case;
  keep_case.lowercase = false;
  CHECK(normalize_text("Hello There", keep_case) == Tokens{"Hello", "There"});
}

TEST_CASE("wer frozen cases") {
  SUBCASE("identical sequences") {
    const auto b = wer({"a", "b", "c"}, {"a", "b", "c"});
    CHECK(b.substitutions == 0);
    CHECK(b.insertions == 0);
    CHECK(b.deletions == 0);
    CHECK(b.wer == 0.0);
  }
  SUBCASE("empty hypothesis deletes everything") {
    const auto b = wer({"a", "b", "c"}, {});
    CHECK(b.deletions == 3);
    CHECK(b.wer == doctest::Approx(1.0));
  }
  SUBCASE("the S=1 I=1 D=0 alignment") {
    const auto b = wer({"a", "b", "c"}, {"a", "x", "c", "d"});
    CHECK(b.substitutions == 1);
    CHECK(b.insertions == 1);
    CHECK(b.deletions == 0);
    CHECK(b.reference_words == 3);
    CHECK(b.wer == doctest::Approx(2.0 / 3.0));
  }
  SUBCASE("empty reference with hypothesis: infinite sentinel, counts intact") {
    const auto b = wer({}, {"x", "y"});
    CHECK(b.insertions == 2);
    CHECK(b.reference_words == 0);
    CHECK(std::isinf(b.wer));
  }
  SUBCASE("both empty") {
    const auto b = wer({}, {});
    CHECK(b.wer == 0.0);
  }
  SUBCASE("ties prefer substitutions over insert+delete pairs") {
    // [a] vs [b]: one substitution, never one insertion plus one deletion.
    const auto b = wer({"a"}, {"b"});
    CHECK(b.substitutions == 1);
    CHECK(b.insertions == 0);
    CHECK(b.deletions == 0);
  }
}

TEST_CASE("wer equals the DP oracle on 500 random pairs") {
  Rng rng(515);
  for (int trial = 0; trial < 500; ++trial) {
    const auto ref = random_tokens(rng, 30, 8);
    const auto hyp = random_tokens(rng, 30, 8);
    const auto b = wer(ref, hyp);
    CHECK(b.edits() == edit_distance_oracle(ref, hyp));
    // Count identities always hold.
    CHECK(b.reference_words == static_cast<int64_t>(ref.size()));
    CHECK(b.substitutions + b.deletions <= static_cast<int64_t>(ref.size()));
    CHECK(b.substitutions + b.insertions <= static_cast<int64_t>(hyp.size()));
    CHECK(static_cast<int64_t>(ref.size()) - b.deletions ==
          static_cast<int64_t>(hyp.size()) - b.insertions);
  }
}

TEST_CASE("edit counts satisfy the triangle inequality on edits") {
  Rng rng(516);
  for (int trial = 0; trial < 200; ++trial) {
    const auto a = random_tokens(rng, 12, 4);
    const auto b = random_tokens(rng, 12, 4);
    const auto c = random_tokens(rng, 12, 4);
    CHECK(wer(a, b).edits() <= wer(a, c).edits() + wer(c, b).edits());
    CHECK(wer(a, a).edits() == 0);
  }
}

TEST_CASE("cpwer: single speaker collapses to plain wer") {
  const auto ref = make_ref({{"spk1", {"good", "morning", "team"}}});
  std::vector<HypothesisStream> streams{{"h1", {{"good", "morning", "tim"}}}};
  const auto res = cpwer(ref, streams);
  const auto plain = wer({"good", "morning", "team"}, {"good", "morning", "tim"});
  CHECK(res.breakdown.edits() == plain.edits());
  CHECK(res.breakdown.wer == doctest::Approx(plain.wer));
  REQUIRE(res.pairs.size() == 1);
  CHECK(res.pairs[0].stream_id == "h1");
  CHECK(res.pairs[0].speaker_id == "spk1");
}

TEST_CASE("cpwer: swapped streams recover the permutation with zero errors") {
  const auto ref = make_ref({{"alice", {"one", "two"}}, {"bob", {"three", "four"}}});
  std::vector<HypothesisStream> streams{{"s1", {{"three", "four"}}},
                                        {"s2", {{"one", "two"}}}};
  const auto res = cpwer(ref, streams);
  CHECK(res.breakdown.edits() == 0);
  CHECK(res.breakdown.wer == 0.0);
  for (const auto& p : res.pairs) {
    if (p.stream_id == "s1") CHECK(p.speaker_id == "bob");
    if (p.stream_id == "s2") CHECK(p.speaker_id == "alice");
  }
}

TEST_CASE("cpwer equals exhaustive permutation search on random instances") {
  Rng rng(517);
  for (int trial = 0; trial < 200; ++trial) {
    const int speakers = 2 + static_cast<int>(rng.uniform_int(3));  // 2..4
    std::vector<std::pair<std::string, Tokens>> ref_speakers;
    std::vector<Tokens> ref_tokens;
    for (int s = 0; s < speakers; ++s) {
      auto tokens = random_tokens(rng, 10, 5);
      tokens.push_back("tail" + std::to_string(s));  // keep speakers non-empty
      ref_speakers.push_back({"spk" + std::to_string(s), tokens});
      ref_tokens.push_back(tokens);
    }
    std::vector<HypothesisStream> streams;
    std::vector<Tokens> hyp_tokens;
    for (int s = 0; s < speakers; ++s) {
      const auto tokens = random_tokens(rng, 10, 5);
      streams.push_back({"h" + std::to_string(s), {tokens}});
      hyp_tokens.push_back(tokens);
    }

    const auto res = cpwer(make_ref(ref_speakers), streams);

    // Brute force over all speaker-to-stream pairings.
    std::vector<int> perm(speakers);
    std::iota(perm.begin(), perm.end(), 0);
    int64_t best = -1;
    do {
      int64_t total = 0;
      for (int i = 0; i < speakers; ++i) {
        total += wer(ref_tokens[perm[i]], hyp_tokens[i]).edits();
      }
      if (best < 0 || total < best) best = total;
    } while (std::next_permutation(perm.begin(), perm.end()));

    CHECK(res.breakdown.edits() == best);
    // Optimization dominance against the identity pairing.
    int64_t identity = 0;
    for (int i = 0; i < speakers; ++i) {
      identity += wer(ref_tokens[i], hyp_tokens[i]).edits();
    }
    CHECK(res.breakdown.edits() <= identity);
  }
}

TEST_CASE("cpwer pads unequal counts with empty pseudo entities") {
  SUBCASE("more streams than speakers: extra words are insertions") {
    const auto ref = make_ref({{"spk1", {"hello", "there"}}});
    std::vector<HypothesisStream> streams{{"h1", {{"hello", "there"}}},
                                          {"h2", {{"spurious", "words"}}}};
    const auto res = cpwer(ref, streams);
    CHECK(res.breakdown.insertions == 2);
    CHECK(res.breakdown.deletions == 0);
    CHECK(res.breakdown.reference_words == 2);
    CHECK(res.breakdown.wer == doctest::Approx(1.0));
    bool found_padded = false;
    for (const auto& p : res.pairs) {
      if (p.stream_id == "h2") {
        CHECK(p.speaker_id.empty());  // matched to the padded pseudo-speaker
        found_padded = true;
      }
    }
    CHECK(found_padded);
  }
  SUBCASE("more speakers than streams: missing words are deletions") {
    const auto ref =
        make_ref({{"spk1", {"hello", "there"}}, {"spk2", {"more", "text"}}});
    std::vector<HypothesisStream> streams{{"h1", {{"hello", "there"}}}};
    const auto res = cpwer(ref, streams);
    CHECK(res.breakdown.deletions == 2);
    CHECK(res.breakdown.insertions == 0);
    CHECK(res.breakdown.reference_words == 4);
  }
}

TEST_CASE("cpwer is invariant under stream relabeling") {
  Rng rng(518);
  const auto ref = make_ref({{"a", {"x", "y", "z"}}, {"b", {"p", "q"}}});
  std::vector<HypothesisStream> streams{{"h1", {{"x", "y"}}}, {"h2", {{"p", "q", "r"}}}};
  const auto base = cpwer(ref, streams);
  std::vector<HypothesisStream> relabeled{{"zeta", {{"p", "q", "r"}}},
                                          {"alpha", {{"x", "y"}}}};
  const auto swapped = cpwer(ref, relabeled);
  CHECK(base.breakdown.edits() == swapped.breakdown.edits());
  CHECK(base.breakdown.wer == doctest::Approx(swapped.breakdown.wer));
}

TEST_CASE("cpwer pair counts sum to the total breakdown") {
  const auto ref = make_ref({{"a", {"one", "two", "three"}},
                             {"b", {"four"}},
                             {"c", {"five", "six"}}});
  std::vector<HypothesisStream> streams{{"h1", {{"one", "two"}}},
                                        {"h2", {{"four", "oops"}}}};
  const auto res = cpwer(ref, streams);
  int64_t s = 0, i = 0, d = 0, w = 0;
  for (const auto& p : res.pairs) {
    s += p.breakdown.substitutions;
    i += p.breakdown.insertions;
    d += p.breakdown.deletions;
    w += p.breakdown.reference_words;
  }
  CHECK(s == res.breakdown.substitutions);
  CHECK(i == res.breakdown.insertions);
  CHECK(d == res.breakdown.deletions);
  CHECK(w == res.breakdown.reference_words);
}

TEST_CASE("cpwer concatenates a speaker's utterances in start-time order") {
  Transcript ref;
  ref.session_id = "s";
  ref.utterances.push_back({"spk", 5.0, 6.0, {"world"}});
  ref.utterances.push_back({"spk", 1.0, 2.0, {"hello"}});
  std::vector<HypothesisStream> streams{{"h", {{"hello", "world"}}}};
  CHECK(cpwer(ref, streams).breakdown.edits() == 0);
}

TEST_CASE("apply_collar frozen cases") {
  SUBCASE("zero collar changes nothing") {
    const std::vector<SegmentBoundary> in{{"a", 2.0, 5.0}, {"b", 1.0, 1.5}};
    const auto out = apply_collar(in, 0.0, 10.0);
    REQUIRE(out.size() == 2);
    CHECK(out[0].start == 2.0);
    CHECK(out[0].end == 5.0);
  }
  SUBCASE("250 ms widens both sides") {
    const auto out = apply_collar({{"a", 2.0, 5.0}}, 0.25, 10.0);
    REQUIRE(out.size() == 1);
    CHECK(out[0].start == doctest::Approx(1.75));
    CHECK(out[0].end == doctest::Approx(5.25));
  }
  SUBCASE("same-speaker segments merge after expansion, clipped at zero") {
    const auto out = apply_collar({{"a", 0.0, 1.0}, {"a", 1.3, 2.0}}, 0.25, 3.0);
    REQUIRE(out.size() == 1);
    CHECK(out[0].start == doctest::Approx(0.0));
    CHECK(out[0].end == doctest::Approx(2.25));
  }
  SUBCASE("different speakers never merge") {
    const auto out = apply_collar({{"a", 0.0, 1.0}, {"b", 1.3, 2.0}}, 0.25, 3.0);
    CHECK(out.size() == 2);
  }
  SUBCASE("clipping at the session end") {
    const auto out = apply_collar({{"a", 1.0, 2.0}}, 0.25, 2.1);
    CHECK(out[0].end == doctest::Approx(2.1));
  }
  SUBCASE("negative collar rejected") {
    CHECK_THROWS(apply_collar({{"a", 0.0, 1.0}}, -0.1, 2.0));
  }
}

TEST_CASE("covered duration is monotone in the collar width") {
  Rng rng(519);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<SegmentBoundary> segs;
    const int n = 1 + static_cast<int>(rng.uniform_int(6));
    for (int i = 0; i < n; ++i) {
      const double start = 10.0 * rng.uniform();
      segs.push_back({"spk" + std::to_string(rng.uniform_int(2)), start,
                      start + 0.2 + rng.uniform()});
    }
    double prev = -1.0;
    for (double collar : {0.0, 0.1, 0.25, 0.5, 1.0}) {
      const auto out = apply_collar(segs, collar, 12.0);
      double covered = 0.0;
      for (const auto& s : out) covered += s.end - s.start;
      CHECK(covered >= prev);
      prev = covered;
    }
  }
}

TEST_CASE("larger collar never shrinks a surviving segment's span") {
  const std::vector<SegmentBoundary> segs{{"a", 1.0, 2.0}, {"a", 4.0, 5.0}};
  const auto narrow = apply_collar(segs, 0.1, 10.0);
  const auto wide = apply_collar(segs, 0.5, 10.0);
  // Each narrow segment lies inside some wide segment.
  for (const auto& n : narrow) {
    bool contained = false;
    for (const auto& w : wide) {
      if (w.speaker == n.speaker && w.start <= n.start && w.end >= n.end) {
        contained = true;
      }
    }
    CHECK(contained);
  }
}

TEST_CASE("relax_transcript merges token sequences in time order") {
  Transcript t;
  t.session_id = "s";
  t.utterances.push_back({"a", 0.0, 1.0, {"first"}});
  t.utterances.push_back({"a", 1.3, 2.0, {"second"}});
  const auto relaxed = relax_transcript(t, 0.25, 3.0);
  REQUIRE(relaxed.utterances.size() == 1);
  CHECK(relaxed.utterances[0].tokens == Tokens{"first", "second"});
  CHECK(relaxed.utterances[0].start == doctest::Approx(0.0));
  CHECK(relaxed.utterances[0].end == doctest::Approx(2.25));
}

TEST_CASE("tsv ingestion: fields, text with spaces, dropped empties") {
  const auto dir = fs::temp_directory_path() / "sepbench_tsv";
  fs::create_directories(dir);
  const auto path = (dir / "ref.tsv").string();
  {
    std::ofstream f(path);
    f << "sess1\tspk1\t0.0\t1.5\tHello there, General!\n";
    f << "# a comment line\n";
    f << "sess1\tspk2\t1.0\t2.0\t...\n";  // normalizes to nothing: dropped
    f << "sess2\tspk1\t0.5\t1.0\tshort one\n";
    f << "\n";
  }
  const auto sessions = read_transcript_tsv(path);
  REQUIRE(sessions.size() == 2);
  CHECK(sessions[0].session_id == "sess1");
  REQUIRE(sessions[0].utterances.size() == 1);
  CHECK(sessions[0].utterances[0].tokens == Tokens{"hello", "there", "general"});
  CHECK(sessions[1].utterances[0].tokens == Tokens{"short", "one"});
}

TEST_CASE("tsv ingestion rejects malformed rows") {
  const auto dir = fs::temp_directory_path() / "sepbench_tsv_bad";
  fs::create_directories(dir);
  SUBCASE("missing fields") {
    const auto path = (dir / "bad1.tsv").string();
    std::ofstream(path) << "sess1\tspk1\t0.0\n";
    CHECK_THROWS(read_transcript_tsv(path));
  }
  SUBCASE("start not before end") {
    const auto path = (dir / "bad2.tsv").string();
    std::ofstream(path) << "sess1\tspk1\t2.0\t2.0\thello\n";
    CHECK_THROWS(read_transcript_tsv(path));
  }
  SUBCASE("unparseable time") {
    const auto path = (dir / "bad3.tsv").string();
    std::ofstream(path) << "sess1\tspk1\tzero\t1.0\thello\n";
    CHECK_THROWS(read_transcript_tsv(path));
  }
}

TEST_CASE("tsv write/read round trip") {
  Transcript t;
  t.session_id = "round";
  t.utterances.push_back({"spk1", 0.25, 1.75, {"alpha", "beta"}});
  t.utterances.push_back({"spk2", 2.0, 3.0, {"gamma"}});
  const auto dir = fs::temp_directory_path() / "sepbench_tsv_rt";
  fs::create_directories(dir);
  const auto path = (dir / "t.tsv").string();
  write_transcript_tsv(path, {t});
  const auto back = read_transcript_tsv(path);
  REQUIRE(back.size() == 1);
  REQUIRE(back[0].utterances.size() == 2);
  CHECK(back[0].utterances[0].tokens == Tokens{"alpha", "beta"});
  CHECK(back[0].utterances[0].start == doctest::Approx(0.25));
}
