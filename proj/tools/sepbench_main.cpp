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

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sepbench/mixture.hpp"
#include "sepbench/pipeline.hpp"
#include "sepbench/report.hpp"
#include "sepbench/transcript.hpp"

namespace {

namespace fs = std::filesystem;
using namespace sepbench;

constexpr int kExitOk = 0;
constexpr int kExitConfigError = 1;
constexpr int kExitExcessFailures = 2;

std::string default_out_root() {
  const char* env = std::getenv("SEPBENCH_OUT");
  return env ? env : "";
}

std::string resolve_out(const std::string& flag_value, const std::string& fallback_name) {
  if (!flag_value.empty()) return flag_value;
  const std::string root = default_out_root();
  if (root.empty()) {
    throw CLI::ValidationError(
        "--out", "output path missing and SEPBENCH_OUT is not set");
  }
  return root + "/" + fallback_name;
}

std::vector<SourceRef> scan_source_dir(const std::string& dir) {
  std::vector<SourceRef> refs;
  if (!fs::is_directory(dir)) {
    throw std::runtime_error("not a directory: " + dir);
  }
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".wav") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  for (const auto& p : files) refs.push_back({p.stem().string(), p.string()});
  return refs;
}

std::vector<std::pair<std::string, std::string>> parse_labeled(
    const std::vector<std::string>& raw, const char* flag) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& item : raw) {
    const size_t eq = item.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == item.size()) {
      throw CLI::ValidationError(flag, "expected <label>=<path>, got " + item);
    }
    out.emplace_back(item.substr(0, eq), item.substr(eq + 1));
  }
  return out;
}

std::vector<std::string> split_csv(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot create " + path);
  f << text;
  if (!f) throw std::runtime_error("write failed: " + path);
}

int report_failures(const StageResult& r, int64_t total) {
  if (r.failed > 0) {
    std::cerr << r.failed << " of " << total << " entries failed\n";
    if (static_cast<double>(r.failed) > 0.10 * static_cast<double>(total)) {
      return kExitExcessFailures;
    }
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sepbench: reverberant multi-talker mixture synthesis and "
               "separation/recognition scoring"};
  app.require_subcommand(1);

  // ---- make-sources ------------------------------------------------------
  auto* make_sources = app.add_subcommand(
      "make-sources", "Generate speech-shaped test utterances");
  std::string ms_out;
  int ms_count = 8;
  double ms_lo = 1.5, ms_hi = 3.0;
  int ms_rate = 8000;
  uint64_t ms_seed = 1;
  make_sources->add_option("--out", ms_out, "Output directory");
  make_sources->add_option("--count", ms_count, "Number of utterances");
  make_sources->add_option("--min-seconds", ms_lo, "Shortest duration");
  make_sources->add_option("--max-seconds", ms_hi, "Longest duration");
  make_sources->add_option("--rate", ms_rate, "Sample rate (8000 or 16000)");
  make_sources->add_option("--seed", ms_seed, "Random seed");

  // ---- make-manifest -----------------------------------------------------
  auto* make_manifest = app.add_subcommand(
      "make-manifest", "Draw a seeded dataset manifest from a recipe");
  std::string mm_recipe = "sms-wsj";
  std::string mm_sources;
  std::string mm_noise_dir;
  std::string mm_out;
  int mm_count = 16;
  bool mm_grid = false;
  int mm_per_cell = 5;
  uint64_t mm_seed = 1;
  int mm_mics = -1;
  make_manifest->add_option("--recipe", mm_recipe,
                            "sms-wsj | sms-wsj-large | libri2mix");
  make_manifest->add_option("--sources", mm_sources, "Directory of source WAVs")
      ->required();
  make_manifest->add_option("--noise-dir", mm_noise_dir,
                            "Directory of noise WAVs (default: white noise)");
  make_manifest->add_option("--out", mm_out, "Manifest path");
  make_manifest->add_option("--count", mm_count, "Entries (non-grid manifests)");
  make_manifest->add_flag("--grid", mm_grid,
                          "Build the 12-cell T60 x SNR test grid");
  make_manifest->add_option("--per-cell", mm_per_cell, "Entries per grid cell");
  make_manifest->add_option("--seed", mm_seed, "Random seed");
  make_manifest->add_option("--mics", mm_mics, "Override microphone count");

  // ---- simulate ----------------------------------------------------------
  auto* simulate = app.add_subcommand(
      "simulate", "Synthesize manifest entries into per-entry WAV files");
  std::string sim_manifest, sim_out;
  int sim_jobs = 1;
  bool sim_resume = false;
  simulate->add_option("--manifest", sim_manifest, "Manifest path")->required();
  simulate->add_option("--out", sim_out, "Audio output directory");
  simulate->add_option("--jobs", sim_jobs, "Parallel workers");
  simulate->add_flag("--resume", sim_resume, "Skip entries with complete outputs");

  // ---- separate ----------------------------------------------------------
  auto* separate = app.add_subcommand(
      "separate", "Run a reference separator over simulated audio");
  std::string sep_manifest, sep_audio, sep_out, sep_kind = "oracle_direct";
  int sep_jobs = 1;
  bool sep_resume = false;
  separate->add_option("--manifest", sep_manifest, "Manifest path")->required();
  separate->add_option("--audio", sep_audio, "Simulated audio directory")->required();
  separate->add_option("--out", sep_out, "Estimate output directory");
  separate->add_option("--separator", sep_kind,
                       "passthrough | oracle_direct | irm | ibm | complex_mapping");
  separate->add_option("--jobs", sep_jobs, "Parallel workers");
  separate->add_flag("--resume", sep_resume, "Skip entries with complete outputs");

  // ---- score-signals -----------------------------------------------------
  auto* score_signals = app.add_subcommand(
      "score-signals", "Score estimates against direct-path references");
  std::string ss_manifest, ss_audio, ss_est, ss_out;
  std::string ss_metrics = "si_sdr,sdr,estoi";
  int ss_jobs = 1;
  score_signals->add_option("--manifest", ss_manifest, "Manifest path")->required();
  score_signals->add_option("--audio", ss_audio, "Simulated audio directory")
      ->required();
  score_signals->add_option("--estimates", ss_est, "Estimate directory")->required();
  score_signals->add_option("--out", ss_out, "Output JSONL path");
  score_signals->add_option("--metrics", ss_metrics,
                            "Comma-separated subset of si_sdr,sdr,estoi");
  score_signals->add_option("--jobs", ss_jobs, "Parallel workers");

  // ---- score-transcripts -------------------------------------------------
  auto* score_transcripts = app.add_subcommand(
      "score-transcripts", "cpWER of hypothesis sets against a reference");
  std::string st_ref, st_out;
  std::vector<std::string> st_hyps;
  double st_collar = 0.0;
  score_transcripts->add_option("--ref", st_ref, "Reference transcript TSV")
      ->required();
  score_transcripts
      ->add_option("--hyp", st_hyps, "Hypothesis set as <label>=<tsv>")
      ->required();
  score_transcripts->add_option("--collar", st_collar,
                                "Boundary relaxation collar in seconds");
  score_transcripts->add_option("--out", st_out, "Output directory");

  // ---- grid-report -------------------------------------------------------
  auto* grid_report = app.add_subcommand(
      "grid-report", "Aggregate scores over the T60 x SNR condition grid");
  std::string gr_manifest, gr_signals, gr_out, gr_csv;
  std::vector<std::string> gr_wer;
  grid_report->add_option("--manifest", gr_manifest, "Manifest path")->required();
  grid_report->add_option("--signals", gr_signals, "Signal scores JSONL");
  grid_report->add_option("--wer", gr_wer,
                          "Transcript scores as <label>=<jsonl>");
  grid_report->add_option("--out", gr_out, "Report JSON path");
  grid_report->add_option("--csv", gr_csv, "Report CSV path (optional)");

  // ---- heatmap -----------------------------------------------------------
  auto* heatmap = app.add_subcommand(
      "heatmap", "Render the relative-improvement heatmap as SVG");
  std::string hm_report, hm_baseline, hm_candidate, hm_out;
  heatmap->add_option("--report", hm_report, "Report JSON path")->required();
  heatmap->add_option("--baseline", hm_baseline, "Baseline WER label")->required();
  heatmap->add_option("--candidate", hm_candidate, "Candidate WER label")
      ->required();
  heatmap->add_option("--out", hm_out, "Output SVG path");

  // ---- relax-boundaries --------------------------------------------------
  auto* relax = app.add_subcommand(
      "relax-boundaries", "Apply a collar to transcript utterance boundaries");
  std::string rx_in, rx_out;
  double rx_collar = 0.25;
  double rx_session_length = -1.0;
  relax->add_option("--in", rx_in, "Transcript TSV")->required();
  relax->add_option("--collar", rx_collar, "Collar in seconds");
  relax->add_option("--session-length", rx_session_length,
                    "Clip boundaries to this length (default: last end + collar)");
  relax->add_option("--out", rx_out, "Output TSV path");

  // ---- run ---------------------------------------------------------------
  auto* run = app.add_subcommand(
      "run", "Full pipeline: simulate, separate, score, report");
  RunConfig rc;
  std::vector<std::string> run_hyps;
  std::string run_metrics = "si_sdr,sdr,estoi";
  run->add_option("--manifest", rc.manifest_path, "Manifest path")->required();
  run->add_option("--out", rc.out_dir, "Output root directory");
  run->add_option("--separator", rc.separator,
                  "passthrough | oracle_direct | irm | ibm | complex_mapping");
  run->add_option("--metrics", run_metrics, "Comma-separated metric set");
  run->add_option("--hyp", run_hyps, "Hypothesis transcript as <label>=<tsv>");
  run->add_option("--ref", rc.ref_transcript_path, "Reference transcript TSV");
  run->add_option("--collar", rc.collar, "Boundary relaxation collar in seconds");
  run->add_option("--jobs", rc.jobs, "Parallel workers");
  run->add_flag("--resume", rc.resume, "Skip entries with complete outputs");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // --help and friends exit cleanly; every parse failure is a config error.
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfigError;
  }

  try {
    if (*make_sources) {
      const std::string out = resolve_out(ms_out, "sources");
      const auto refs = make_source_pool(out, ms_count, {ms_lo, ms_hi}, ms_rate, ms_seed);
      std::cout << "wrote " << refs.size() << " utterances to " << out << "\n";
      return kExitOk;
    }

    if (*make_manifest) {
      RecipeConfig recipe;
      if (mm_recipe == "sms-wsj") {
        recipe = recipe_sms_wsj();
      } else if (mm_recipe == "sms-wsj-large") {
        recipe = recipe_sms_wsj_large();
      } else if (mm_recipe == "libri2mix") {
        recipe = recipe_libri2mix();
      } else {
        std::cerr << "unknown recipe: " << mm_recipe << "\n";
        return kExitConfigError;
      }
      recipe.sources = scan_source_dir(mm_sources);
      if (recipe.sources.empty()) {
        std::cerr << "no .wav files under " << mm_sources << "\n";
        return kExitConfigError;
      }
      if (!mm_noise_dir.empty()) {
        for (const auto& ref : scan_source_dir(mm_noise_dir)) {
          recipe.noise_files.push_back(ref.path);
        }
      }
      if (mm_mics > 0) recipe.array_mics = mm_mics;
      Manifest manifest =
          mm_grid ? build_grid_manifest(recipe, sms_wsj_large_test_grid(),
                                        mm_per_cell, mm_seed)
                  : build_manifest(recipe, mm_count, mm_seed);
      const std::string out = resolve_out(mm_out, "manifest.json");
      save_manifest(out, manifest);
      std::cout << "wrote " << manifest.entries.size() << " entries to " << out
                << "\n";
      return kExitOk;
    }

    if (*simulate) {
      const Manifest manifest = load_manifest(sim_manifest);
      const std::string out = resolve_out(sim_out, "audio");
      const StageResult r = simulate_stage(manifest, out, sim_jobs, sim_resume);
      std::cout << "simulated " << (r.processed - r.failed - r.skipped)
                << " entries (" << r.skipped << " skipped, " << r.failed
                << " failed) into " << out << "\n";
      return report_failures(r, static_cast<int64_t>(manifest.entries.size()));
    }

    if (*separate) {
      const Manifest manifest = load_manifest(sep_manifest);
      const std::string out = resolve_out(sep_out, "est");
      const StageResult r =
          separate_stage(manifest, sep_audio, out, sep_kind, sep_jobs, sep_resume);
      std::cout << "separated " << (r.processed - r.failed - r.skipped)
                << " entries (" << r.skipped << " skipped, " << r.failed
                << " failed) into " << out << "\n";
      return report_failures(r, static_cast<int64_t>(manifest.entries.size()));
    }

    if (*score_signals) {
      const Manifest manifest = load_manifest(ss_manifest);
      const std::string out = resolve_out(ss_out, "signal_scores.jsonl");
      const StageResult r = score_signals_stage(
          manifest, ss_audio, ss_est, out, split_csv(ss_metrics), ss_jobs);
      std::cout << "scored " << (r.processed - r.failed) << " entries into " << out
                << "\n";
      return report_failures(r, static_cast<int64_t>(manifest.entries.size()));
    }

    if (*score_transcripts) {
      const std::string out = resolve_out(st_out, "transcripts");
      const auto records = score_transcripts_stage(
          st_ref, parse_labeled(st_hyps, "--hyp"), st_collar, out);
      for (const auto& rec : records) {
        const auto& b = rec.result.breakdown;
        std::cout << rec.label << " " << rec.session_id << ": cpWER ";
        if (std::isinf(b.wer)) {
          std::cout << "undefined (empty reference)";
        } else {
          std::cout << b.wer * 100.0 << "%";
        }
        std::cout << " (" << b.substitutions << " sub, " << b.insertions
                  << " ins, " << b.deletions << " del / " << b.reference_words
                  << " words)\n";
      }
      return kExitOk;
    }

    if (*grid_report) {
      const Manifest manifest = load_manifest(gr_manifest);
      const GridReport report = grid_report_stage(
          manifest, gr_signals, parse_labeled(gr_wer, "--wer"), 0);
      const std::string out = resolve_out(gr_out, "report.json");
      write_text(out, report_to_json(report));
      if (!gr_csv.empty()) write_text(gr_csv, report_to_csv(report));
      std::cout << "wrote " << out << "\n";
      return kExitOk;
    }

    if (*heatmap) {
      std::ifstream f(hm_report, std::ios::binary);
      if (!f) throw std::runtime_error("cannot open " + hm_report);
      std::string text((std::istreambuf_iterator<char>(f)),
                       std::istreambuf_iterator<char>());
      const GridReport report = report_from_json(text);
      const std::string out = resolve_out(hm_out, "heatmap.svg");
      write_text(out, render_heatmap_svg(report, hm_baseline, hm_candidate));
      std::cout << "wrote " << out << "\n";
      return kExitOk;
    }

    if (*relax) {
      auto transcripts = read_transcript_tsv(rx_in);
      for (auto& t : transcripts) {
        double session_end = 0.0;
        for (const auto& u : t.utterances) session_end = std::max(session_end, u.end);
        const double limit =
            rx_session_length > 0.0 ? rx_session_length : session_end + rx_collar;
        t = relax_transcript(t, rx_collar, limit);
      }
      const std::string out = resolve_out(rx_out, "relaxed.tsv");
      write_transcript_tsv(out, transcripts);
      std::cout << "wrote " << out << "\n";
      return kExitOk;
    }

    if (*run) {
      rc.out_dir = resolve_out(rc.out_dir, "run");
      rc.metrics = split_csv(run_metrics);
      rc.hyp_sets = parse_labeled(run_hyps, "--hyp");
      const PipelineResult result = run_pipeline(rc);
      std::cout << "scored " << (result.total_entries - result.failed_entries)
                << " of " << result.total_entries << " entries; report at "
                << rc.out_dir << "/report.json\n";
      if (result.excess_failures()) return kExitExcessFailures;
      return kExitOk;
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfigError;
  }
  return kExitConfigError;
}
