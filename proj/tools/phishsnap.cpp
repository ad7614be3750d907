/*
 * Copyright 2026 The PhishSnap Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// phishsnap: hash screenshots, maintain the reference bank, calibrate the
// threshold and evaluate it, generate the synthetic corpus, and export the
// browser-extension bundle.
//
// Exit codes: 0 success, 1 operational error, 2 usage error.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "phishsnap/phishsnap.hpp"

namespace fs = std::filesystem;
using namespace phishsnap;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitUsage = 2;

constexpr const char* kCoreArtifact = "phishsnap_core.wasm";

std::string read_text(const fs::path& path) {
  const Bytes b = read_file(path);
  return std::string(b.begin(), b.end());
}

HashBank read_bank(const fs::path& path) { return load_bank(read_text(path)); }

Timestamp timestamp_or_now(const std::optional<std::string>& text) {
  if (!text) return now_utc();
  const auto ts = parse_timestamp(*text);
  if (!ts) throw InvalidInputError("--captured-at must be YYYY-MM-DDTHH:MM:SSZ");
  return *ts;
}

std::string fixed2(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

nlohmann::ordered_json metrics_json(int threshold, const ConfusionCounts& c, const Metrics& m, std::size_t excluded) {
  nlohmann::ordered_json doc;
  doc["threshold"] = threshold;
  doc["precision"] = m.precision;
  doc["recall"] = m.recall;
  doc["f1"] = m.f1;
  doc["accuracy"] = m.accuracy;
  doc["tp"] = c.tp;
  doc["fp"] = c.fp;
  doc["fn"] = c.fn;
  doc["tn"] = c.tn;
  doc["excluded"] = excluded;
  return doc;
}

void report_exclusions(const std::vector<ScoredSample>& scored) {
  for (const auto& s : scored) {
    if (s.excluded()) std::cerr << "excluded: " << s.sample.screenshot_path << ": " << s.error << "\n";
  }
}

fs::path executable_dir(const char* argv0) {
  std::error_code ec;
  const fs::path self = fs::read_symlink("/proc/self/exe", ec);
  if (!ec) return self.parent_path();
  return fs::absolute(argv0).parent_path();
}

std::optional<fs::path> locate_core(const std::string& flag, const fs::path& exe_dir) {
  if (!flag.empty()) return fs::exists(flag) ? std::optional<fs::path>(flag) : std::nullopt;
  if (const char* env = std::getenv("PHISHSNAP_CORE_WASM"); env != nullptr && *env != '\0') {
    return fs::exists(env) ? std::optional<fs::path>(env) : std::nullopt;
  }
  const fs::path beside = exe_dir / kCoreArtifact;
  if (fs::exists(beside)) return beside;
  return std::nullopt;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"phishsnap: screenshot perceptual hashing and phishing verdicts"};
  app.require_subcommand(1);

  // hash
  auto* hash_cmd = app.add_subcommand("hash", "Print the 64-bit perceptual hash of an image");
  std::string hash_image;
  hash_cmd->add_option("image", hash_image, "PNG or JPEG file")->required();

  // bank add / bank build
  auto* bank_cmd = app.add_subcommand("bank", "Maintain a hash bank file");
  bank_cmd->require_subcommand(1);
  auto* add_cmd = bank_cmd->add_subcommand("add", "Add one legitimate page to the bank");
  std::string add_bank, add_brand, add_url, add_image;
  std::optional<std::string> add_time;
  add_cmd->add_option("--bank", add_bank, "Bank file (created if absent)")->required();
  add_cmd->add_option("--brand", add_brand, "Brand label")->required();
  add_cmd->add_option("--url", add_url, "Canonical page URL")->required();
  add_cmd->add_option("--captured-at", add_time, "Capture time, YYYY-MM-DDTHH:MM:SSZ (default: now)");
  add_cmd->add_option("image", add_image, "Screenshot of the legitimate page")->required();

  auto* build_cmd = bank_cmd->add_subcommand("build", "Add every safe row of a manifest to the bank");
  std::string build_bank, build_manifest;
  std::optional<std::string> build_time;
  build_cmd->add_option("--bank", build_bank, "Bank file (created if absent)")->required();
  build_cmd->add_option("--manifest", build_manifest, "Manifest CSV, e.g. a corpus train.csv")->required();
  build_cmd->add_option("--captured-at", build_time, "Capture time, YYYY-MM-DDTHH:MM:SSZ (default: now)");

  // scan
  auto* scan_cmd = app.add_subcommand("scan", "Classify a screenshot against the bank");
  std::string scan_bank, scan_image;
  std::optional<int> scan_threshold;
  bool scan_json = false;
  scan_cmd->add_option("--bank", scan_bank, "Bank file")->required();
  scan_cmd->add_option("--threshold", scan_threshold, "Override the bank threshold")->check(CLI::Range(0, 64));
  scan_cmd->add_flag("--json", scan_json, "Print the verdict as JSON");
  scan_cmd->add_option("image", scan_image, "Screenshot to classify")->required();

  // calibrate
  auto* cal_cmd = app.add_subcommand("calibrate", "Choose the threshold that maximizes F1 on a manifest");
  std::string cal_bank, cal_manifest, cal_sweep;
  bool cal_write = false;
  cal_cmd->add_option("--bank", cal_bank, "Bank file")->required();
  cal_cmd->add_option("--manifest", cal_manifest, "Validation manifest CSV")->required();
  cal_cmd->add_flag("--write", cal_write, "Store the chosen threshold in the bank file");
  cal_cmd->add_option("--sweep-out", cal_sweep, "Write the per-threshold sweep as CSV");

  // eval
  auto* eval_cmd = app.add_subcommand("eval", "Compute precision/recall/F1/accuracy on a manifest");
  std::string eval_bank, eval_manifest, eval_report, eval_verdicts;
  int eval_threshold = 0;
  eval_cmd->add_option("--bank", eval_bank, "Bank file")->required();
  eval_cmd->add_option("--manifest", eval_manifest, "Test manifest CSV")->required();
  eval_cmd->add_option("--threshold", eval_threshold, "Decision threshold")->required()->check(CLI::Range(0, 64));
  eval_cmd->add_option("--report", eval_report, "Write the full JSON report, including per-sample verdicts");
  eval_cmd->add_option("--verdicts", eval_verdicts, "Write the per-sample verdict log as CSV");

  // gen-corpus
  auto* gen_cmd = app.add_subcommand("gen-corpus", "Generate the synthetic labeled screenshot corpus");
  CorpusSpec spec;
  std::string gen_out;
  gen_cmd->add_option("--out", gen_out, "Output directory")->required();
  gen_cmd->add_option("--seed", spec.seed, "Root seed")->capture_default_str();
  gen_cmd->add_option("--brands", spec.brands, "Brand templates")->capture_default_str()->check(CLI::PositiveNumber);
  gen_cmd->add_option("--captures", spec.captures_per_brand, "Bank (training) captures per brand")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  gen_cmd->add_option("--mimics", spec.mimics_per_brand, "Visual clones per brand")->capture_default_str();
  gen_cmd->add_option("--unrelated", spec.unrelated, "Unrelated pages")->capture_default_str();

  // export-bundle
  auto* export_cmd = app.add_subcommand("export-bundle", "Write the extension's static assets");
  std::string export_bank, export_out, export_core;
  export_cmd->add_option("--bank", export_bank, "Bank file")->required();
  export_cmd->add_option("--out", export_out, "Bundle directory")->required();
  export_cmd->add_option("--core", export_core,
                         "Compiled core (default: $PHISHSNAP_CORE_WASM, then phishsnap_core.wasm next to this tool)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*hash_cmd) {
      std::cout << compute_phash(decode_image_file(hash_image)).to_hex() << "\n";
      return kExitOk;
    }

    if (*add_cmd) {
      const HashBank bank = fs::exists(add_bank) ? read_bank(add_bank) : HashBank(kDefaultThreshold);
      BankEntry entry{add_brand, add_url, compute_phash(decode_image_file(add_image)), timestamp_or_now(add_time)};
      const std::string hex = entry.hash.to_hex();
      const HashBank next = bank.with_entry(std::move(entry));
      write_file(add_bank, save_bank(next));
      std::cout << hex << " added (" << next.size() << " entries)\n";
      return kExitOk;
    }

    if (*build_cmd) {
      HashBank bank = fs::exists(build_bank) ? read_bank(build_bank) : HashBank(kDefaultThreshold);
      const Manifest manifest = load_manifest(build_manifest);
      const Timestamp when = timestamp_or_now(build_time);
      std::vector<LabeledSample> safe;
      for (const auto& s : manifest.samples) {
        if (s.label == Label::kSafe) safe.push_back(s);
      }
      std::vector<BankEntry> entries(bank.entries().begin(), bank.entries().end());
      for (const auto& s : safe) {
        fs::path p = s.screenshot_path;
        if (p.is_relative()) p = manifest.base_dir / p;
        entries.push_back({s.brand.value_or(s.url), s.url, compute_phash(decode_image_file(p)), when});
      }
      const HashBank next(bank.threshold(), std::move(entries));
      write_file(build_bank, save_bank(next));
      std::cout << safe.size() << " entries added (" << next.size() << " total)\n";
      return kExitOk;
    }

    if (*scan_cmd) {
      const HashBank bank = read_bank(scan_bank);
      const PHash64 hash = compute_phash(decode_image_file(scan_image));
      const Verdict v = classify(bank, hash, scan_threshold);
      if (scan_json) {
        std::cout << verdict_to_json(v, hash).dump() << "\n";
      } else {
        std::cout << (v.label == Label::kSafe ? "SAFE" : "PHISHING") << " d_min=" << v.d_min
                  << " brand=" << v.best_match->brand << " confidence=" << fixed2(v.confidence) << "\n";
      }
      return kExitOk;
    }

    if (*cal_cmd) {
      const HashBank bank = read_bank(cal_bank);
      const Manifest manifest = load_manifest(cal_manifest);
      if (manifest.samples.empty()) throw CalibrationError("validation manifest is empty");
      const auto scored = score_samples(bank, manifest.samples, manifest.base_dir);
      report_exclusions(scored);
      const CalibrationResult result = calibrate_scored(scored);
      if (!cal_sweep.empty()) write_file(cal_sweep, format_sweep_csv(result.sweep));
      const auto& m = result.best_metrics;
      std::cout << "t_best=" << result.best_threshold << " f1=" << csv::format_real(m.f1)
                << " precision=" << csv::format_real(m.precision) << " recall=" << csv::format_real(m.recall)
                << " accuracy=" << csv::format_real(m.accuracy) << " excluded=" << result.excluded << "\n";
      if (cal_write) {
        const std::string text = save_bank(bank.with_threshold(result.best_threshold));
        write_file(cal_bank, text);
        if (read_text(cal_bank) != text || read_bank(cal_bank).threshold() != result.best_threshold) {
          throw IoError("bank write-back did not round-trip: " + cal_bank);
        }
      }
      return kExitOk;
    }

    if (*eval_cmd) {
      const HashBank bank = read_bank(eval_bank);
      const Manifest manifest = load_manifest(eval_manifest);
      const auto scored = score_samples(bank, manifest.samples, manifest.base_dir);
      report_exclusions(scored);
      const EvaluationReport report = evaluate_scored(bank, scored, eval_threshold);
      if (!eval_report.empty()) write_file(eval_report, report_to_json(report).dump(2) + "\n");
      if (!eval_verdicts.empty()) write_file(eval_verdicts, format_verdict_csv(report));
      std::cout << metrics_json(report.threshold, report.counts, report.metrics, report.excluded).dump(2) << "\n";
      return kExitOk;
    }

    if (*gen_cmd) {
      const CorpusSummary s = generate_corpus(spec, gen_out);
      std::cout << s.images << " images: train=" << s.train << " validation=" << s.validation
                << " test=" << s.test << " mimics=" << s.mimics << "\n";
      return kExitOk;
    }

    if (*export_cmd) {
      const HashBank bank = read_bank(export_bank);
      const auto core = locate_core(export_core, executable_dir(argv[0]));
      if (!core) {
        std::cerr << "error: compiled core '" << (export_core.empty() ? kCoreArtifact : export_core)
                  << "' not found.\n"
                  << "Build it with Emscripten:\n"
                  << "  emcmake cmake -S . -B build-wasm && cmake --build build-wasm\n"
                  << "then pass --core build-wasm/tools/wasm/phishsnap_core.wasm "
                  << "or set PHISHSNAP_CORE_WASM.\n";
        return kExitError;
      }
      fs::create_directories(export_out);
      write_file(fs::path(export_out) / "bank.json", save_bank(bank));
      fs::copy_file(*core, fs::path(export_out) / kCoreArtifact, fs::copy_options::overwrite_existing);
      std::cout << "bundle written to " << export_out << " (" << bank.size() << " entries, threshold "
                << bank.threshold() << ")\n";
      return kExitOk;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitUsage;
}
