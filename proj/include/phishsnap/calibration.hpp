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

#pragma once

// Threshold calibration and test-set evaluation over labeled manifests.
// Phishing is the positive class throughout.

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "phishsnap/bank.hpp"
#include "phishsnap/bk_tree.hpp"
#include "phishsnap/codec.hpp"
#include "phishsnap/csv.hpp"
#include "phishsnap/error.hpp"
#include "phishsnap/phash.hpp"

namespace phishsnap {

struct LabeledSample {
  std::string url;
  Label label = Label::kSafe;
  std::optional<std::string> brand;
  // As written in the manifest; relative paths resolve against the
  // manifest's directory.
  std::string screenshot_path;

  friend bool operator==(const LabeledSample&, const LabeledSample&) = default;
};

struct Manifest {
  std::filesystem::path base_dir;
  std::vector<LabeledSample> samples;
};

inline constexpr std::string_view kManifestHeader = "url,label,brand,screenshot_path";

inline std::vector<LabeledSample> parse_manifest(std::string_view text) {
  const auto rows = csv::parse(text);
  if (rows.empty()) throw ParseError("manifest: missing header");
  if (rows[0] != csv::Row{"url", "label", "brand", "screenshot_path"}) {
    throw ParseError("manifest: header must be '" + std::string(kManifestHeader) + "'");
  }
  std::vector<LabeledSample> samples;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& r = rows[i];
    const std::string where = "manifest row " + std::to_string(i);
    if (r.size() != 4) throw ParseError(where + ": expected 4 fields, got " + std::to_string(r.size()));
    const auto label = parse_label(r[1]);
    if (!label) throw ParseError(where + ": label must be 'safe' or 'phishing', got '" + r[1] + "'");
    if (r[3].empty()) throw ParseError(where + ": empty screenshot_path");
    LabeledSample s;
    s.url = r[0];
    s.label = *label;
    if (!r[2].empty()) s.brand = r[2];
    s.screenshot_path = r[3];
    samples.push_back(std::move(s));
  }
  return samples;
}

inline std::string format_manifest(const std::vector<LabeledSample>& samples) {
  std::string out = std::string(kManifestHeader) + "\n";
  for (const auto& s : samples) {
    out += csv::format_row({s.url, std::string(label_name(s.label)), s.brand.value_or(""), s.screenshot_path});
  }
  return out;
}

inline Manifest load_manifest(const std::filesystem::path& path) {
  const Bytes bytes = read_file(path);
  Manifest m;
  m.base_dir = path.parent_path();
  m.samples = parse_manifest(std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()));
  return m;
}

struct ConfusionCounts {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  std::size_t tn = 0;

  std::size_t total() const noexcept { return tp + fp + fn + tn; }
  friend bool operator==(const ConfusionCounts&, const ConfusionCounts&) = default;
};

struct Metrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double accuracy = 0.0;

  friend bool operator==(const Metrics&, const Metrics&) = default;
};

// Empty denominators yield 0.
inline Metrics compute_metrics(const ConfusionCounts& c) {
  auto ratio = [](std::size_t num, std::size_t den) {
    return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
  };
  Metrics m;
  m.precision = ratio(c.tp, c.tp + c.fp);
  m.recall = ratio(c.tp, c.tp + c.fn);
  m.f1 = (m.precision + m.recall) == 0.0 ? 0.0 : 2.0 * m.precision * m.recall / (m.precision + m.recall);
  m.accuracy = ratio(c.tp + c.tn, c.total());
  return m;
}

inline void tally(ConfusionCounts& c, Label truth, Label predicted) {
  const bool actual = truth == Label::kPhishing;
  const bool flagged = predicted == Label::kPhishing;
  if (actual && flagged) ++c.tp;
  else if (!actual && flagged) ++c.fp;
  else if (actual && !flagged) ++c.fn;
  else ++c.tn;
}

// Threshold-independent part of a sample's classification.
struct ScoredSample {
  LabeledSample sample;
  std::optional<PHash64> hash;
  Match match;
  std::string error;  // non-empty when the screenshot could not be used

  bool excluded() const noexcept { return !hash.has_value(); }
};

// Hashes every screenshot and finds its nearest bank entry. Work is spread
// over `workers` threads (0 = hardware concurrency); output order is the
// input order regardless of scheduling.
inline std::vector<ScoredSample> score_samples(const HashBank& bank, const std::vector<LabeledSample>& samples,
                                               const std::filesystem::path& base_dir = {},
                                               unsigned workers = 0) {
  const BkIndex index(bank);
  std::vector<ScoredSample> out(samples.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < samples.size(); i = next++) {
      ScoredSample& s = out[i];
      s.sample = samples[i];
      std::filesystem::path p = samples[i].screenshot_path;
      if (p.is_relative()) p = base_dir / p;
      try {
        s.hash = compute_phash(decode_image_file(p));
        s.match = index.nearest(*s.hash);
      } catch (const Error& e) {
        s.hash.reset();
        s.error = e.what();
      }
    }
  };
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(1, samples.size())));
  std::vector<std::thread> pool;
  for (unsigned w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  return out;
}

struct SampleVerdict {
  ScoredSample scored;
  std::optional<Verdict> verdict;  // absent for excluded samples
};

struct EvaluationReport {
  int threshold = 0;
  ConfusionCounts counts;
  Metrics metrics;
  std::size_t excluded = 0;
  std::vector<SampleVerdict> samples;
};

inline EvaluationReport evaluate_scored(const HashBank& bank, const std::vector<ScoredSample>& scored, int threshold) {
  if (threshold < 0 || threshold > kMaxThreshold) throw InvalidInputError("threshold outside [0, 64]");
  EvaluationReport report;
  report.threshold = threshold;
  report.samples.reserve(scored.size());
  for (const auto& s : scored) {
    SampleVerdict sv{s, std::nullopt};
    if (s.excluded()) {
      ++report.excluded;
    } else {
      sv.verdict = make_verdict(bank, s.match, threshold);
      tally(report.counts, s.sample.label, sv.verdict->label);
    }
    report.samples.push_back(std::move(sv));
  }
  report.metrics = compute_metrics(report.counts);
  return report;
}

// Classifies every sample at `threshold` (overriding the bank's stored
// value). Unreadable screenshots are excluded and counted, not fatal.
inline EvaluationReport evaluate(const HashBank& bank, const std::vector<LabeledSample>& samples, int threshold,
                                 const std::filesystem::path& base_dir = {}) {
  if (threshold < 0 || threshold > kMaxThreshold) throw InvalidInputError("threshold outside [0, 64]");
  return evaluate_scored(bank, score_samples(bank, samples, base_dir), threshold);
}

struct SweepRow {
  int threshold = 0;
  ConfusionCounts counts;
  Metrics metrics;
};

struct CalibrationResult {
  int best_threshold = 0;
  Metrics best_metrics;
  std::vector<SweepRow> sweep;  // one row per threshold 0..64
  std::size_t excluded = 0;
};

// Sweeps every integer threshold and keeps the one with the highest F1,
// preferring the smallest threshold on ties.
inline CalibrationResult calibrate_scored(const std::vector<ScoredSample>& scored) {
  std::size_t safe = 0, phishing = 0, excluded = 0;
  for (const auto& s : scored) {
    if (s.excluded()) ++excluded;
    else if (s.sample.label == Label::kSafe) ++safe;
    else ++phishing;
  }
  if (safe == 0 || phishing == 0) {
    throw CalibrationError("validation set must contain both safe and phishing samples (safe=" +
                           std::to_string(safe) + ", phishing=" + std::to_string(phishing) + ")");
  }

  CalibrationResult result;
  result.excluded = excluded;
  result.sweep.reserve(kMaxThreshold + 1);
  double best_f1 = -1.0;
  for (int t = 0; t <= kMaxThreshold; ++t) {
    SweepRow row;
    row.threshold = t;
    for (const auto& s : scored) {
      if (s.excluded()) continue;
      tally(row.counts, s.sample.label, s.match.distance <= t ? Label::kSafe : Label::kPhishing);
    }
    row.metrics = compute_metrics(row.counts);
    if (row.metrics.f1 > best_f1) {
      best_f1 = row.metrics.f1;
      result.best_threshold = t;
      result.best_metrics = row.metrics;
    }
    result.sweep.push_back(row);
  }
  return result;
}

inline CalibrationResult calibrate_threshold(const HashBank& bank, const std::vector<LabeledSample>& validation,
                                             const std::filesystem::path& base_dir = {}) {
  if (validation.empty()) throw CalibrationError("validation set is empty");
  return calibrate_scored(score_samples(bank, validation, base_dir));
}

inline std::string format_sweep_csv(const std::vector<SweepRow>& sweep) {
  std::string out = "t,tp,fp,fn,tn,precision,recall,f1,accuracy\n";
  for (const auto& r : sweep) {
    out += csv::format_row({std::to_string(r.threshold), std::to_string(r.counts.tp), std::to_string(r.counts.fp),
                            std::to_string(r.counts.fn), std::to_string(r.counts.tn),
                            csv::format_real(r.metrics.precision), csv::format_real(r.metrics.recall),
                            csv::format_real(r.metrics.f1), csv::format_real(r.metrics.accuracy)});
  }
  return out;
}

inline nlohmann::ordered_json report_to_json(const EvaluationReport& report) {
  nlohmann::ordered_json doc;
  doc["threshold"] = report.threshold;
  doc["precision"] = report.metrics.precision;
  doc["recall"] = report.metrics.recall;
  doc["f1"] = report.metrics.f1;
  doc["accuracy"] = report.metrics.accuracy;
  doc["tp"] = report.counts.tp;
  doc["fp"] = report.counts.fp;
  doc["fn"] = report.counts.fn;
  doc["tn"] = report.counts.tn;
  doc["excluded"] = report.excluded;
  auto& list = doc["samples"] = nlohmann::ordered_json::array();
  for (const auto& sv : report.samples) {
    nlohmann::ordered_json item;
    const auto& s = sv.scored.sample;
    item["url"] = s.url;
    item["label"] = label_name(s.label);
    item["brand"] = s.brand ? nlohmann::ordered_json(*s.brand) : nlohmann::ordered_json(nullptr);
    item["screenshot_path"] = s.screenshot_path;
    if (sv.verdict) {
      item["hash"] = sv.scored.hash->to_hex();
      item["predicted"] = label_name(sv.verdict->label);
      item["d_min"] = sv.verdict->d_min;
      item["best_brand"] = sv.verdict->best_match->brand;
      item["best_url"] = sv.verdict->best_match->url;
      item["confidence"] = sv.verdict->confidence;
    } else {
      item["excluded"] = true;
      item["error"] = sv.scored.error;
    }
    list.push_back(std::move(item));
  }
  return doc;
}

// Per-sample verdict log; excluded samples have an empty prediction and a
// non-empty error column.
inline std::string format_verdict_csv(const EvaluationReport& report) {
  std::string out = "url,label,brand,screenshot_path,predicted,d_min,best_brand,confidence,error\n";
  for (const auto& sv : report.samples) {
    const auto& s = sv.scored.sample;
    csv::Row row{s.url, std::string(label_name(s.label)), s.brand.value_or(""), s.screenshot_path};
    if (sv.verdict) {
      row.insert(row.end(), {std::string(label_name(sv.verdict->label)), std::to_string(sv.verdict->d_min),
                             sv.verdict->best_match->brand, csv::format_real(sv.verdict->confidence), ""});
    } else {
      row.insert(row.end(), {"", "", "", "", sv.scored.error});
    }
    out += csv::format_row(row);
  }
  return out;
}

}  // namespace phishsnap
