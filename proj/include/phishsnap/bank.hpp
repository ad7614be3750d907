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

// The reference bank of legitimate-page hashes, its JSON file format, and the
// minimum-distance classification rule.
//
// File format (version 1, UTF-8 JSON, unknown fields rejected):
//
//   {"version":1,"threshold":<0-64>,"entries":[
//     {"brand":"...","url":"...","hash":"<16 hex>","captured_at":"YYYY-MM-DDTHH:MM:SSZ"}]}

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "phishsnap/error.hpp"
#include "phishsnap/phash.hpp"

namespace phishsnap {

using Timestamp = std::chrono::sys_seconds;

// RFC 3339 UTC timestamps at whole-second precision ("2024-03-01T12:00:00Z").
inline std::string format_timestamp(Timestamp t) {
  const auto day = std::chrono::floor<std::chrono::days>(t);
  const std::chrono::year_month_day ymd{day};
  const std::chrono::hh_mm_ss hms{t - day};
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02dZ", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                static_cast<int>(hms.hours().count()), static_cast<int>(hms.minutes().count()),
                static_cast<int>(hms.seconds().count()));
  return buf;
}

inline std::optional<Timestamp> parse_timestamp(std::string_view text) {
  // YYYY-MM-DDTHH:MM:SSZ
  if (text.size() != 20) return std::nullopt;
  static constexpr std::string_view shape = "dddd-dd-ddTdd:dd:ddZ";
  for (std::size_t i = 0; i < shape.size(); ++i) {
    const char c = text[i];
    if (shape[i] == 'd' ? (c < '0' || c > '9') : c != shape[i]) return std::nullopt;
  }
  auto num = [&](std::size_t pos, std::size_t len) {
    int v = 0;
    for (std::size_t i = pos; i < pos + len; ++i) v = v * 10 + (text[i] - '0');
    return v;
  };
  const std::chrono::year_month_day ymd{std::chrono::year{num(0, 4)},
                                        std::chrono::month{static_cast<unsigned>(num(5, 2))},
                                        std::chrono::day{static_cast<unsigned>(num(8, 2))}};
  const int hh = num(11, 2), mm = num(14, 2), ss = num(17, 2);
  if (!ymd.ok() || hh > 23 || mm > 59 || ss > 59) return std::nullopt;
  return std::chrono::sys_days{ymd} + std::chrono::hours{hh} + std::chrono::minutes{mm} +
         std::chrono::seconds{ss};
}

inline Timestamp now_utc() {
  return std::chrono::floor<std::chrono::seconds>(std::chrono::system_clock::now());
}

struct BankEntry {
  std::string brand;
  std::string url;
  PHash64 hash;
  Timestamp captured_at{};

  friend bool operator==(const BankEntry&, const BankEntry&) = default;
};

inline constexpr int kBankFormatVersion = 1;
inline constexpr int kDefaultThreshold = 10;
inline constexpr int kMaxThreshold = PHash64::kBits;

// Immutable once built; with_entry/with_threshold return new banks.
class HashBank {
 public:
  HashBank() = default;

  explicit HashBank(int threshold, std::vector<BankEntry> entries = {})
      : threshold_(threshold), entries_(std::move(entries)) {
    validate();
  }

  int version() const noexcept { return kBankFormatVersion; }
  int threshold() const noexcept { return threshold_; }
  std::span<const BankEntry> entries() const noexcept { return entries_; }
  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }

  HashBank with_entry(BankEntry entry) const {
    std::vector<BankEntry> next = entries_;
    next.push_back(std::move(entry));
    return HashBank(threshold_, std::move(next));
  }

  HashBank with_threshold(int threshold) const { return HashBank(threshold, entries_); }

  friend bool operator==(const HashBank&, const HashBank&) = default;

 private:
  void validate() const {
    if (threshold_ < 0 || threshold_ > kMaxThreshold) {
      throw ValidationError("threshold " + std::to_string(threshold_) + " outside [0, 64]");
    }
    std::set<std::tuple<std::string_view, std::string_view, std::uint64_t>> seen;
    for (std::size_t i = 0; i < entries_.size(); ++i) {
      const BankEntry& e = entries_[i];
      if (e.brand.empty()) throw ValidationError("entry " + std::to_string(i) + ": empty brand");
      if (e.url.empty()) throw ValidationError("entry " + std::to_string(i) + ": empty url");
      if (!seen.emplace(e.brand, e.url, e.hash.value()).second) {
        throw ValidationError("entry " + std::to_string(i) + ": duplicate (brand, url, hash) = (" +
                              e.brand + ", " + e.url + ", " + e.hash.to_hex() + ")");
      }
    }
  }

  int threshold_ = kDefaultThreshold;
  std::vector<BankEntry> entries_;
};

namespace detail {

inline void reject_unknown_keys(const nlohmann::json& obj, std::initializer_list<std::string_view> known,
                                const std::string& where) {
  for (const auto& item : obj.items()) {
    bool ok = false;
    for (std::string_view k : known) ok = ok || item.key() == k;
    if (!ok) throw ParseError(where + ": unknown field '" + item.key() + "'");
  }
}

inline const nlohmann::json& require(const nlohmann::json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) throw ParseError(where + ": missing field '" + key + "'");
  return *it;
}

inline std::string require_string(const nlohmann::json& obj, const char* key, const std::string& where) {
  const auto& v = require(obj, key, where);
  if (!v.is_string()) throw ParseError(where + ": field '" + key + "' must be a string");
  return v.get<std::string>();
}

}  // namespace detail

inline HashBank load_bank(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("bank: malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("bank: top level must be an object");
  detail::reject_unknown_keys(doc, {"version", "threshold", "entries"}, "bank");

  const auto& version = detail::require(doc, "version", "bank");
  if (!version.is_number_integer()) throw ParseError("bank: version must be an integer");
  if (version.get<std::int64_t>() != kBankFormatVersion) {
    throw VersionError("bank: unsupported format version " + version.dump());
  }

  const auto& threshold = detail::require(doc, "threshold", "bank");
  if (!threshold.is_number_integer()) throw ParseError("bank: threshold must be an integer");
  const auto t = threshold.get<std::int64_t>();
  if (t < 0 || t > kMaxThreshold) {
    throw ValidationError("bank: threshold " + std::to_string(t) + " outside [0, 64]");
  }

  const auto& list = detail::require(doc, "entries", "bank");
  if (!list.is_array()) throw ParseError("bank: entries must be an array");
  std::vector<BankEntry> entries;
  entries.reserve(list.size());
  for (std::size_t i = 0; i < list.size(); ++i) {
    const std::string where = "bank: entries[" + std::to_string(i) + "]";
    const auto& item = list[i];
    if (!item.is_object()) throw ParseError(where + ": must be an object");
    detail::reject_unknown_keys(item, {"brand", "url", "hash", "captured_at"}, where);
    BankEntry e;
    e.brand = detail::require_string(item, "brand", where);
    e.url = detail::require_string(item, "url", where);
    const auto hash = PHash64::from_hex(detail::require_string(item, "hash", where));
    if (!hash) throw ValidationError(where + ": hash must be 16 lowercase hex digits");
    e.hash = *hash;
    const auto ts = parse_timestamp(detail::require_string(item, "captured_at", where));
    if (!ts) throw ValidationError(where + ": captured_at must be YYYY-MM-DDTHH:MM:SSZ");
    e.captured_at = *ts;
    entries.push_back(std::move(e));
  }
  return HashBank(static_cast<int>(t), std::move(entries));
}

// Deterministic: fixed key order, two-space indent, trailing newline.
inline std::string save_bank(const HashBank& bank) {
  nlohmann::ordered_json doc;
  doc["version"] = bank.version();
  doc["threshold"] = bank.threshold();
  doc["entries"] = nlohmann::ordered_json::array();
  for (const BankEntry& e : bank.entries()) {
    nlohmann::ordered_json item;
    item["brand"] = e.brand;
    item["url"] = e.url;
    item["hash"] = e.hash.to_hex();
    item["captured_at"] = format_timestamp(e.captured_at);
    doc["entries"].push_back(std::move(item));
  }
  return doc.dump(2) + "\n";
}

struct Match {
  int distance = 0;
  std::size_t index = 0;

  friend bool operator==(const Match&, const Match&) = default;
};

// Linear scan; ties go to the lowest entry index.
inline Match query_min_distance(const HashBank& bank, PHash64 probe) {
  if (bank.empty()) throw EmptyBankError();
  Match best{PHash64::kBits + 1, 0};
  const auto entries = bank.entries();
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const int d = hamming_distance(probe, entries[i].hash);
    if (d < best.distance) best = {d, i};
  }
  return best;
}

enum class Label { kSafe, kPhishing };

inline std::string_view label_name(Label label) { return label == Label::kSafe ? "safe" : "phishing"; }

inline std::optional<Label> parse_label(std::string_view text) {
  if (text == "safe") return Label::kSafe;
  if (text == "phishing") return Label::kPhishing;
  return std::nullopt;
}

struct Verdict {
  Label label = Label::kSafe;
  int d_min = 0;
  std::optional<BankEntry> best_match;
  std::size_t best_index = 0;
  // Normalized margin, not a probability: 1 - d/64 when Safe, d/64 when
  // Phishing.
  double confidence = 0.0;
};

// Safe iff d_min <= threshold.
inline Verdict make_verdict(const HashBank& bank, Match match, int threshold) {
  Verdict v;
  v.d_min = match.distance;
  v.best_index = match.index;
  v.best_match = bank.entries()[match.index];
  v.label = match.distance <= threshold ? Label::kSafe : Label::kPhishing;
  const double ratio = static_cast<double>(match.distance) / PHash64::kBits;
  v.confidence = v.label == Label::kSafe ? 1.0 - ratio : ratio;
  return v;
}

inline Verdict classify(const HashBank& bank, PHash64 probe, std::optional<int> threshold = std::nullopt) {
  const int t = threshold.value_or(bank.threshold());
  if (t < 0 || t > kMaxThreshold) throw InvalidInputError("threshold outside [0, 64]");
  return make_verdict(bank, query_min_distance(bank, probe), t);
}

// Machine-readable verdict shared by the CLI and the WebAssembly core.
inline nlohmann::ordered_json verdict_to_json(const Verdict& v, PHash64 probe) {
  nlohmann::ordered_json doc;
  doc["label"] = label_name(v.label);
  doc["hash"] = probe.to_hex();
  doc["d_min"] = v.d_min;
  doc["confidence"] = v.confidence;
  if (v.best_match) {
    const BankEntry& m = *v.best_match;
    doc["best_match"] = {{"index", v.best_index},
                         {"brand", m.brand},
                         {"url", m.url},
                         {"hash", m.hash.to_hex()},
                         {"captured_at", format_timestamp(m.captured_at)}};
  }
  return doc;
}

}  // namespace phishsnap
