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


#include <gtest/gtest.h>

#include <nlohmann/json.hpp>

#include "phishsnap/phishsnap.hpp"
#include "goldens.hpp"
#include "test_support.hpp"

namespace phishsnap {
namespace {

using testing::cli;
using testing::quote;
using testing::run;

std::string slurp(const std::filesystem::path& p) {
  const Bytes b = read_file(p);
  return std::string(b.begin(), b.end());
}

// One small corpus shared by every test in this file.
class Cli : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    dir_ = new testing::TempDir("cli");
    const auto r = run(cli() + " gen-corpus --out " + quote(dir_->path() / "corpus") +
                       " --brands 2 --captures 3 --mimics 1 --unrelated 6");
    ASSERT_EQ(r.exit_code, 0) << r.out;
    const auto b = run(cli() + " bank build --bank " + quote(bank()) + " --manifest " +
                       quote(corpus() / "train.csv") + " --captured-at 2024-03-01T12:00:00Z");
    ASSERT_EQ(b.exit_code, 0) << b.out;
  }
  static void TearDownTestSuite() {
    delete dir_;
    dir_ = nullptr;
  }

  static std::filesystem::path corpus() { return dir_->path() / "corpus"; }
  static std::filesystem::path bank() { return dir_->path() / "bank.json"; }

  static testing::TempDir* dir_;
};

testing::TempDir* Cli::dir_ = nullptr;

TEST_F(Cli, HashPrintsCanonicalHex) {
  const auto r = run(cli() + " hash " + quote(testing::data_path("white_1x1.png")));
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_EQ(r.out, "8000000000000000\n");
}

TEST_F(Cli, HashGoldenFixture) {
  const auto r = run(cli() + " hash " + quote(testing::data_path("login_fixture.png")));
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_EQ(r.out, std::string(PHISHSNAP_GOLDEN_FIXTURE_HASH) + "\n");
}

TEST_F(Cli, HashMatchesLibrary) {
  const auto p = corpus() / "images/capture_b01_002.png";
  EXPECT_EQ(run(cli() + " hash " + quote(p)).out, compute_phash(decode_image_file(p)).to_hex() + "\n");
}

TEST_F(Cli, HashErrors) {
  EXPECT_EQ(run(cli() + " hash /nonexistent/x.png").exit_code, 1);
  EXPECT_EQ(run(cli() + " hash " + quote(corpus() / "train.csv")).exit_code, 1);
  EXPECT_EQ(run(cli() + " hash").exit_code, 2);
  EXPECT_EQ(run(cli() + " frobnicate").exit_code, 2);
  EXPECT_EQ(run(cli()).exit_code, 2);
}

TEST_F(Cli, BankAddCreatesAndRejectsDuplicates) {
  testing::TempDir dir("cli-add");
  const auto bank_file = dir / "new.json";
  const std::string add = cli() + " bank add --bank " + quote(bank_file) +
                          " --brand acme --url https://acme.example/ " + quote(testing::data_path("white_1x1.png"));
  ASSERT_EQ(run(add).exit_code, 0);
  const HashBank bank = load_bank(slurp(bank_file));
  EXPECT_EQ(bank.size(), 1u);
  EXPECT_EQ(bank.threshold(), 10);
  EXPECT_EQ(bank.entries()[0].hash.to_hex(), "8000000000000000");
  EXPECT_LE(bank.entries()[0].captured_at, now_utc());
  EXPECT_EQ(run(add).exit_code, 1);
  EXPECT_EQ(load_bank(slurp(bank_file)).size(), 1u);
  EXPECT_EQ(run(cli() + " bank add --bank " + quote(bank_file) + " --brand acme " +
                quote(testing::data_path("white_1x1.png")))
                .exit_code,
            2);
}

TEST_F(Cli, BankBuildUsesSafeTrainingRows) {
  const HashBank b = load_bank(slurp(bank()));
  EXPECT_EQ(b.size(), 6u);
  for (const BankEntry& e : b.entries()) EXPECT_EQ(format_timestamp(e.captured_at), "2024-03-01T12:00:00Z");
}

TEST_F(Cli, ScanBankedImageIsSafe) {
  const auto r = run(cli() + " scan --bank " + quote(bank()) + " " + quote(corpus() / "images/capture_b00_000.png"));
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_EQ(r.out, "SAFE d_min=0 brand=brand-00 confidence=1.00\n");
}

TEST_F(Cli, ScanJsonMatchesLibrary) {
  const HashBank b = load_bank(slurp(bank()));
  for (const char* name : {"images/capture_b01_003.png", "images/unrelated_0005.png", "images/mimic_b00_000.png"}) {
    const auto p = corpus() / name;
    const PHash64 h = compute_phash(decode_image_file(p));
    for (int t : {0, 10, 30}) {
      const auto r = run(cli() + " scan --json --threshold " + std::to_string(t) + " --bank " + quote(bank()) + " " +
                         quote(p));
      ASSERT_EQ(r.exit_code, 0);
      EXPECT_EQ(r.out, verdict_to_json(classify(b, h, t), h).dump() + "\n");
    }
  }
}

TEST_F(Cli, ScanUnrelatedIsPhishing) {
  const auto r = run(cli() + " scan --bank " + quote(bank()) + " " + quote(corpus() / "images/unrelated_0000.png"));
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_EQ(r.out.rfind("PHISHING ", 0), 0u) << r.out;
}

TEST_F(Cli, ScanErrors) {
  testing::TempDir dir("cli-scan");
  write_file(dir / "empty.json", save_bank(HashBank(10)));
  const std::string img = quote(testing::data_path("white_1x1.png"));
  EXPECT_EQ(run(cli() + " scan --bank " + quote(dir / "empty.json") + " " + img).exit_code, 1);
  EXPECT_EQ(run(cli() + " scan --bank " + quote(dir / "missing.json") + " " + img).exit_code, 1);
  EXPECT_EQ(run(cli() + " scan --threshold 65 --bank " + quote(bank()) + " " + img).exit_code, 2);
  EXPECT_EQ(run(cli() + " scan --threshold -1 --bank " + quote(bank()) + " " + img).exit_code, 2);
}

TEST_F(Cli, CalibrateIsDeterministicAndWrites) {
  testing::TempDir dir("cli-cal");
  std::filesystem::copy_file(bank(), dir / "bank.json");
  const std::string cmd = cli() + " calibrate --bank " + quote(dir / "bank.json") + " --manifest " +
                          quote(corpus() / "validation.csv") + " --sweep-out " + quote(dir / "sweep.csv");
  const auto first = run(cmd);
  ASSERT_EQ(first.exit_code, 0);
  const std::string sweep = slurp(dir / "sweep.csv");
  const auto second = run(cmd);
  EXPECT_EQ(first.out, second.out);
  EXPECT_EQ(sweep, slurp(dir / "sweep.csv"));
  EXPECT_EQ(csv::parse(sweep).size(), 66u);

  const auto m = load_manifest(corpus() / "validation.csv");
  const HashBank b = load_bank(slurp(bank()));
  const CalibrationResult expected = calibrate_threshold(b, m.samples, m.base_dir);
  EXPECT_EQ(first.out.rfind("t_best=" + std::to_string(expected.best_threshold) + " ", 0), 0u) << first.out;
  EXPECT_EQ(sweep, format_sweep_csv(expected.sweep));

  ASSERT_EQ(run(cmd + " --write").exit_code, 0);
  const HashBank written = load_bank(slurp(dir / "bank.json"));
  EXPECT_EQ(written.threshold(), expected.best_threshold);
  EXPECT_EQ(written, b.with_threshold(expected.best_threshold));
}

TEST_F(Cli, CalibrateSingleClassFails) {
  testing::TempDir dir("cli-cal1");
  const auto m = load_manifest(corpus() / "train.csv");
  std::vector<LabeledSample> safe;
  for (auto s : m.samples) {
    if (s.label != Label::kSafe) continue;
    s.screenshot_path = (m.base_dir / s.screenshot_path).string();
    safe.push_back(s);
  }
  write_file(dir / "safe.csv", format_manifest(safe));
  EXPECT_EQ(run(cli() + " calibrate --bank " + quote(bank()) + " --manifest " + quote(dir / "safe.csv")).exit_code, 1);
}

TEST_F(Cli, EvalReportSchemaAndRecount) {
  testing::TempDir dir("cli-eval");
  const auto r = run(cli() + " eval --bank " + quote(bank()) + " --manifest " + quote(corpus() / "test.csv") +
                     " --threshold 12 --report " + quote(dir / "report.json") + " --verdicts " +
                     quote(dir / "verdicts.csv"));
  ASSERT_EQ(r.exit_code, 0);
  const auto metrics = nlohmann::json::parse(r.out);
  for (const char* key : {"precision", "recall", "f1", "accuracy", "tp", "fp", "fn", "tn", "excluded"}) {
    EXPECT_TRUE(metrics.contains(key)) << key;
  }
  const auto report = nlohmann::json::parse(slurp(dir / "report.json"));
  EXPECT_EQ(report["f1"], metrics["f1"]);
  EXPECT_EQ(report["samples"].size(), load_manifest(corpus() / "test.csv").samples.size());

  ConfusionCounts recount;
  const auto rows = csv::parse(slurp(dir / "verdicts.csv"));
  for (std::size_t i = 1; i < rows.size(); ++i) tally(recount, *parse_label(rows[i][1]), *parse_label(rows[i][4]));
  EXPECT_EQ(metrics["tp"], recount.tp);
  EXPECT_EQ(metrics["fp"], recount.fp);
  EXPECT_EQ(metrics["fn"], recount.fn);
  EXPECT_EQ(metrics["tn"], recount.tn);
  const Metrics m = compute_metrics(recount);
  EXPECT_EQ(metrics["f1"].get<double>(), m.f1);
  EXPECT_EQ(metrics["accuracy"].get<double>(), m.accuracy);
}

TEST_F(Cli, EvalPerfectSeparation) {
  testing::TempDir dir("cli-perfect");
  const HashBank b = load_bank(slurp(bank()));
  std::vector<LabeledSample> samples;
  for (const char* name : {"images/capture_b00_000.png", "images/capture_b01_001.png"}) {
    samples.push_back({"u", Label::kSafe, std::nullopt, (corpus() / name).string()});
  }
  RawImage checker(64, 64);
  for (std::size_t y = 0; y < 64; ++y) {
    for (std::size_t x = 0; x < 64; ++x) {
      const std::uint8_t v = ((x / 8 + y / 8) % 2) ? 255 : 0;
      checker.at(x, y) = Rgba{v, v, v, 255};
    }
  }
  write_file(dir / "checker.png", encode_png(checker));
  ASSERT_GT(query_min_distance(b, compute_phash(checker)).distance, 0);
  samples.push_back({"v", Label::kPhishing, std::nullopt, (dir / "checker.png").string()});
  write_file(dir / "m.csv", format_manifest(samples));
  const auto r = run(cli() + " eval --bank " + quote(bank()) + " --manifest " + quote(dir / "m.csv") + " --threshold 0");
  ASSERT_EQ(r.exit_code, 0);
  const auto j = nlohmann::json::parse(r.out);
  for (const char* key : {"precision", "recall", "f1", "accuracy"}) EXPECT_EQ(j[key], 1.0) << key;
}

TEST_F(Cli, EvalUsageErrors) {
  const std::string base = cli() + " eval --bank " + quote(bank()) + " --manifest " + quote(corpus() / "test.csv");
  EXPECT_EQ(run(base).exit_code, 2);
  EXPECT_EQ(run(base + " --threshold 99").exit_code, 2);
  EXPECT_EQ(run(cli() + " eval --bank " + quote(bank()) + " --manifest /nonexistent.csv --threshold 3").exit_code, 1);
}

TEST_F(Cli, GenCorpusIsDeterministic) {
  testing::TempDir dir("cli-gen");
  ASSERT_EQ(run(cli() + " gen-corpus --out " + quote(dir / "c") + " --brands 2 --captures 3 --mimics 1 --unrelated 6")
                .exit_code,
            0);
  for (const char* name : {"train.csv", "validation.csv", "test.csv", "mimics.csv", "ground_truth.json",
                           "images/capture_b01_003.png", "images/unrelated_0004.png"}) {
    EXPECT_EQ(read_file(dir / "c" / name), read_file(corpus() / name)) << name;
  }
  EXPECT_EQ(run(cli() + " gen-corpus --out " + quote(dir / "d") + " --brands 0").exit_code, 2);
}

TEST_F(Cli, ExportBundle) {
  testing::TempDir dir("cli-export");
  // Stand-in for the Emscripten artifact: export-bundle only copies it.
  const std::string core("\0asm\x01\0\0\0stand-in", 16);
  write_file(dir / "phishsnap_core.wasm", core);
  const auto r = run(cli() + " export-bundle --bank " + quote(bank()) + " --out " + quote(dir / "bundle") +
                     " --core " + quote(dir / "phishsnap_core.wasm"));
  ASSERT_EQ(r.exit_code, 0);
  EXPECT_EQ(slurp(dir / "bundle/bank.json"), save_bank(load_bank(slurp(bank()))));
  EXPECT_EQ(slurp(dir / "bundle/bank.json"), slurp(bank()));
  EXPECT_EQ(read_file(dir / "bundle/phishsnap_core.wasm"), read_file(dir / "phishsnap_core.wasm"));

  const auto env = run("PHISHSNAP_CORE_WASM=" + quote(dir / "phishsnap_core.wasm") + " " + cli() +
                       " export-bundle --bank " + quote(bank()) + " --out " + quote(dir / "bundle2"));
  EXPECT_EQ(env.exit_code, 0);
  EXPECT_TRUE(std::filesystem::exists(dir / "bundle2/phishsnap_core.wasm"));
}

TEST_F(Cli, ExportBundleWithoutCoreFails) {
  testing::TempDir dir("cli-export2");
  const auto r = run("PHISHSNAP_CORE_WASM= " + cli() + " export-bundle --bank " + quote(bank()) + " --out " +
                     quote(dir / "bundle") + " --core " + quote(dir / "missing.wasm"));
  EXPECT_EQ(r.exit_code, 1);
  EXPECT_FALSE(std::filesystem::exists(dir / "bundle/bank.json"));
}

}  // namespace
}  // namespace phishsnap
