#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

#include "kwocce/evaluate.hpp"
#include "kwocce/report.hpp"
#include "kwocce/rng.hpp"

using namespace kwocce;

namespace {

// Record factory: picks scores so that band-correctness matches `correct`.
// Correct records score in band 1 both ways; incorrect ones have the AM in
// band 1 but the FA in band 2 (error +/- err on the raw scale).
struct Fixture {
  std::vector<ConfidenceRecord> records;
  std::vector<int> fa_scores;

  void add(double confidence, bool correct, int am_score = 20,
           int fa_offset = 5) {
    ConfidenceRecord r;
    r.sample_id = records.size();
    r.am_score = am_score;
    r.am_level = 1;
    r.confidence = confidence;
    records.push_back(r);
    fa_scores.push_back(correct ? am_score + 1 : am_score + fa_offset + 3);
  }
};

// O(n^2) pairwise oracle: P(conf_pos > conf_neg) with ties counting half.
double auc_oracle(const std::vector<double>& conf,
                  const std::vector<int>& correct) {
  double num = 0.0;
  long long n_pos = 0, n_neg = 0;
  for (std::size_t i = 0; i < conf.size(); ++i) {
    if (correct[i] == 1) {
      ++n_pos;
      for (std::size_t j = 0; j < conf.size(); ++j) {
        if (correct[j] == 1) continue;
        if (conf[i] > conf[j]) {
          num += 1.0;
        } else if (conf[i] == conf[j]) {
          num += 0.5;
        }
      }
    } else {
      ++n_neg;
    }
  }
  return num / (static_cast<double>(n_pos) * static_cast<double>(n_neg));
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  REQUIRE_MESSAGE(in.good(), "missing file: " << path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// The six-record fixture from the handcrafted sweep example.
Fixture six_records() {
  Fixture f;
  f.add(0.1, false);
  f.add(0.3, false);
  f.add(0.5, true);
  f.add(0.6, false);
  f.add(0.8, true);
  f.add(0.9, true);
  return f;
}

}  // namespace

TEST_CASE("sweep: handcrafted six-record counts at t = 0.55") {
  const ScoreScheme scheme;
  const Fixture f = six_records();
  const auto rows = sweep(f.records, f.fa_scores, scheme, 1000);
  REQUIRE(rows.size() == 1001);
  const SweepRow& row = rows[550];
  CHECK(row.threshold == doctest::Approx(0.55));
  CHECK(row.tp == 2);
  CHECK(row.fp == 1);
  CHECK(row.tn == 2);
  CHECK(row.fn == 1);
  CHECK(row.precision == doctest::Approx(2.0 / 3).epsilon(1e-12));
  CHECK(row.recall == doctest::Approx(2.0 / 3).epsilon(1e-12));
}

TEST_CASE("sweep: floor and ceiling rows") {
  const ScoreScheme scheme;
  const Fixture f = six_records();
  const auto rows = sweep(f.records, f.fa_scores, scheme, 1000);

  const SweepRow& floor = rows.front();
  CHECK(floor.threshold == 0.0);
  CHECK(floor.tp + floor.fp == 6);  // everything released
  CHECK(floor.accuracy == doctest::Approx(0.5).epsilon(1e-12));  // base rate
  CHECK(floor.cefr_agreement == doctest::Approx(50.0).epsilon(1e-12));

  const SweepRow& ceiling = rows.back();  // t = 1.0 > max confidence 0.9
  CHECK(ceiling.tp + ceiling.fp == 0);
  CHECK(ceiling.recall == 0.0);
  CHECK(ceiling.cefr_agreement == 100.0);
  CHECK_FALSE(ceiling.rmse_released.has_value());
}

TEST_CASE("sweep: monotonicity and count conservation") {
  const ScoreScheme scheme;
  Rng rng(77);
  Fixture f;
  for (int i = 0; i < 200; ++i) {
    f.add(rng.uniform01(), rng.uniform01() < 0.8);
  }
  const auto rows = sweep(f.records, f.fa_scores, scheme, 500);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(rows[i].tp + rows[i].fp + rows[i].tn + rows[i].fn == 200);
    if (i > 0) {
      CHECK(rows[i].pct_released <= rows[i - 1].pct_released);
      CHECK(rows[i].tp + rows[i].fp <= rows[i - 1].tp + rows[i - 1].fp);
      CHECK(rows[i].tn + rows[i].fn >= rows[i - 1].tn + rows[i - 1].fn);
    }
  }
  CHECK_THROWS_AS(sweep(f.records, std::vector<int>(3, 20), scheme, 10),
                  std::invalid_argument);
}

TEST_CASE("best_f1_row") {
  std::vector<SweepRow> rows(1);
  rows[0].f1 = 0.4;
  CHECK(&best_f1_row(rows) == &rows[0]);

  rows.resize(3);
  rows[0].threshold = 0.1;
  rows[0].f1 = 0.2;
  rows[1].threshold = 0.5;
  rows[1].f1 = 0.9;
  rows[2].threshold = 0.7;
  rows[2].f1 = 0.9;
  CHECK(best_f1_row(rows).threshold == 0.5);  // tie -> lower threshold

  // exhaustive scan oracle over the six-record sweep
  const ScoreScheme scheme;
  const Fixture f = six_records();
  const auto swept = sweep(f.records, f.fa_scores, scheme, 1000);
  double best = -1.0;
  double best_threshold = 0.0;
  for (const auto& row : swept) {
    if (row.f1 > best) {
      best = row.f1;
      best_threshold = row.threshold;
    }
  }
  CHECK(best_f1_row(swept).f1 == best);
  CHECK(best_f1_row(swept).threshold == best_threshold);
}

TEST_CASE("auc: endpoints") {
  CHECK(auc_roc(std::vector<double>{0.1, 0.2, 0.8, 0.9},
                std::vector<int>{0, 0, 1, 1}) == 1.0);
  CHECK(auc_roc(std::vector<double>{0.5, 0.5, 0.5, 0.5},
                std::vector<int>{0, 1, 0, 1}) == 0.5);
  CHECK_THROWS_AS(
      auc_roc(std::vector<double>{0.1, 0.2}, std::vector<int>{1, 1}),
      std::invalid_argument);
  CHECK_THROWS_AS(
      auc_roc(std::vector<double>{0.1, 0.2}, std::vector<int>{1, 2}),
      std::invalid_argument);
}

TEST_CASE("auc equals the pairwise oracle exactly") {
  Rng rng(51);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + static_cast<int>(rng.below(499));
    std::vector<double> conf(n);
    std::vector<int> correct(n);
    bool has_pos = false, has_neg = false;
    for (int i = 0; i < n; ++i) {
      // quantized confidences force plenty of ties
      conf[i] = static_cast<double>(rng.below(20)) / 20.0;
      correct[i] = rng.uniform01() < 0.7 ? 1 : 0;
      (correct[i] ? has_pos : has_neg) = true;
    }
    if (!has_pos) correct[0] = 1;
    if (!has_neg) correct[1] = 0;
    CHECK(auc_roc(conf, correct) == auc_oracle(conf, correct));
  }
}

TEST_CASE("multiclass metrics: perfect prediction") {
  const std::vector<int> truth = {0, 1, 2, 1, 0, 2};
  for (const auto avg :
       {Averaging::Micro, Averaging::Macro, Averaging::Weighted}) {
    const auto m = multiclass_metrics(truth, truth, 3, avg);
    CHECK(m.precision == 1.0);
    CHECK(m.recall == 1.0);
    CHECK(m.f1 == 1.0);
    CHECK(m.f05 == 1.0);
  }
}

TEST_CASE("multiclass metrics: micro identity") {
  Rng rng(3);
  std::vector<int> truth(100), predicted(100);
  for (int i = 0; i < 100; ++i) {
    truth[i] = static_cast<int>(rng.below(3));
    predicted[i] = static_cast<int>(rng.below(3));
  }
  const auto micro = multiclass_metrics(truth, predicted, 3, Averaging::Micro);
  long long hits = 0;
  for (int i = 0; i < 100; ++i) hits += truth[i] == predicted[i] ? 1 : 0;
  const double accuracy = static_cast<double>(hits) / 100.0;
  CHECK(micro.precision == accuracy);
  CHECK(micro.recall == accuracy);
  CHECK(micro.f1 == doctest::Approx(accuracy).epsilon(1e-15));
}

TEST_CASE("multiclass metrics: fixed confusion matrix oracle") {
  // confusion matrix rows = truth, cols = prediction:
  //   [[5,1,0],
  //    [2,3,1],
  //    [0,1,7]]
  const int matrix[3][3] = {{5, 1, 0}, {2, 3, 1}, {0, 1, 7}};
  std::vector<int> truth, predicted;
  for (int t = 0; t < 3; ++t) {
    for (int p = 0; p < 3; ++p) {
      for (int c = 0; c < matrix[t][p]; ++c) {
        truth.push_back(t);
        predicted.push_back(p);
      }
    }
  }
  // expected values from exact per-class arithmetic:
  // class precisions 5/7, 3/5, 7/8; recalls 5/6, 1/2, 7/8;
  // F1 10/13, 6/11, 7/8; F0.5 25/34, 15/26, 7/8; supports 6, 6, 8.
  const auto macro = multiclass_metrics(truth, predicted, 3, Averaging::Macro);
  CHECK(macro.precision == doctest::Approx(0.7297619047619047).epsilon(1e-12));
  CHECK(macro.recall == doctest::Approx(0.7361111111111112).epsilon(1e-12));
  CHECK(macro.f1 == doctest::Approx(0.7298951048951049).epsilon(1e-12));
  CHECK(macro.f05 == doctest::Approx(0.7290723981900452).epsilon(1e-12));

  const auto weighted =
      multiclass_metrics(truth, predicted, 3, Averaging::Weighted);
  CHECK(weighted.precision == doctest::Approx(0.7442857142857143).epsilon(1e-12));
  CHECK(weighted.recall == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(weighted.f1 == doctest::Approx(0.7444055944055944).epsilon(1e-12));
  CHECK(weighted.f05 == doctest::Approx(0.7436651583710407).epsilon(1e-12));

  const auto micro = multiclass_metrics(truth, predicted, 3, Averaging::Micro);
  CHECK(micro.precision == 0.75);
  CHECK(micro.recall == 0.75);

  predicted[0] = 7;
  CHECK_THROWS_AS(multiclass_metrics(truth, predicted, 3, Averaging::Micro),
                  std::invalid_argument);
}

TEST_CASE("release simulation: nothing and everything") {
  const ScoreScheme scheme;
  const Fixture f = six_records();
  const auto none = release_simulation(f.records, f.fa_scores, scheme, 1.01);
  CHECK(none.pct_released == 0.0);
  CHECK(none.cefr_agreement == 100.0);
  CHECK_FALSE(none.rmse_released.has_value());

  // zero-noise analogue: every record correct with zero score error
  Fixture clean;
  for (int i = 0; i < 4; ++i) clean.add(0.2 * i + 0.1, true);
  for (auto& fa : clean.fa_scores) fa = 20;  // am == fa exactly
  const auto all = release_simulation(clean.records, clean.fa_scores, scheme, 0.0);
  CHECK(all.pct_released == 100.0);
  CHECK(all.cefr_agreement == 100.0);
  CHECK(*all.rmse_released == 0.0);
}

TEST_CASE("release simulation: handcrafted four-record example") {
  const ScoreScheme scheme;
  std::vector<ConfidenceRecord> records(4);
  std::vector<int> fa(4);
  // two in-band matches (released), one cross-band error at high
  // confidence (released), one withheld record
  records[0] = {0, 20, 1, 0.8};
  fa[0] = 19;  // released, band match, error 1
  records[1] = {1, 25, 1, 0.7};
  fa[1] = 26;  // released, band match, error -1
  records[2] = {2, 30, 2, 0.9};
  fa[2] = 25;  // released, cross-band error 5
  records[3] = {3, 30, 2, 0.2};
  fa[3] = 25;  // withheld
  const auto point = release_simulation(records, fa, scheme, 0.5);
  CHECK(point.pct_released == 75.0);
  CHECK(point.cefr_agreement == 75.0);
  CHECK(*point.rmse_released ==
        doctest::Approx(std::sqrt((1.0 + 1.0 + 25.0) / 3.0)).epsilon(1e-12));
}

TEST_CASE("release report: zero-noise data releases everything") {
  const ScoreScheme scheme;
  Fixture clean;
  for (int i = 0; i < 10; ++i) clean.add(0.05 + 0.09 * i, true);
  for (auto& fa : clean.fa_scores) fa = 20;
  const auto rows = sweep(clean.records, clean.fa_scores, scheme, 100);
  const auto report = release_report(rows);
  REQUIRE(report.size() == 6);
  for (const auto& row : report) {
    CHECK(row.feasible);
    CHECK(row.pct_released == 100.0);
  }
}

TEST_CASE("release report: irreducible high-confidence error") {
  const ScoreScheme scheme;
  Fixture f;
  f.add(0.99, true);
  f.add(0.95, true);
  f.add(0.90, false);  // wrong but confident
  f.add(0.50, true);
  const auto rows = sweep(f.records, f.fa_scores, scheme, 1000);
  const double targets[] = {100.0};
  const auto report = release_report(rows, targets);
  REQUIRE(report.size() == 1);
  CHECK(report[0].feasible);
  // max release with full agreement excludes the bad record: thresholds in
  // (0.90, 0.95] release exactly the top two
  CHECK(report[0].pct_released == 50.0);
  CHECK(report[0].threshold == doctest::Approx(0.901));
}

TEST_CASE("release report: monotone in the agreement target") {
  const ScoreScheme scheme;
  Rng rng(15);
  Fixture f;
  for (int i = 0; i < 300; ++i) {
    const double conf = rng.uniform01();
    f.add(conf, rng.uniform01() < 0.4 + 0.5 * conf);
  }
  const auto rows = sweep(f.records, f.fa_scores, scheme, 1000);
  const auto report = release_report(rows);
  for (std::size_t i = 1; i < report.size(); ++i) {
    CHECK(report[i].target < report[i - 1].target);
    if (report[i - 1].feasible) {
      REQUIRE(report[i].feasible);
      CHECK(report[i].pct_released >= report[i - 1].pct_released);
    }
  }
}

TEST_CASE("golden tables: sweep and release report, csv and text") {
  const ScoreScheme scheme;
  Fixture f;
  f.add(0.05, false);
  f.add(0.22, true);
  f.add(0.35, true);
  f.add(0.48, false);
  f.add(0.61, true);
  f.add(0.70, false, 17, 10);
  f.add(0.83, true);
  f.add(0.97, true);
  const auto rows = sweep(f.records, f.fa_scores, scheme, 10);
  const double targets[] = {100.0, 95.0};
  const auto report = release_report(rows, targets);

  const std::string dir = KWOCCE_GOLDEN_DIR;
  CHECK(sweep_table_csv(rows) == slurp(dir + "/sweep.csv"));
  CHECK(sweep_table_text(rows) == slurp(dir + "/sweep.txt"));
  CHECK(release_report_csv(report) == slurp(dir + "/release_report.csv"));
  CHECK(release_report_text(report) == slurp(dir + "/release_report.txt"));
}
