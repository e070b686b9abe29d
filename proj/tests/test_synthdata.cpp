#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>

#include "kwocce/errors.hpp"
#include "kwocce/evaluate.hpp"
#include "kwocce/pipeline.hpp"
#include "kwocce/synthdata.hpp"

using namespace kwocce;

namespace {

GeneratorConfig spec_cfg(std::uint64_t seed, std::int64_t n = 50000) {
  GeneratorConfig cfg;
  cfg.n_candidates = n;
  cfg.seed = seed;
  cfg.score_mean = 24.0;
  cfg.score_sd = 6.0;
  cfg.am_noise_sd_easy = 0.8;
  cfg.am_noise_sd_hard = 3.0;
  cfg.hard_fraction = 0.3;
  return cfg;
}

std::string temp_path(const char* name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

bool samples_equal(const Sample& a, const Sample& b) {
  return a.sample_id == b.sample_id && a.features == b.features &&
         a.fa_score == b.fa_score && a.am_score == b.am_score &&
         a.fa_level == b.fa_level && a.am_level == b.am_level;
}

// minimal sample for split tests: only id, fa_score and levels matter
Sample stub_sample(std::uint64_t id, int fa, const ScoreScheme& scheme) {
  Sample s;
  s.sample_id = id;
  s.fa_score = fa;
  s.am_score = fa;
  s.fa_level = band_of(fa, scheme);
  s.am_level = s.fa_level;
  s.features = {static_cast<double>(id)};
  return s;
}

}  // namespace

TEST_CASE("zero noise copies fa to am") {
  const ScoreScheme scheme;
  GeneratorConfig cfg = spec_cfg(3, 500);
  cfg.am_noise_sd_easy = 0.0;
  cfg.am_noise_sd_hard = 0.0;
  for (const auto& s : generate(cfg, scheme)) {
    CHECK(s.am_score == s.fa_score);
    CHECK(s.correct());
  }
}

TEST_CASE("empty generation") {
  const ScoreScheme scheme;
  GeneratorConfig cfg = spec_cfg(3, 0);
  CHECK(generate(cfg, scheme).empty());
}

TEST_CASE("generation is a pure function of (cfg, scheme)") {
  const ScoreScheme scheme;
  const GeneratorConfig cfg = spec_cfg(11, 300);
  const auto a = generate(cfg, scheme);
  const auto b = generate(cfg, scheme);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(samples_equal(a[i], b[i]));
}

TEST_CASE("range safety under extreme parameters") {
  const ScoreScheme scheme;
  GeneratorConfig cfg = spec_cfg(5, 2000);
  cfg.score_mean = 2.0;
  cfg.score_sd = 15.0;
  cfg.am_noise_sd_easy = 10.0;
  cfg.am_noise_sd_hard = 10.0;
  for (const auto& s : generate(cfg, scheme)) {
    CHECK(s.fa_score >= 0);
    CHECK(s.fa_score <= 40);
    CHECK(s.am_score >= 0);
    CHECK(s.am_score <= 40);
    CHECK(s.fa_level == band_of(s.fa_score, scheme));
    CHECK(s.am_level == band_of(s.am_score, scheme));
    CHECK(static_cast<int>(s.features.size()) == feature_dim(cfg, scheme));
  }
}

TEST_CASE("distribution sanity at n = 50k") {
  const ScoreScheme scheme;
  const auto samples = generate(spec_cfg(1), scheme);
  double mean = 0.0;
  long long boundary = 0;
  for (const auto& s : samples) {
    mean += s.fa_score;
    boundary += (s.fa_score == 0 || s.fa_score == 40) ? 1 : 0;
  }
  mean /= static_cast<double>(samples.size());
  CHECK(std::abs(mean - 24.0) <= 0.5);
  CHECK(static_cast<double>(boundary) / samples.size() < 0.01);
}

TEST_CASE("frozen regression bound: agreement rate in (0.80, 0.97)") {
  // Monte-Carlo band measured once for this generator and seed family
  // (seeds 1..5 give rates near 0.909) and frozen as a regression check.
  const ScoreScheme scheme;
  for (const std::uint64_t seed : {1, 2, 3, 4, 5}) {
    const auto samples = generate(spec_cfg(seed), scheme);
    const double rate = agreement_rate(samples);
    CHECK(rate > 0.80);
    CHECK(rate < 0.97);
  }
}

TEST_CASE("split: everything to train") {
  const ScoreScheme scheme;
  const auto samples = generate(spec_cfg(2, 400), scheme);
  const auto split = stratified_split(samples, {1.0, 0.0, 0.0}, 9, scheme);
  CHECK(split.train.size() == samples.size());
  CHECK(split.val.empty());
  CHECK(split.eval.empty());
}

TEST_CASE("split: exact divisibility gives exact per-level counts") {
  const ScoreScheme scheme;
  std::vector<Sample> samples;
  std::uint64_t id = 0;
  for (const int fa : {5, 20, 35}) {
    for (int i = 0; i < 100; ++i) samples.push_back(stub_sample(id++, fa, scheme));
  }
  const auto split = stratified_split(samples, {0.8, 0.1, 0.1}, 4, scheme);
  CHECK(split.train.size() == 240);
  CHECK(split.val.size() == 30);
  CHECK(split.eval.size() == 30);
  for (int level = 0; level < 3; ++level) {
    const auto count = [&](const std::vector<Sample>& part) {
      return std::count_if(part.begin(), part.end(), [&](const Sample& s) {
        return s.fa_level == level;
      });
    };
    CHECK(count(split.train) == 80);
    CHECK(count(split.val) == 10);
    CHECK(count(split.eval) == 10);
  }
}

TEST_CASE("split: membership is independent of input order") {
  const ScoreScheme scheme;
  auto samples = generate(spec_cfg(6, 500), scheme);
  const auto sorted_split = stratified_split(samples, {0.7, 0.2, 0.1}, 12, scheme);

  std::reverse(samples.begin(), samples.end());
  std::swap(samples[3], samples[77]);
  const auto shuffled_split =
      stratified_split(samples, {0.7, 0.2, 0.1}, 12, scheme);

  const auto ids = [](const std::vector<Sample>& part) {
    std::set<std::uint64_t> out;
    for (const auto& s : part) out.insert(s.sample_id);
    return out;
  };
  CHECK(ids(sorted_split.train) == ids(shuffled_split.train));
  CHECK(ids(sorted_split.val) == ids(shuffled_split.val));
  CHECK(ids(sorted_split.eval) == ids(shuffled_split.eval));
}

TEST_CASE("split: disjoint and exhaustive") {
  const ScoreScheme scheme;
  const auto samples = generate(spec_cfg(8, 777), scheme);
  const auto split = stratified_split(samples, {0.6, 0.3, 0.1}, 2, scheme);
  std::set<std::uint64_t> seen;
  for (const auto* part : {&split.train, &split.val, &split.eval}) {
    for (const auto& s : *part) {
      CHECK(seen.insert(s.sample_id).second);  // no duplicates
    }
  }
  CHECK(seen.size() == samples.size());
}

TEST_CASE("split: errors") {
  const ScoreScheme scheme;
  std::vector<Sample> tiny = {stub_sample(0, 5, scheme),
                              stub_sample(1, 20, scheme)};
  // level with one sample cannot feed three positive splits
  CHECK_THROWS_AS(stratified_split(tiny, {0.4, 0.3, 0.3}, 1, scheme),
                  std::invalid_argument);
  CHECK_THROWS_AS(stratified_split(tiny, {0.5, 0.2, 0.2}, 1, scheme),
                  std::invalid_argument);  // fractions sum != 1
  CHECK_THROWS_AS(stratified_split(tiny, {1.5, -0.5, 0.0}, 1, scheme),
                  std::invalid_argument);
}

TEST_CASE("dataset file round-trip") {
  const ScoreScheme scheme;
  const auto samples = generate(spec_cfg(21, 1000), scheme);
  const std::string path = temp_path("kwocce_roundtrip.txt");
  write_dataset(samples, path);
  const auto back = read_dataset(path, scheme);
  REQUIRE(back.size() == samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    CHECK(samples_equal(samples[i], back[i]));
  }
  std::filesystem::remove(path);
}

TEST_CASE("dataset file edge cases") {
  const ScoreScheme scheme;
  const std::string path = temp_path("kwocce_dataset_edge.txt");
  {
    std::ofstream out(path);
  }
  CHECK(read_dataset(path, scheme).empty());

  {
    std::ofstream out(path);
    out << "0 23 24 3 0.5 0.5\n";  // declares 3 features, provides 2
  }
  CHECK_THROWS_WITH_AS(read_dataset(path, scheme), doctest::Contains(":1"),
                       ParseError);

  {
    std::ofstream out(path);
    out << "0 23 24 1 0.5\n";
    out << "1 oops 24 1 0.5\n";
  }
  CHECK_THROWS_WITH_AS(read_dataset(path, scheme), doctest::Contains(":2"),
                       ParseError);

  {
    std::ofstream out(path);
    out << "0 23 99 1 0.5\n";  // score outside the scheme
  }
  CHECK_THROWS_AS(read_dataset(path, scheme), ParseError);

  CHECK_THROWS_AS(read_dataset(temp_path("kwocce_missing_dataset.txt"), scheme),
                  IoError);
  std::filesystem::remove(path);
}

TEST_CASE("training labels per architecture") {
  const ScoreScheme scheme;
  Sample s = stub_sample(0, 20, scheme);
  s.am_score = 30;  // band 2, mismatch against fa band 1
  s.am_level = band_of(30, scheme);
  CHECK(training_label(s, Architecture::Binary) == 0);
  CHECK(training_label(s, Architecture::CefrNary) == 1);
  CHECK(training_label(s, Architecture::ScoreBinned) == 20);
  s.am_score = 21;
  s.am_level = band_of(21, scheme);
  CHECK(training_label(s, Architecture::Binary) == 1);
}

TEST_CASE("learnability: confidence separates correct from incorrect") {
  // A model trained on default generated data must rank correctness with
  // AUC-ROC above 0.6 on held-out samples.
  const ScoreScheme scheme;
  const GeneratorConfig cfg;  // defaults: n = 10000, seed = 1
  const auto samples = generate(cfg, scheme);
  const auto split = stratified_split(samples, {0.8, 0.0, 0.2}, cfg.seed, scheme);

  ModelConfig mc;
  mc.input_dim = feature_dim(cfg, scheme);
  mc.n_classes = n_classes_for(Architecture::ScoreBinned, scheme);
  mc.architecture = Architecture::ScoreBinned;
  mc.seed = 1;
  mc.epochs = 10;
  mc.loss = LossSpec::from_name("cce");
  const auto examples =
      to_training_examples(split.train, mc.architecture, scheme);
  const auto result = train(mc, examples);

  const auto records =
      predict_records(result.params, mc, split.eval, scheme);
  std::vector<double> conf;
  std::vector<int> correct;
  for (std::size_t i = 0; i < records.size(); ++i) {
    conf.push_back(records[i].confidence);
    correct.push_back(split.eval[i].correct() ? 1 : 0);
  }
  CHECK(auc_roc(conf, correct) > 0.6);
}
