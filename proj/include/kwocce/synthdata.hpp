#pragma once

// Seeded synthetic exam-data generator. Fair-average scores are near-normal
// on the component scale, automarker noise comes in an easy and a hard
// regime, and the embedding carries a recoverable hardness signal so that
// confidence modelling on generated data is non-trivial.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "kwocce/cefr.hpp"

namespace kwocce {

struct GeneratorConfig {
  std::int64_t n_candidates = 10000;
  std::uint64_t seed = 1;
  double score_mean = 24.0;  // on the 0..component_max scale
  double score_sd = 6.0;
  double am_noise_sd_easy = 0.8;
  double am_noise_sd_hard = 3.0;
  double hard_fraction = 0.3;
  int embedding_dim = 16;

  void validate() const;
};

struct Sample {
  std::uint64_t sample_id = 0;
  // embedding ++ normalized AM score ++ signed normalized distance from the
  // AM score to each cut score
  std::vector<double> features;
  int fa_score = 0;
  int am_score = 0;
  int fa_level = 0;
  int am_level = 0;

  bool correct() const { return fa_level == am_level; }
};

int feature_dim(const GeneratorConfig& cfg, const ScoreScheme& scheme);

// Pure function of (cfg, scheme).
std::vector<Sample> generate(const GeneratorConfig& cfg,
                             const ScoreScheme& scheme);

struct SplitFractions {
  double train = 0.8;
  double val = 0.1;
  double eval = 0.1;
};

struct DatasetSplit {
  std::vector<Sample> train, val, eval;
};

// Stratified by fa_level with largest-remainder rounding per level. Input
// order does not matter: samples are canonically pre-sorted by sample_id
// before the seeded shuffle. A level with fewer samples than the number of
// positive-fraction splits is an error.
DatasetSplit stratified_split(std::span<const Sample> samples,
                              SplitFractions fractions, std::uint64_t seed,
                              const ScoreScheme& scheme);

// One sample per line: sample_id fa_score am_score n_features f0 ... fn-1,
// reals at 17 significant digits; read(write(x)) == x.
void write_dataset(std::span<const Sample> samples, const std::string& path);
std::vector<Sample> read_dataset(const std::string& path,
                                 const ScoreScheme& scheme);

// Label for a classifier head: binary -> correct(0/1), CEFR n-ary ->
// fa_level, score-binned -> fa_score.
int training_label(const Sample& sample, Architecture arch);

}  // namespace kwocce
