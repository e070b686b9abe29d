#pragma once

// Score scheme, cut-score binning, and confidence extraction for the three
// classifier heads (binary, CEFR n-ary, score-binned n-ary).

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace kwocce {

// Component score range and CEFR band boundaries. Bands are half-open
// [lower, next cut) with the top band closed at component_max. The default
// cuts are synthetic stand-ins, not operational cut scores.
struct ScoreScheme {
  int part_max = 20;
  std::vector<int> cut_scores = {16, 28};
  std::vector<std::string> level_names = {"L1", "L2", "L3"};

  int component_max() const { return 2 * part_max; }
  int n_score_classes() const { return component_max() + 1; }
  int bands() const { return static_cast<int>(cut_scores.size()) + 1; }

  void validate() const;  // throws std::invalid_argument

  // Config record, e.g. "part_max=20 cuts=16,28 levels=L1,L2,L3".
  std::string to_record() const;
  static ScoreScheme from_record(std::string_view record);
};

// Band index of an integer component score.
int band_of(int score, const ScoreScheme& scheme);

// Sum score-class probabilities within each band. Input length must be
// scheme.n_score_classes().
std::vector<double> bin_probabilities(std::span<const double> score_probs,
                                      const ScoreScheme& scheme);

// p[1] of a 2-class head: probability the AM score is band-correct.
double confidence_binary(std::span<const double> probs);

// Probability assigned to the band the AM predicted.
double confidence_cefr_nary(std::span<const double> band_probs, int am_level);

// Cumulative band confidence from a 41-way score head.
double confidence_score_binned(std::span<const double> score_probs,
                               int am_score, const ScoreScheme& scheme);

enum class Architecture { Binary, CefrNary, ScoreBinned };

const char* architecture_name(Architecture arch);
Architecture architecture_from_name(std::string_view name);
int n_classes_for(Architecture arch, const ScoreScheme& scheme);

struct ConfidenceRecord {
  std::uint64_t sample_id = 0;
  int am_score = 0;
  int am_level = 0;
  double confidence = 0.0;
};

}  // namespace kwocce
