#include "kwocce/pipeline.hpp"

#include <cmath>
#include <stdexcept>

namespace kwocce {

std::vector<TrainExample> to_training_examples(std::span<const Sample> samples,
                                               Architecture arch,
                                               const ScoreScheme& scheme) {
  (void)scheme;
  std::vector<TrainExample> examples;
  examples.reserve(samples.size());
  for (const auto& s : samples) {
    examples.push_back({s.features, training_label(s, arch)});
  }
  return examples;
}

std::vector<ConfidenceRecord> predict_records(const ModelParams& params,
                                              const ModelConfig& cfg,
                                              std::span<const Sample> samples,
                                              const ScoreScheme& scheme) {
  std::vector<ConfidenceRecord> records;
  records.reserve(samples.size());
  for (const auto& s : samples) {
    records.push_back(predict_confidence(params, cfg, s.sample_id, s.features,
                                         s.am_score, scheme));
  }
  return records;
}

std::vector<int> fa_scores_of(std::span<const Sample> samples) {
  std::vector<int> scores;
  scores.reserve(samples.size());
  for (const auto& s : samples) scores.push_back(s.fa_score);
  return scores;
}

std::vector<int> predicted_levels(const ModelParams& params,
                                  const ModelConfig& cfg,
                                  std::span<const Sample> samples,
                                  const ScoreScheme& scheme) {
  if (cfg.architecture == Architecture::Binary) {
    throw std::invalid_argument(
        "predicted_levels: binary models do not predict a band");
  }
  std::vector<int> levels;
  levels.reserve(samples.size());
  for (const auto& s : samples) {
    const auto result = forward(params, s.features);
    if (cfg.architecture == Architecture::ScoreBinned) {
      levels.push_back(argmax_lowest(bin_probabilities(result.probs, scheme)));
    } else {
      levels.push_back(argmax_lowest(result.probs));
    }
  }
  return levels;
}

double agreement_rate(std::span<const Sample> samples) {
  if (samples.empty()) {
    throw std::invalid_argument("agreement_rate: empty dataset");
  }
  long long correct = 0;
  for (const auto& s : samples) correct += s.correct() ? 1 : 0;
  return static_cast<double>(correct) / static_cast<double>(samples.size());
}

double am_rmse(std::span<const Sample> samples) {
  if (samples.empty()) throw std::invalid_argument("am_rmse: empty dataset");
  double sum = 0.0;
  for (const auto& s : samples) {
    const double err = static_cast<double>(s.am_score - s.fa_score);
    sum += err * err;
  }
  return std::sqrt(sum / static_cast<double>(samples.size()));
}

}  // namespace kwocce
