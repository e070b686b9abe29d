#pragma once

// Glue between generated samples and the model/evaluation layers.

#include <span>
#include <vector>

#include "kwocce/evaluate.hpp"
#include "kwocce/nn.hpp"
#include "kwocce/synthdata.hpp"

namespace kwocce {

std::vector<TrainExample> to_training_examples(std::span<const Sample> samples,
                                               Architecture arch,
                                               const ScoreScheme& scheme);

std::vector<ConfidenceRecord> predict_records(const ModelParams& params,
                                              const ModelConfig& cfg,
                                              std::span<const Sample> samples,
                                              const ScoreScheme& scheme);

std::vector<int> fa_scores_of(std::span<const Sample> samples);

// Band predicted by the model head: argmax band probability (binned heads
// are first summed into bands). Binary heads have no band prediction.
std::vector<int> predicted_levels(const ModelParams& params,
                                  const ModelConfig& cfg,
                                  std::span<const Sample> samples,
                                  const ScoreScheme& scheme);

// Share of samples whose AM band matches the FA band.
double agreement_rate(std::span<const Sample> samples);

// RMSE of am_score vs fa_score over all samples (the ungated baseline).
double am_rmse(std::span<const Sample> samples);

}  // namespace kwocce
