#pragma once

// Minimal deterministic feed-forward softmax classifier: the confidence
// model. ReLU hidden layers, plain mini-batch SGD, bit-reproducible runs.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "kwocce/cefr.hpp"
#include "kwocce/losses.hpp"

namespace kwocce {

struct ModelConfig {
  int input_dim = 0;
  std::vector<int> hidden_layers = {32};
  int n_classes = 2;
  Architecture architecture = Architecture::Binary;
  std::uint64_t seed = 0;
  double learning_rate = 0.05;
  int epochs = 30;
  int batch_size = 64;
  LossSpec loss;

  void validate() const;
};

// Dense layers; weights[l] is row-major [out x in], biases[l] has out entries.
struct ModelParams {
  std::vector<int> layer_dims;  // input, hidden widths..., n_classes
  std::vector<std::vector<double>> weights;
  std::vector<std::vector<double>> biases;

  int n_layers() const { return static_cast<int>(weights.size()); }
};

// Scaled-uniform init, bound = sqrt(6/(fan_in+fan_out)); biases zero.
// Deterministic given cfg.seed.
ModelParams init_params(const ModelConfig& cfg);

struct ForwardResult {
  std::vector<double> logits;
  std::vector<double> probs;
};

ForwardResult forward(const ModelParams& params,
                      std::span<const double> features);

struct TrainExample {
  std::vector<double> features;
  int label = 0;
};

// Mean loss and parameter gradients over a batch; gradient layout matches
// ModelParams. Shared by the trainer and the finite-difference checker.
struct ParamGrads {
  std::vector<std::vector<double>> weights;
  std::vector<std::vector<double>> biases;
};
struct BatchEval {
  double mean_loss = 0.0;
  ParamGrads grads;
};
BatchEval network_loss_and_grads(const ModelParams& params,
                                 const LossSpec& loss,
                                 std::span<const TrainExample> batch);

double dataset_mean_loss(const ModelParams& params, const LossSpec& loss,
                         std::span<const TrainExample> data);

struct TrainResult {
  ModelParams params;
  // Mean loss over the full training set, evaluated after each epoch.
  std::vector<double> curve;
};

// Seeded shuffle per epoch, batches in shuffled order, last partial batch
// included. Throws NumericError if the loss goes non-finite.
TrainResult train(const ModelConfig& cfg, std::span<const TrainExample> data);

// Versioned text format; reals at 17 significant digits so that
// load(save(m)) is bit-exact.
void save_model(const ModelParams& params, const ModelConfig& cfg,
                const std::string& path);

struct LoadedModel {
  ModelParams params;
  ModelConfig config;
};
LoadedModel load_model(const std::string& path);

// Forward pass plus the architecture-appropriate confidence extraction.
ConfidenceRecord predict_confidence(const ModelParams& params,
                                    const ModelConfig& cfg,
                                    std::uint64_t sample_id,
                                    std::span<const double> features,
                                    int am_score, const ScoreScheme& scheme);

}  // namespace kwocce
