#pragma once

// Losses over predicted probability vectors: plain cross-entropy, the
// reference OCC loss with its linear argmax-distance weight, and the
// kernel-weighted family, plus analytic gradients with respect to
// pre-softmax logits.

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "kwocce/kernels.hpp"

namespace kwocce {

enum class LossKind { Cce, Occ, Kwocce };

// Loss selection. Names accepted in config and on the command line:
// cce, occ, kwocce-linear, kwocce-log, kwocce-exp, kwocce-gaussian.
struct LossSpec {
  LossKind kind = LossKind::Cce;
  KernelSpec kernel;      // consulted for Kwocce only
  double epsilon = 1e-7;  // probability clip before the log

  void validate() const;
  std::string name() const;
  static LossSpec from_name(std::string_view name);
  static const std::vector<std::string>& valid_names();
};

// Ties break to the lowest index.
int argmax_lowest(std::span<const double> values);

// Numerically stable, max-subtracted.
std::vector<double> softmax(std::span<const double> logits);

// -log(clip(p[true_class], epsilon, 1))
double cce_loss(int true_class, std::span<const double> probs, double epsilon);

// (w + 1) * CE with w = |argmax(y) - argmax(p)| / (K - 1)
double occ_reference_loss(int true_class, std::span<const double> probs,
                          double epsilon);

// Per-sample weight of the kernel-weighted loss. occ_style (default):
// 1 + (1 - kernel(distance)); literal: kernel(distance) as written.
double kwocce_weight(const KernelSpec& spec, int true_class, int pred_class,
                     int n_classes);

// kwocce_weight(argmax p vs true) * CE; the weight takes no gradient.
double kwocce_loss(int true_class, std::span<const double> probs,
                   const KernelSpec& spec, double epsilon);

// Dispatch on spec.kind.
double loss_value(const LossSpec& spec, int true_class,
                  std::span<const double> probs);

struct LabelledProbs {
  int true_class = 0;
  std::vector<double> probs;
};

struct LossBatch {
  std::vector<double> per_sample;
  double reduced = 0.0;  // arithmetic mean, summed in index order
};

LossBatch batch_loss(std::span<const LabelledProbs> samples,
                     const LossSpec& spec);

// d(loss)/d(logits) with p = softmax(logits). The ordinal weight is a
// function of argmax(p) and is held constant; when the probability clip is
// engaged the loss is locally flat and the gradient is zero.
std::vector<double> loss_gradient_logits(const LossSpec& spec, int true_class,
                                         std::span<const double> logits);

// Same gradient given probs already computed from the logits.
std::vector<double> loss_gradient_from_probs(const LossSpec& spec,
                                             int true_class,
                                             std::span<const double> probs);

}  // namespace kwocce
