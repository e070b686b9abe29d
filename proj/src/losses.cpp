#include "kwocce/losses.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace kwocce {

namespace {

void check_probs(int true_class, std::span<const double> probs) {
  const int k = static_cast<int>(probs.size());
  if (k < 2) throw std::invalid_argument("loss: need at least 2 classes");
  if (true_class < 0 || true_class >= k) {
    throw std::invalid_argument("loss: true class index outside [0, K)");
  }
  double sum = 0.0;
  for (const double p : probs) {
    if (!(p >= -1e-12 && p <= 1.0 + 1e-12)) {
      throw std::invalid_argument("loss: probability outside [0, 1]");
    }
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw std::invalid_argument("loss: probabilities do not sum to 1");
  }
}

void check_epsilon(double epsilon) {
  if (!(epsilon > 0.0 && epsilon <= 1e-3)) {
    throw std::invalid_argument("loss: epsilon must be in (0, 1e-3]");
  }
}

}  // namespace

void LossSpec::validate() const {
  check_epsilon(epsilon);
  if (kind == LossKind::Kwocce) kernel.validate();
}

std::string LossSpec::name() const {
  switch (kind) {
    case LossKind::Cce: return "cce";
    case LossKind::Occ: return "occ";
    case LossKind::Kwocce:
      return std::string("kwocce-") + kernel_kind_name(kernel.kind);
  }
  throw std::invalid_argument("unknown loss kind");
}

LossSpec LossSpec::from_name(std::string_view name) {
  LossSpec spec;
  for (const auto& valid : valid_names()) {
    if (name != valid) continue;
    if (name == "cce") {
      spec.kind = LossKind::Cce;
    } else if (name == "occ") {
      spec.kind = LossKind::Occ;
    } else {
      spec.kind = LossKind::Kwocce;
      spec.kernel =
          KernelSpec::with_defaults(kernel_kind_from_name(name.substr(7)));
    }
    return spec;
  }
  std::string msg = "unknown loss name: '" + std::string(name) + "' (valid:";
  for (const auto& n : valid_names()) msg += " " + n;
  throw std::invalid_argument(msg + ")");
}

const std::vector<std::string>& LossSpec::valid_names() {
  static const std::vector<std::string> names = {
      "cce",        "occ",        "kwocce-linear",
      "kwocce-log", "kwocce-exp", "kwocce-gaussian"};
  return names;
}

int argmax_lowest(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("argmax of empty vector");
  int best = 0;
  for (int i = 1; i < static_cast<int>(values.size()); ++i) {
    if (values[i] > values[best]) best = i;
  }
  return best;
}

std::vector<double> softmax(std::span<const double> logits) {
  if (logits.empty()) throw std::invalid_argument("softmax of empty vector");
  const double m = *std::max_element(logits.begin(), logits.end());
  std::vector<double> out(logits.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    out[i] = std::exp(logits[i] - m);
    sum += out[i];
  }
  for (double& v : out) v /= sum;
  return out;
}

double cce_loss(int true_class, std::span<const double> probs,
                double epsilon) {
  check_probs(true_class, probs);
  check_epsilon(epsilon);
  const double p = std::clamp(probs[true_class], epsilon, 1.0);
  return -std::log(p);
}

double occ_reference_loss(int true_class, std::span<const double> probs,
                          double epsilon) {
  const double ce = cce_loss(true_class, probs, epsilon);
  const double w = occ_distance_weight(true_class, argmax_lowest(probs),
                                       static_cast<int>(probs.size()));
  return (w + 1.0) * ce;
}

double kwocce_weight(const KernelSpec& spec, int true_class, int pred_class,
                     int n_classes) {
  spec.validate();
  const double k =
      kernel_eval(spec, ClassDistance{pred_class - true_class, n_classes});
  if (spec.weight_scheme == WeightScheme::Literal) return k;
  return 1.0 + (1.0 - k);
}

double kwocce_loss(int true_class, std::span<const double> probs,
                   const KernelSpec& spec, double epsilon) {
  const double ce = cce_loss(true_class, probs, epsilon);
  const double w = kwocce_weight(spec, true_class, argmax_lowest(probs),
                                 static_cast<int>(probs.size()));
  return w * ce;
}

double loss_value(const LossSpec& spec, int true_class,
                  std::span<const double> probs) {
  switch (spec.kind) {
    case LossKind::Cce: return cce_loss(true_class, probs, spec.epsilon);
    case LossKind::Occ:
      return occ_reference_loss(true_class, probs, spec.epsilon);
    case LossKind::Kwocce:
      return kwocce_loss(true_class, probs, spec.kernel, spec.epsilon);
  }
  throw std::invalid_argument("unknown loss kind");
}

LossBatch batch_loss(std::span<const LabelledProbs> samples,
                     const LossSpec& spec) {
  if (samples.empty()) throw std::invalid_argument("batch_loss: empty batch");
  const std::size_t k = samples.front().probs.size();
  LossBatch batch;
  batch.per_sample.reserve(samples.size());
  double sum = 0.0;
  for (const auto& sample : samples) {
    if (sample.probs.size() != k) {
      throw std::invalid_argument("batch_loss: mixed class counts");
    }
    const double l = loss_value(spec, sample.true_class, sample.probs);
    batch.per_sample.push_back(l);
    sum += l;
  }
  batch.reduced = sum / static_cast<double>(samples.size());
  return batch;
}

std::vector<double> loss_gradient_from_probs(const LossSpec& spec,
                                             int true_class,
                                             std::span<const double> probs) {
  const int k = static_cast<int>(probs.size());
  if (true_class < 0 || true_class >= k) {
    throw std::invalid_argument("loss gradient: true class outside [0, K)");
  }
  std::vector<double> grad(k, 0.0);
  // Clip engaged: the loss is -log(epsilon), locally flat in the logits.
  if (probs[true_class] < spec.epsilon) return grad;

  double w = 1.0;
  switch (spec.kind) {
    case LossKind::Cce: break;
    case LossKind::Occ:
      w = 1.0 + occ_distance_weight(true_class, argmax_lowest(probs), k);
      break;
    case LossKind::Kwocce:
      w = kwocce_weight(spec.kernel, true_class, argmax_lowest(probs), k);
      break;
  }
  for (int i = 0; i < k; ++i) grad[i] = w * probs[i];
  grad[true_class] -= w;
  return grad;
}

std::vector<double> loss_gradient_logits(const LossSpec& spec, int true_class,
                                         std::span<const double> logits) {
  for (const double z : logits) {
    if (!std::isfinite(z)) {
      throw std::invalid_argument("loss gradient: non-finite logit");
    }
  }
  const auto probs = softmax(logits);
  return loss_gradient_from_probs(spec, true_class, probs);
}

}  // namespace kwocce
