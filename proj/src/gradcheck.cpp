#include "kwocce/gradcheck.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "kwocce/nn.hpp"
#include "kwocce/rng.hpp"

namespace kwocce {

namespace {

constexpr double kFdStep = 1e-6;

double rel_err(double analytic, double numeric) {
  const double denom =
      std::max({1.0, std::abs(analytic), std::abs(numeric)});
  return std::abs(analytic - numeric) / denom;
}

// Max relative error between the analytic parameter gradient and central
// finite differences of the batch loss, over every weight and bias.
double check_instance(const LossSpec& loss, int n_classes, Rng& rng) {
  const int input_dim = 2 + static_cast<int>(rng.below(5));
  const int hidden = 3 + static_cast<int>(rng.below(6));
  const int n_samples = 2 + static_cast<int>(rng.below(3));

  ModelConfig cfg;
  cfg.input_dim = input_dim;
  cfg.hidden_layers = {hidden};
  cfg.n_classes = n_classes;
  cfg.seed = rng.next_u64();
  cfg.loss = loss;
  ModelParams params = init_params(cfg);
  // Mild scaling separates the logits without saturating any probability
  // toward the epsilon clip, where the loss stops being smooth.
  for (auto& w : params.weights) {
    for (double& v : w) v *= 1.5;
  }
  for (auto& b : params.biases) {
    for (double& v : b) v = rng.uniform(-0.5, 0.5);
  }

  std::vector<TrainExample> batch(n_samples);
  for (auto& example : batch) {
    example.features.resize(input_dim);
    for (double& v : example.features) v = rng.normal(0.0, 1.0);
    example.label = static_cast<int>(rng.below(n_classes));
  }

  const auto eval = network_loss_and_grads(params, loss, batch);
  double worst = 0.0;
  for (int l = 0; l < params.n_layers(); ++l) {
    for (int which = 0; which < 2; ++which) {
      auto& vec = which == 0 ? params.weights[l] : params.biases[l];
      const auto& grad =
          which == 0 ? eval.grads.weights[l] : eval.grads.biases[l];
      for (std::size_t i = 0; i < vec.size(); ++i) {
        const double saved = vec[i];
        vec[i] = saved + kFdStep;
        const double up = dataset_mean_loss(params, loss, batch);
        vec[i] = saved - kFdStep;
        const double down = dataset_mean_loss(params, loss, batch);
        vec[i] = saved;
        const double numeric = (up - down) / (2.0 * kFdStep);
        worst = std::max(worst, rel_err(grad[i], numeric));
      }
    }
  }
  return worst;
}

}  // namespace

GradCheckReport run_grad_check(std::uint64_t seed, int instances_per_case) {
  if (instances_per_case < 1) {
    throw std::invalid_argument("grad check: need at least one instance");
  }
  GradCheckReport report;
  Rng rng(seed);
  for (const auto& loss_name : LossSpec::valid_names()) {
    const LossSpec loss = LossSpec::from_name(loss_name);
    for (const int n_classes : {2, 3, 41}) {
      GradCheckCase result;
      result.loss_name = loss_name;
      result.n_classes = n_classes;
      result.instances = instances_per_case;
      for (int i = 0; i < instances_per_case; ++i) {
        result.max_rel_err =
            std::max(result.max_rel_err, check_instance(loss, n_classes, rng));
      }
      report.max_rel_err = std::max(report.max_rel_err, result.max_rel_err);
      report.total_instances += instances_per_case;
      report.cases.push_back(std::move(result));
    }
  }
  return report;
}

std::string grad_check_table(const GradCheckReport& report, double tolerance) {
  std::string out =
      "loss             n_classes  instances  max_rel_err     status\n";
  char buf[128];
  for (const auto& c : report.cases) {
    std::snprintf(buf, sizeof(buf), "%-16s %9d  %9d  %.6e  %s\n",
                  c.loss_name.c_str(), c.n_classes, c.instances, c.max_rel_err,
                  c.max_rel_err <= tolerance ? "ok" : "FAIL");
    out += buf;
  }
  std::snprintf(buf, sizeof(buf),
                "total: %d instances, max relative error %.6e (tolerance %g)\n",
                report.total_instances, report.max_rel_err, tolerance);
  out += buf;
  return out;
}

}  // namespace kwocce
