#include "kwocce/nn.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "kwocce/errors.hpp"
#include "kwocce/rng.hpp"
#include "text_io.hpp"

namespace kwocce {

namespace {

constexpr char kModelMagic[] = "kwocce model v1";

struct Activations {
  // per layer: pre-activation z and post-activation a; a[0] is the input
  std::vector<std::vector<double>> z;
  std::vector<std::vector<double>> a;
};

void affine(const std::vector<double>& w, const std::vector<double>& b,
            std::span<const double> in, std::vector<double>& out) {
  const int rows = static_cast<int>(b.size());
  const int cols = static_cast<int>(in.size());
  out.resize(rows);
  for (int r = 0; r < rows; ++r) {
    double acc = b[r];
    const double* wr = w.data() + static_cast<std::size_t>(r) * cols;
    for (int c = 0; c < cols; ++c) acc += wr[c] * in[c];
    out[r] = acc;
  }
}

Activations run_forward(const ModelParams& params,
                        std::span<const double> features) {
  Activations act;
  const int layers = params.n_layers();
  act.z.resize(layers);
  act.a.resize(layers + 1);
  act.a[0].assign(features.begin(), features.end());
  for (int l = 0; l < layers; ++l) {
    affine(params.weights[l], params.biases[l], act.a[l], act.z[l]);
    if (l + 1 < layers) {
      act.a[l + 1] = act.z[l];
      for (double& v : act.a[l + 1]) v = std::max(0.0, v);  // ReLU
    } else {
      act.a[l + 1] = act.z[l];  // logits
    }
  }
  return act;
}

ParamGrads zero_grads(const ModelParams& params) {
  ParamGrads grads;
  grads.weights.reserve(params.weights.size());
  grads.biases.reserve(params.biases.size());
  for (const auto& w : params.weights) grads.weights.emplace_back(w.size(), 0.0);
  for (const auto& b : params.biases) grads.biases.emplace_back(b.size(), 0.0);
  return grads;
}

// Backprop one sample's d(loss)/d(logits) into parameter grads.
void backprop(const ModelParams& params, const Activations& act,
              std::vector<double> delta, ParamGrads& grads) {
  for (int l = params.n_layers() - 1; l >= 0; --l) {
    const auto& a_in = act.a[l];
    const int rows = static_cast<int>(delta.size());
    const int cols = static_cast<int>(a_in.size());
    auto& gw = grads.weights[l];
    auto& gb = grads.biases[l];
    for (int r = 0; r < rows; ++r) {
      gb[r] += delta[r];
      double* gwr = gw.data() + static_cast<std::size_t>(r) * cols;
      for (int c = 0; c < cols; ++c) gwr[c] += delta[r] * a_in[c];
    }
    if (l == 0) break;
    const auto& w = params.weights[l];
    const auto& z_prev = act.z[l - 1];
    std::vector<double> next(z_prev.size(), 0.0);
    for (int r = 0; r < rows; ++r) {
      const double* wr = w.data() + static_cast<std::size_t>(r) * cols;
      for (int c = 0; c < cols; ++c) next[c] += wr[c] * delta[r];
    }
    for (std::size_t c = 0; c < next.size(); ++c) {
      if (z_prev[c] <= 0.0) next[c] = 0.0;  // ReLU gate
    }
    delta = std::move(next);
  }
}

void check_features(const ModelParams& params, std::span<const double> f) {
  if (static_cast<int>(f.size()) != params.layer_dims.front()) {
    throw std::invalid_argument("forward: feature length != input_dim");
  }
  for (const double v : f) {
    if (!std::isfinite(v)) {
      throw std::invalid_argument("forward: non-finite feature");
    }
  }
}

std::string format_int_list(const std::vector<int>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(v[i]);
  }
  return out;
}

std::vector<int> parse_int_list(std::string_view s, const std::string& what) {
  std::vector<int> out;
  if (s.empty()) return out;
  for (const auto item : detail::split_char(s, ',')) {
    out.push_back(detail::parse_int<int>(item, what));
  }
  return out;
}

}  // namespace

void ModelConfig::validate() const {
  if (input_dim <= 0) {
    throw std::invalid_argument("model config: input_dim must be positive");
  }
  for (const int h : hidden_layers) {
    if (h <= 0) {
      throw std::invalid_argument(
          "model config: hidden widths must be positive");
    }
  }
  if (n_classes < 2) {
    throw std::invalid_argument("model config: n_classes must be >= 2");
  }
  if (!(learning_rate > 0.0)) {
    throw std::invalid_argument("model config: learning_rate must be > 0");
  }
  if (epochs < 0) {
    throw std::invalid_argument("model config: epochs must be >= 0");
  }
  if (batch_size <= 0) {
    throw std::invalid_argument("model config: batch_size must be positive");
  }
  loss.validate();
}

ModelParams init_params(const ModelConfig& cfg) {
  cfg.validate();
  ModelParams params;
  params.layer_dims.push_back(cfg.input_dim);
  for (const int h : cfg.hidden_layers) params.layer_dims.push_back(h);
  params.layer_dims.push_back(cfg.n_classes);

  Rng rng(cfg.seed);
  for (std::size_t l = 0; l + 1 < params.layer_dims.size(); ++l) {
    const int fan_in = params.layer_dims[l];
    const int fan_out = params.layer_dims[l + 1];
    const double bound = std::sqrt(6.0 / (fan_in + fan_out));
    std::vector<double> w(static_cast<std::size_t>(fan_out) * fan_in);
    for (double& v : w) v = rng.uniform(-bound, bound);
    params.weights.push_back(std::move(w));
    params.biases.emplace_back(fan_out, 0.0);
  }
  return params;
}

ForwardResult forward(const ModelParams& params,
                      std::span<const double> features) {
  check_features(params, features);
  const auto act = run_forward(params, features);
  ForwardResult result;
  result.logits = act.a.back();
  result.probs = softmax(result.logits);
  return result;
}

BatchEval network_loss_and_grads(const ModelParams& params,
                                 const LossSpec& loss,
                                 std::span<const TrainExample> batch) {
  if (batch.empty()) {
    throw std::invalid_argument("network gradients: empty batch");
  }
  BatchEval eval;
  eval.grads = zero_grads(params);
  double sum = 0.0;
  for (const auto& example : batch) {
    check_features(params, example.features);
    const auto act = run_forward(params, example.features);
    for (const double z : act.a.back()) {
      if (!std::isfinite(z)) {
        throw NumericError("network produced non-finite logits");
      }
    }
    const auto probs = softmax(act.a.back());
    sum += loss_value(loss, example.label, probs);
    backprop(params, act, loss_gradient_from_probs(loss, example.label, probs),
             eval.grads);
  }
  const double inv = 1.0 / static_cast<double>(batch.size());
  eval.mean_loss = sum * inv;
  for (auto& g : eval.grads.weights) {
    for (double& v : g) v *= inv;
  }
  for (auto& g : eval.grads.biases) {
    for (double& v : g) v *= inv;
  }
  return eval;
}

double dataset_mean_loss(const ModelParams& params, const LossSpec& loss,
                         std::span<const TrainExample> data) {
  if (data.empty()) {
    throw std::invalid_argument("dataset_mean_loss: empty dataset");
  }
  double sum = 0.0;
  for (const auto& example : data) {
    const auto act = run_forward(params, example.features);
    for (const double z : act.a.back()) {
      if (!std::isfinite(z)) {
        throw NumericError("network produced non-finite logits");
      }
    }
    sum += loss_value(loss, example.label, softmax(act.a.back()));
  }
  return sum / static_cast<double>(data.size());
}

TrainResult train(const ModelConfig& cfg, std::span<const TrainExample> data) {
  cfg.validate();
  if (data.empty()) throw std::invalid_argument("train: empty dataset");
  for (const auto& example : data) {
    if (example.label < 0 || example.label >= cfg.n_classes) {
      throw std::invalid_argument("train: label outside [0, n_classes)");
    }
    if (static_cast<int>(example.features.size()) != cfg.input_dim) {
      throw std::invalid_argument("train: feature length != input_dim");
    }
  }

  TrainResult result;
  result.params = init_params(cfg);
  // Separate shuffle stream so batch order is independent of init draws.
  Rng shuffle_rng(cfg.seed ^ 0x9e3779b97f4a7c15ULL);

  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::vector<TrainExample> batch;

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    shuffle_rng.shuffle(order);
    for (std::size_t start = 0; start < order.size();
         start += static_cast<std::size_t>(cfg.batch_size)) {
      const std::size_t end =
          std::min(order.size(), start + static_cast<std::size_t>(cfg.batch_size));
      batch.clear();
      for (std::size_t i = start; i < end; ++i) batch.push_back(data[order[i]]);
      BatchEval eval;
      try {
        eval = network_loss_and_grads(result.params, cfg.loss, batch);
      } catch (const NumericError& e) {
        throw NumericError("training diverged at epoch " +
                           std::to_string(epoch + 1) + ": " + e.what());
      }
      if (!std::isfinite(eval.mean_loss)) {
        throw NumericError("training diverged: non-finite batch loss at epoch " +
                           std::to_string(epoch + 1));
      }
      for (int l = 0; l < result.params.n_layers(); ++l) {
        auto& w = result.params.weights[l];
        const auto& gw = eval.grads.weights[l];
        for (std::size_t i = 0; i < w.size(); ++i) {
          w[i] -= cfg.learning_rate * gw[i];
        }
        auto& b = result.params.biases[l];
        const auto& gb = eval.grads.biases[l];
        for (std::size_t i = 0; i < b.size(); ++i) {
          b[i] -= cfg.learning_rate * gb[i];
        }
      }
    }
    const double epoch_loss = dataset_mean_loss(result.params, cfg.loss, data);
    if (!std::isfinite(epoch_loss)) {
      throw NumericError("training diverged: non-finite mean loss at epoch " +
                         std::to_string(epoch + 1));
    }
    result.curve.push_back(epoch_loss);
  }
  return result;
}

void save_model(const ModelParams& params, const ModelConfig& cfg,
                const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open model file for writing: " + path);
  out << kModelMagic << '\n';
  out << "input_dim=" << cfg.input_dim
      << " hidden=" << format_int_list(cfg.hidden_layers)
      << " n_classes=" << cfg.n_classes
      << " architecture=" << architecture_name(cfg.architecture)
      << " loss=" << cfg.loss.name()
      << " alpha=" << detail::format_real(cfg.loss.kernel.alpha)
      << " beta=" << detail::format_real(cfg.loss.kernel.beta)
      << " weight_scheme=" << weight_scheme_name(cfg.loss.kernel.weight_scheme)
      << " epsilon=" << detail::format_real(cfg.loss.epsilon)
      << " seed=" << cfg.seed
      << " learning_rate=" << detail::format_real(cfg.learning_rate)
      << " epochs=" << cfg.epochs << " batch_size=" << cfg.batch_size << '\n';
  for (int l = 0; l < params.n_layers(); ++l) {
    const int rows = params.layer_dims[l + 1];
    const int cols = params.layer_dims[l];
    out << "W" << l << ' ' << rows << ' ' << cols << '\n';
    for (int r = 0; r < rows; ++r) {
      for (int c = 0; c < cols; ++c) {
        if (c) out << ' ';
        out << detail::format_real(
            params.weights[l][static_cast<std::size_t>(r) * cols + c]);
      }
      out << '\n';
    }
    out << "b" << l << ' ' << rows << '\n';
    for (int r = 0; r < rows; ++r) {
      if (r) out << ' ';
      out << detail::format_real(params.biases[l][r]);
    }
    out << '\n';
  }
  if (!out) throw IoError("failed writing model file: " + path);
}

LoadedModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open model file: " + path);
  std::string line;
  if (!std::getline(in, line) || line != kModelMagic) {
    throw ParseError(path + ": not a kwocce v1 model file");
  }
  if (!std::getline(in, line)) throw ParseError(path + ": missing header");

  LoadedModel model;
  ModelConfig& cfg = model.config;
  std::string loss_name = "cce";
  double alpha = 0.0, beta = 0.0;
  std::string scheme_name = "occ_style";
  for (const auto token : detail::split_ws(line)) {
    const auto [key, value] = detail::split_kv(token, path + " header");
    if (key == "input_dim") {
      cfg.input_dim = detail::parse_int<int>(value, "input_dim");
    } else if (key == "hidden") {
      cfg.hidden_layers = parse_int_list(value, "hidden");
    } else if (key == "n_classes") {
      cfg.n_classes = detail::parse_int<int>(value, "n_classes");
    } else if (key == "architecture") {
      cfg.architecture = architecture_from_name(value);
    } else if (key == "loss") {
      loss_name = std::string(value);
    } else if (key == "alpha") {
      alpha = detail::parse_real(value, "alpha");
    } else if (key == "beta") {
      beta = detail::parse_real(value, "beta");
    } else if (key == "weight_scheme") {
      scheme_name = std::string(value);
    } else if (key == "epsilon") {
      cfg.loss.epsilon = detail::parse_real(value, "epsilon");
    } else if (key == "seed") {
      cfg.seed = detail::parse_int<std::uint64_t>(value, "seed");
    } else if (key == "learning_rate") {
      cfg.learning_rate = detail::parse_real(value, "learning_rate");
    } else if (key == "epochs") {
      cfg.epochs = detail::parse_int<int>(value, "epochs");
    } else if (key == "batch_size") {
      cfg.batch_size = detail::parse_int<int>(value, "batch_size");
    } else {
      throw ParseError(path + ": unknown header field '" + std::string(key) +
                       "'");
    }
  }
  const double epsilon = cfg.loss.epsilon;
  cfg.loss = LossSpec::from_name(loss_name);
  cfg.loss.epsilon = epsilon;
  if (cfg.loss.kind == LossKind::Kwocce) {
    cfg.loss.kernel.alpha = alpha;
    cfg.loss.kernel.beta = beta;
    cfg.loss.kernel.weight_scheme = weight_scheme_from_name(scheme_name);
  }
  cfg.validate();

  ModelParams& params = model.params;
  params.layer_dims.push_back(cfg.input_dim);
  for (const int h : cfg.hidden_layers) params.layer_dims.push_back(h);
  params.layer_dims.push_back(cfg.n_classes);

  const int layers = static_cast<int>(params.layer_dims.size()) - 1;
  for (int l = 0; l < layers; ++l) {
    const int rows = params.layer_dims[l + 1];
    const int cols = params.layer_dims[l];
    if (!std::getline(in, line)) throw ParseError(path + ": truncated file");
    {
      std::ostringstream expected;
      expected << "W" << l << ' ' << rows << ' ' << cols;
      if (line != expected.str()) {
        throw ParseError(path + ": bad weight block header '" + line + "'");
      }
    }
    std::vector<double> w;
    w.reserve(static_cast<std::size_t>(rows) * cols);
    for (int r = 0; r < rows; ++r) {
      if (!std::getline(in, line)) throw ParseError(path + ": truncated file");
      const auto fields = detail::split_ws(line);
      if (static_cast<int>(fields.size()) != cols) {
        throw ParseError(path + ": weight row has wrong width");
      }
      for (const auto f : fields) w.push_back(detail::parse_real(f, "weight"));
    }
    params.weights.push_back(std::move(w));
    if (!std::getline(in, line)) throw ParseError(path + ": truncated file");
    {
      std::ostringstream expected;
      expected << "b" << l << ' ' << rows;
      if (line != expected.str()) {
        throw ParseError(path + ": bad bias block header '" + line + "'");
      }
    }
    if (!std::getline(in, line)) throw ParseError(path + ": truncated file");
    const auto fields = detail::split_ws(line);
    if (static_cast<int>(fields.size()) != rows) {
      throw ParseError(path + ": bias row has wrong width");
    }
    std::vector<double> b;
    b.reserve(rows);
    for (const auto f : fields) b.push_back(detail::parse_real(f, "bias"));
    params.biases.push_back(std::move(b));
  }
  for (const auto& v : params.weights) {
    for (const double x : v) {
      if (!std::isfinite(x)) throw ParseError(path + ": non-finite weight");
    }
  }
  return model;
}

ConfidenceRecord predict_confidence(const ModelParams& params,
                                    const ModelConfig& cfg,
                                    std::uint64_t sample_id,
                                    std::span<const double> features,
                                    int am_score, const ScoreScheme& scheme) {
  if (cfg.n_classes != n_classes_for(cfg.architecture, scheme)) {
    throw std::invalid_argument(
        "predict_confidence: model n_classes inconsistent with architecture "
        "under this score scheme");
  }
  const auto result = forward(params, features);
  ConfidenceRecord record;
  record.sample_id = sample_id;
  record.am_score = am_score;
  record.am_level = band_of(am_score, scheme);
  switch (cfg.architecture) {
    case Architecture::Binary:
      record.confidence = confidence_binary(result.probs);
      break;
    case Architecture::CefrNary:
      record.confidence = confidence_cefr_nary(result.probs, record.am_level);
      break;
    case Architecture::ScoreBinned:
      record.confidence =
          confidence_score_binned(result.probs, am_score, scheme);
      break;
  }
  return record;
}

}  // namespace kwocce
