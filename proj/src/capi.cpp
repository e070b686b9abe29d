#include "kwocce/kwocce.h"

#include <cmath>
#include <cstring>
#include <limits>
#include <memory>
#include <new>
#include <string>

#include "kwocce/errors.hpp"
#include "kwocce/evaluate.hpp"
#include "kwocce/gradcheck.hpp"
#include "kwocce/kernels.hpp"
#include "kwocce/losses.hpp"
#include "kwocce/nn.hpp"
#include "kwocce/pipeline.hpp"
#include "kwocce/report.hpp"
#include "kwocce/synthdata.hpp"

using namespace kwocce;

// Opaque handle bodies.
struct kw_scheme {
  ScoreScheme scheme;
};
struct kw_dataset {
  std::vector<Sample> samples;
};
struct kw_model {
  ModelParams params;
  ModelConfig config;
  std::string loss_name;
};
struct kw_sweep {
  std::vector<SweepRow> rows;
};

namespace {

thread_local std::string g_last_error;

void set_error(const std::string& message) { g_last_error = message; }

template <typename Fn>
kw_status guarded(Fn&& fn) {
  try {
    fn();
    return KW_OK;
  } catch (const ParseError& e) {
    set_error(e.what());
    return KW_ERR_PARSE;
  } catch (const IoError& e) {
    set_error(e.what());
    return KW_ERR_IO;
  } catch (const NumericError& e) {
    set_error(e.what());
    return KW_ERR_NUMERIC;
  } catch (const std::bad_alloc&) {
    set_error("out of memory");
    return KW_ERR_NUMERIC;
  } catch (const std::exception& e) {
    set_error(e.what());
    return KW_ERR_INVALID_ARGUMENT;
  }
}

kw_status require(bool condition, const char* message) {
  if (condition) return KW_OK;
  set_error(message);
  return KW_ERR_INVALID_ARGUMENT;
}

char* dup_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

KernelSpec kernel_from_c(const char* kind, double alpha, double beta,
                         const char* weight_scheme) {
  KernelSpec spec = KernelSpec::with_defaults(
      kernel_kind_from_name(kind),
      weight_scheme ? weight_scheme_from_name(weight_scheme)
                    : WeightScheme::OccStyle);
  if (alpha >= 0.0) spec.alpha = alpha;
  if (beta >= 0.0) spec.beta = beta;
  spec.validate();
  return spec;
}

LossSpec loss_from_c(const char* loss, double alpha, double beta,
                     const char* weight_scheme, double epsilon) {
  LossSpec spec = LossSpec::from_name(loss);
  if (spec.kind == LossKind::Kwocce) {
    if (alpha >= 0.0) spec.kernel.alpha = alpha;
    if (beta >= 0.0) spec.kernel.beta = beta;
    if (weight_scheme) {
      spec.kernel.weight_scheme = weight_scheme_from_name(weight_scheme);
    }
  }
  if (epsilon > 0.0) spec.epsilon = epsilon;
  spec.validate();
  return spec;
}

}  // namespace

extern "C" {

const char* kw_version(void) { return KWOCCE_VERSION_STRING; }

const char* kw_status_name(kw_status status) {
  switch (status) {
    case KW_OK: return "ok";
    case KW_ERR_INVALID_ARGUMENT: return "invalid argument";
    case KW_ERR_PARSE: return "parse error";
    case KW_ERR_IO: return "io error";
    case KW_ERR_NUMERIC: return "numeric error";
  }
  return "unknown status";
}

const char* kw_last_error(void) { return g_last_error.c_str(); }

void kw_str_free(char* s) { delete[] s; }

/* ---------------------------------------------------------------- scheme */

kw_status kw_scheme_create_default(kw_scheme** out) {
  if (kw_status s = require(out != nullptr, "null out"); s != KW_OK) return s;
  return guarded([&] {
    auto handle = std::make_unique<kw_scheme>();
    handle->scheme.validate();
    *out = handle.release();
  });
}

kw_status kw_scheme_parse(const char* record, kw_scheme** out) {
  if (kw_status s = require(record && out, "null argument"); s != KW_OK)
    return s;
  return guarded([&] {
    auto handle = std::make_unique<kw_scheme>();
    handle->scheme = ScoreScheme::from_record(record);
    *out = handle.release();
  });
}

kw_status kw_scheme_format(const kw_scheme* scheme, char** out) {
  if (kw_status s = require(scheme && out, "null argument"); s != KW_OK)
    return s;
  return guarded([&] { *out = dup_string(scheme->scheme.to_record()); });
}

int kw_scheme_bands(const kw_scheme* scheme) {
  return scheme ? scheme->scheme.bands() : -1;
}

int kw_scheme_component_max(const kw_scheme* scheme) {
  return scheme ? scheme->scheme.component_max() : -1;
}

int kw_scheme_score_classes(const kw_scheme* scheme) {
  return scheme ? scheme->scheme.n_score_classes() : -1;
}

int kw_scheme_band_of(const kw_scheme* scheme, int score) {
  if (!scheme) return -1;
  try {
    return band_of(score, scheme->scheme);
  } catch (const std::exception& e) {
    set_error(e.what());
    return -1;
  }
}

void kw_scheme_free(kw_scheme* scheme) { delete scheme; }

/* ------------------------------------------------------- kernels, losses */

kw_status kw_kernel_eval(const char* kind, double alpha, double beta,
                         int distance, int n_classes, double* out) {
  if (kw_status s = require(kind && out, "null argument"); s != KW_OK)
    return s;
  return guarded([&] {
    const KernelSpec spec = kernel_from_c(kind, alpha, beta, nullptr);
    *out = kernel_eval(spec, ClassDistance{distance, n_classes});
  });
}

kw_status kw_loss_validate(const char* loss, double alpha, double beta,
                           const char* weight_scheme, double epsilon) {
  if (kw_status s = require(loss != nullptr, "null argument"); s != KW_OK)
    return s;
  return guarded(
      [&] { loss_from_c(loss, alpha, beta, weight_scheme, epsilon); });
}

kw_status kw_loss_value(const char* loss, double alpha, double beta,
                        const char* weight_scheme, double epsilon,
                        int true_class, const double* probs, int n_classes,
                        double* out) {
  if (kw_status s = require(loss && probs && out && n_classes > 0,
                            "null argument");
      s != KW_OK)
    return s;
  return guarded([&] {
    const LossSpec spec =
        loss_from_c(loss, alpha, beta, weight_scheme, epsilon);
    *out = loss_value(spec, true_class,
                      std::span<const double>(probs, probs + n_classes));
  });
}

/* -------------------------------------------------------------- datasets */

void kw_generator_config_defaults(kw_generator_config* cfg) {
  if (!cfg) return;
  const GeneratorConfig defaults;
  cfg->n_candidates = defaults.n_candidates;
  cfg->seed = defaults.seed;
  cfg->score_mean = defaults.score_mean;
  cfg->score_sd = defaults.score_sd;
  cfg->am_noise_sd_easy = defaults.am_noise_sd_easy;
  cfg->am_noise_sd_hard = defaults.am_noise_sd_hard;
  cfg->hard_fraction = defaults.hard_fraction;
  cfg->embedding_dim = defaults.embedding_dim;
}

kw_status kw_dataset_generate(const kw_generator_config* cfg,
                              const kw_scheme* scheme, kw_dataset** out) {
  if (kw_status s = require(cfg && scheme && out, "null argument"); s != KW_OK)
    return s;
  return guarded([&] {
    GeneratorConfig gc;
    gc.n_candidates = cfg->n_candidates;
    gc.seed = cfg->seed;
    gc.score_mean = cfg->score_mean;
    gc.score_sd = cfg->score_sd;
    gc.am_noise_sd_easy = cfg->am_noise_sd_easy;
    gc.am_noise_sd_hard = cfg->am_noise_sd_hard;
    gc.hard_fraction = cfg->hard_fraction;
    gc.embedding_dim = cfg->embedding_dim;
    auto handle = std::make_unique<kw_dataset>();
    handle->samples = generate(gc, scheme->scheme);
    *out = handle.release();
  });
}

kw_status kw_dataset_split(const kw_dataset* dataset, double train_frac,
                           double val_frac, double eval_frac, uint64_t seed,
                           const kw_scheme* scheme, kw_dataset** train,
                           kw_dataset** val, kw_dataset** eval) {
  if (kw_status s = require(dataset && scheme && train && val && eval,
                            "null argument");
      s != KW_OK)
    return s;
  return guarded([&] {
    auto split =
        stratified_split(dataset->samples,
                         SplitFractions{train_frac, val_frac, eval_frac}, seed,
                         scheme->scheme);
    auto t = std::make_unique<kw_dataset>();
    auto v = std::make_unique<kw_dataset>();
    auto e = std::make_unique<kw_dataset>();
    t->samples = std::move(split.train);
    v->samples = std::move(split.val);
    e->samples = std::move(split.eval);
    *train = t.release();
    *val = v.release();
    *eval = e.release();
  });
}

kw_status kw_dataset_write(const kw_dataset* dataset, const char* path) {
  if (kw_status s = require(dataset && path, "null argument"); s != KW_OK)
    return s;
  return guarded([&] { write_dataset(dataset->samples, path); });
}

kw_status kw_dataset_read(const char* path, const kw_scheme* scheme,
                          kw_dataset** out) {
  if (kw_status s = require(path && scheme && out, "null argument");
      s != KW_OK)
    return s;
  return guarded([&] {
    auto handle = std::make_unique<kw_dataset>();
    handle->samples = read_dataset(path, scheme->scheme);
    *out = handle.release();
  });
}

int64_t kw_dataset_size(const kw_dataset* dataset) {
  return dataset ? static_cast<int64_t>(dataset->samples.size()) : -1;
}

int32_t kw_dataset_feature_dim(const kw_dataset* dataset) {
  if (!dataset) return -1;
  if (dataset->samples.empty()) return 0;
  return static_cast<int32_t>(dataset->samples.front().features.size());
}

kw_status kw_dataset_correct(const kw_dataset* dataset, int32_t* out) {
  if (kw_status s = require(dataset && out, "null argument"); s != KW_OK)
    return s;
  for (std::size_t i = 0; i < dataset->samples.size(); ++i) {
    out[i] = dataset->samples[i].correct() ? 1 : 0;
  }
  return KW_OK;
}

kw_status kw_dataset_fa_levels(const kw_dataset* dataset, int32_t* out) {
  if (kw_status s = require(dataset && out, "null argument"); s != KW_OK)
    return s;
  for (std::size_t i = 0; i < dataset->samples.size(); ++i) {
    out[i] = dataset->samples[i].fa_level;
  }
  return KW_OK;
}

double kw_dataset_agreement_rate(const kw_dataset* dataset) {
  if (!dataset || dataset->samples.empty()) {
    return std::numeric_limits<double>::quiet_NaN();
  }
  return agreement_rate(dataset->samples);
}

double kw_dataset_am_rmse(const kw_dataset* dataset) {
  if (!dataset || dataset->samples.empty()) {
    return std::numeric_limits<double>::quiet_NaN();
  }
  return am_rmse(dataset->samples);
}

void kw_dataset_free(kw_dataset* dataset) { delete dataset; }

/* ---------------------------------------------------------------- models */

void kw_train_config_defaults(kw_train_config* cfg) {
  if (!cfg) return;
  cfg->architecture = KW_ARCH_BINNED;
  cfg->loss = "cce";
  cfg->alpha = -1.0;
  cfg->beta = -1.0;
  cfg->weight_scheme = nullptr;
  cfg->epsilon = 1e-7;
  cfg->hidden_layers = nullptr;
  cfg->n_hidden = -1;
  cfg->seed = 0;
  cfg->learning_rate = 0.05;
  cfg->epochs = 30;
  cfg->batch_size = 64;
}

kw_status kw_model_train(const kw_train_config* cfg, const kw_dataset* train,
                         const kw_scheme* scheme, kw_model** out,
                         double* curve_out, int32_t* curve_len) {
  if (kw_status s = require(cfg && cfg->loss && train && scheme && out,
                            "null argument");
      s != KW_OK)
    return s;
  return guarded([&] {
    if (train->samples.empty()) {
      throw std::invalid_argument("train: empty dataset");
    }
    ModelConfig mc;
    mc.architecture = static_cast<Architecture>(cfg->architecture);
    if (cfg->architecture < 0 || cfg->architecture > 2) {
      throw std::invalid_argument("train: unknown architecture code");
    }
    mc.input_dim = static_cast<int>(train->samples.front().features.size());
    if (cfg->n_hidden > 0 && !cfg->hidden_layers) {
      throw std::invalid_argument("train: n_hidden > 0 with null widths");
    }
    if (cfg->n_hidden >= 0) {
      mc.hidden_layers.assign(cfg->hidden_layers,
                              cfg->hidden_layers + cfg->n_hidden);
    }
    mc.n_classes = n_classes_for(mc.architecture, scheme->scheme);
    mc.seed = cfg->seed;
    mc.learning_rate = cfg->learning_rate;
    mc.epochs = cfg->epochs;
    mc.batch_size = cfg->batch_size;
    mc.loss = loss_from_c(cfg->loss, cfg->alpha, cfg->beta, cfg->weight_scheme,
                          cfg->epsilon);

    const auto examples =
        to_training_examples(train->samples, mc.architecture, scheme->scheme);
    auto result = kwocce::train(mc, examples);
    if (curve_out) {
      for (std::size_t i = 0; i < result.curve.size(); ++i) {
        curve_out[i] = result.curve[i];
      }
    }
    if (curve_len) *curve_len = static_cast<int32_t>(result.curve.size());

    auto handle = std::make_unique<kw_model>();
    handle->params = std::move(result.params);
    handle->config = std::move(mc);
    handle->loss_name = handle->config.loss.name();
    *out = handle.release();
  });
}

kw_status kw_model_save(const kw_model* model, const char* path) {
  if (kw_status s = require(model && path, "null argument"); s != KW_OK)
    return s;
  return guarded([&] { save_model(model->params, model->config, path); });
}

kw_status kw_model_load(const char* path, kw_model** out) {
  if (kw_status s = require(path && out, "null argument"); s != KW_OK)
    return s;
  return guarded([&] {
    auto loaded = load_model(path);
    auto handle = std::make_unique<kw_model>();
    handle->params = std::move(loaded.params);
    handle->config = std::move(loaded.config);
    handle->loss_name = handle->config.loss.name();
    *out = handle.release();
  });
}

int32_t kw_model_n_classes(const kw_model* model) {
  return model ? model->config.n_classes : -1;
}

int32_t kw_model_architecture(const kw_model* model) {
  return model ? static_cast<int32_t>(model->config.architecture) : -1;
}

const char* kw_model_loss_name(const kw_model* model) {
  return model ? model->loss_name.c_str() : nullptr;
}

kw_status kw_model_confidences(const kw_model* model,
                               const kw_dataset* dataset,
                               const kw_scheme* scheme, double* out) {
  if (kw_status s = require(model && dataset && scheme && out,
                            "null argument");
      s != KW_OK)
    return s;
  return guarded([&] {
    const auto records = predict_records(model->params, model->config,
                                         dataset->samples, scheme->scheme);
    for (std::size_t i = 0; i < records.size(); ++i) {
      out[i] = records[i].confidence;
    }
  });
}

kw_status kw_model_predicted_levels(const kw_model* model,
                                    const kw_dataset* dataset,
                                    const kw_scheme* scheme, int32_t* out) {
  if (kw_status s = require(model && dataset && scheme && out,
                            "null argument");
      s != KW_OK)
    return s;
  return guarded([&] {
    const auto levels = predicted_levels(model->params, model->config,
                                         dataset->samples, scheme->scheme);
    for (std::size_t i = 0; i < levels.size(); ++i) out[i] = levels[i];
  });
}

void kw_model_free(kw_model* model) { delete model; }

/* ------------------------------------------------------------ evaluation */

kw_status kw_sweep_run(const kw_model* model, const kw_dataset* dataset,
                       const kw_scheme* scheme, int32_t n_steps,
                       kw_sweep** out) {
  if (kw_status s = require(model && dataset && scheme && out,
                            "null argument");
      s != KW_OK)
    return s;
  return guarded([&] {
    const auto records = predict_records(model->params, model->config,
                                         dataset->samples, scheme->scheme);
    const auto fa = fa_scores_of(dataset->samples);
    auto handle = std::make_unique<kw_sweep>();
    handle->rows = sweep(records, fa, scheme->scheme, n_steps);
    *out = handle.release();
  });
}

int32_t kw_sweep_rows(const kw_sweep* sweep) {
  return sweep ? static_cast<int32_t>(sweep->rows.size()) : -1;
}

kw_status kw_sweep_row_get(const kw_sweep* sweep, int32_t index,
                           kw_sweep_row* out) {
  if (kw_status s = require(sweep && out, "null argument"); s != KW_OK)
    return s;
  if (kw_status s = require(
          index >= 0 && index < static_cast<int32_t>(sweep->rows.size()),
          "sweep row index out of range");
      s != KW_OK)
    return s;
  const SweepRow& row = sweep->rows[index];
  out->threshold = row.threshold;
  out->tp = row.tp;
  out->fp = row.fp;
  out->tn = row.tn;
  out->fn = row.fn;
  out->precision = row.precision;
  out->recall = row.recall;
  out->f1 = row.f1;
  out->f05 = row.f05;
  out->accuracy = row.accuracy;
  out->pct_released = row.pct_released;
  out->cefr_agreement = row.cefr_agreement;
  out->rmse_released = row.rmse_released
                           ? *row.rmse_released
                           : std::numeric_limits<double>::quiet_NaN();
  return KW_OK;
}

int32_t kw_sweep_best_f1(const kw_sweep* sweep) {
  if (!sweep || sweep->rows.empty()) return -1;
  const SweepRow& best = best_f1_row(sweep->rows);
  return static_cast<int32_t>(&best - sweep->rows.data());
}

kw_status kw_sweep_release_report(const kw_sweep* sweep, const double* targets,
                                  int32_t n_targets, kw_release_row* out) {
  if (kw_status s = require(sweep && targets && out && n_targets > 0,
                            "null argument");
      s != KW_OK)
    return s;
  return guarded([&] {
    const auto rows = release_report(
        sweep->rows, std::span<const double>(targets, targets + n_targets));
    for (std::size_t i = 0; i < rows.size(); ++i) {
      out[i].target = rows[i].target;
      out[i].feasible = rows[i].feasible ? 1 : 0;
      out[i].pct_released = rows[i].pct_released;
      out[i].rmse_released = rows[i].rmse_released
                                 ? *rows[i].rmse_released
                                 : std::numeric_limits<double>::quiet_NaN();
      out[i].threshold = rows[i].threshold;
    }
  });
}

kw_status kw_sweep_format(const kw_sweep* sweep, kw_table_format format,
                          char** out) {
  if (kw_status s = require(sweep && out, "null argument"); s != KW_OK)
    return s;
  return guarded([&] {
    *out = dup_string(format == KW_TABLE_CSV ? sweep_table_csv(sweep->rows)
                                             : sweep_table_text(sweep->rows));
  });
}

kw_status kw_release_report_format(const kw_sweep* sweep,
                                   const double* targets, int32_t n_targets,
                                   kw_table_format format, char** out) {
  if (kw_status s = require(sweep && targets && out && n_targets > 0,
                            "null argument");
      s != KW_OK)
    return s;
  return guarded([&] {
    const auto rows = release_report(
        sweep->rows, std::span<const double>(targets, targets + n_targets));
    *out = dup_string(format == KW_TABLE_CSV ? release_report_csv(rows)
                                             : release_report_text(rows));
  });
}

void kw_sweep_free(kw_sweep* sweep) { delete sweep; }

kw_status kw_auc_roc(const double* confidences, const int32_t* correctness,
                     int64_t n, double* out) {
  if (kw_status s = require(confidences && correctness && out && n > 0,
                            "null argument");
      s != KW_OK)
    return s;
  return guarded([&] {
    std::vector<int> labels(correctness, correctness + n);
    *out = auc_roc(std::span<const double>(confidences, confidences + n),
                   labels);
  });
}

kw_status kw_multiclass_metrics(const int32_t* true_levels,
                                const int32_t* predicted_levels, int64_t n,
                                int32_t n_classes, kw_averaging averaging,
                                double out[4]) {
  if (kw_status s = require(true_levels && predicted_levels && out && n > 0,
                            "null argument");
      s != KW_OK)
    return s;
  return guarded([&] {
    std::vector<int> t(true_levels, true_levels + n);
    std::vector<int> p(predicted_levels, predicted_levels + n);
    const auto metrics =
        multiclass_metrics(t, p, n_classes, static_cast<Averaging>(averaging));
    out[0] = metrics.precision;
    out[1] = metrics.recall;
    out[2] = metrics.f1;
    out[3] = metrics.f05;
  });
}

/* ---------------------------------------------------------- verification */

kw_status kw_grad_check(uint64_t seed, int32_t instances_per_case,
                        double tolerance, char** report_out,
                        double* max_rel_err, int32_t* passed) {
  return guarded([&] {
    const auto report = run_grad_check(seed, instances_per_case);
    if (report_out) *report_out = dup_string(grad_check_table(report, tolerance));
    if (max_rel_err) *max_rel_err = report.max_rel_err;
    if (passed) *passed = report.passed(tolerance) ? 1 : 0;
  });
}

}  // extern "C"
