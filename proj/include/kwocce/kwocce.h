#ifndef KWOCCE_KWOCCE_H
#define KWOCCE_KWOCCE_H

/*
 * C API of the kwocce confidence-modelling toolkit.
 *
 * All functions return kw_status; out-parameters are only written on KW_OK.
 * On failure kw_last_error() returns a thread-local message describing the
 * most recent failing call. Objects returned through handle out-parameters
 * are owned by the caller and released with the matching *_free function.
 */

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#define KWOCCE_VERSION_STRING "0.1.0"

typedef enum kw_status {
  KW_OK = 0,
  KW_ERR_INVALID_ARGUMENT = 1,
  KW_ERR_PARSE = 2,
  KW_ERR_IO = 3,
  KW_ERR_NUMERIC = 4
} kw_status;

const char* kw_version(void);
const char* kw_status_name(kw_status status);
const char* kw_last_error(void);

/* Strings allocated by kw_*_format calls are released with kw_str_free. */
void kw_str_free(char* s);

/* ---------------------------------------------------------------- scheme */

typedef struct kw_scheme kw_scheme;

kw_status kw_scheme_create_default(kw_scheme** out);
/* record: "part_max=20 cuts=16,28 levels=L1,L2,L3" */
kw_status kw_scheme_parse(const char* record, kw_scheme** out);
kw_status kw_scheme_format(const kw_scheme* scheme, char** out);
int kw_scheme_bands(const kw_scheme* scheme);
int kw_scheme_component_max(const kw_scheme* scheme);
int kw_scheme_score_classes(const kw_scheme* scheme);
/* band index, or -1 on out-of-range score */
int kw_scheme_band_of(const kw_scheme* scheme, int score);
void kw_scheme_free(kw_scheme* scheme);

/* ------------------------------------------------------- kernels, losses */

/* kind: "linear" | "log" | "exp" | "gaussian" | "constant-one" */
kw_status kw_kernel_eval(const char* kind, double alpha, double beta,
                         int distance, int n_classes, double* out);

/* loss: "cce" | "occ" | "kwocce-linear" | "kwocce-log" | "kwocce-exp" |
 * "kwocce-gaussian"; alpha/beta < 0 select the documented defaults. */
kw_status kw_loss_validate(const char* loss, double alpha, double beta,
                           const char* weight_scheme, double epsilon);
kw_status kw_loss_value(const char* loss, double alpha, double beta,
                        const char* weight_scheme, double epsilon,
                        int true_class, const double* probs, int n_classes,
                        double* out);

/* -------------------------------------------------------------- datasets */

typedef struct kw_dataset kw_dataset;

typedef struct kw_generator_config {
  int64_t n_candidates;
  uint64_t seed;
  double score_mean;
  double score_sd;
  double am_noise_sd_easy;
  double am_noise_sd_hard;
  double hard_fraction;
  int32_t embedding_dim;
} kw_generator_config;

void kw_generator_config_defaults(kw_generator_config* cfg);

kw_status kw_dataset_generate(const kw_generator_config* cfg,
                              const kw_scheme* scheme, kw_dataset** out);
kw_status kw_dataset_split(const kw_dataset* dataset, double train_frac,
                           double val_frac, double eval_frac, uint64_t seed,
                           const kw_scheme* scheme, kw_dataset** train,
                           kw_dataset** val, kw_dataset** eval);
kw_status kw_dataset_write(const kw_dataset* dataset, const char* path);
kw_status kw_dataset_read(const char* path, const kw_scheme* scheme,
                          kw_dataset** out);
int64_t kw_dataset_size(const kw_dataset* dataset);
int32_t kw_dataset_feature_dim(const kw_dataset* dataset);
/* correctness labels (1 = AM band equals FA band), length kw_dataset_size */
kw_status kw_dataset_correct(const kw_dataset* dataset, int32_t* out);
/* FA band per sample, length kw_dataset_size */
kw_status kw_dataset_fa_levels(const kw_dataset* dataset, int32_t* out);
double kw_dataset_agreement_rate(const kw_dataset* dataset);
double kw_dataset_am_rmse(const kw_dataset* dataset);
void kw_dataset_free(kw_dataset* dataset);

/* ---------------------------------------------------------------- models */

typedef struct kw_model kw_model;

typedef enum kw_architecture {
  KW_ARCH_BINARY = 0,
  KW_ARCH_CEFR = 1,
  KW_ARCH_BINNED = 2
} kw_architecture;

typedef struct kw_train_config {
  int32_t architecture; /* kw_architecture */
  const char* loss;     /* loss name, see kw_loss_value */
  double alpha;         /* < 0: documented default for the kernel */
  double beta;          /* < 0: documented default for the kernel */
  const char* weight_scheme; /* "occ_style" | "literal"; NULL = occ_style */
  double epsilon;
  const int32_t* hidden_layers;
  int32_t n_hidden;
  uint64_t seed;
  double learning_rate;
  int32_t epochs;
  int32_t batch_size;
} kw_train_config;

/* Defaults: binned architecture, cce loss, one hidden layer of 32,
 * lr 0.05, 30 epochs, batch 64, epsilon 1e-7, seed 0. hidden_layers is left
 * NULL meaning the default width. */
void kw_train_config_defaults(kw_train_config* cfg);

/* curve_out (optional) receives the per-epoch mean training loss; it must
 * have room for cfg->epochs entries. */
kw_status kw_model_train(const kw_train_config* cfg, const kw_dataset* train,
                         const kw_scheme* scheme, kw_model** out,
                         double* curve_out, int32_t* curve_len);
kw_status kw_model_save(const kw_model* model, const char* path);
kw_status kw_model_load(const char* path, kw_model** out);
int32_t kw_model_n_classes(const kw_model* model);
int32_t kw_model_architecture(const kw_model* model);
/* loss name; pointer owned by the model handle */
const char* kw_model_loss_name(const kw_model* model);
/* one confidence per sample; out must have room for kw_dataset_size */
kw_status kw_model_confidences(const kw_model* model,
                               const kw_dataset* dataset,
                               const kw_scheme* scheme, double* out);
/* argmax band per sample (binned heads summed into bands first); binary
 * models are rejected */
kw_status kw_model_predicted_levels(const kw_model* model,
                                    const kw_dataset* dataset,
                                    const kw_scheme* scheme, int32_t* out);
void kw_model_free(kw_model* model);

/* ------------------------------------------------------------ evaluation */

typedef struct kw_sweep kw_sweep;

typedef struct kw_sweep_row {
  double threshold;
  int64_t tp, fp, tn, fn;
  double precision, recall, f1, f05, accuracy;
  double pct_released;
  double cefr_agreement;
  double rmse_released; /* NaN when nothing is released */
} kw_sweep_row;

kw_status kw_sweep_run(const kw_model* model, const kw_dataset* dataset,
                       const kw_scheme* scheme, int32_t n_steps,
                       kw_sweep** out);
int32_t kw_sweep_rows(const kw_sweep* sweep);
kw_status kw_sweep_row_get(const kw_sweep* sweep, int32_t index,
                           kw_sweep_row* out);
/* index of the best-F1 row (ties -> lower threshold) */
int32_t kw_sweep_best_f1(const kw_sweep* sweep);

typedef struct kw_release_row {
  double target;
  int32_t feasible;
  double pct_released;
  double rmse_released; /* NaN when absent */
  double threshold;
} kw_release_row;

kw_status kw_sweep_release_report(const kw_sweep* sweep, const double* targets,
                                  int32_t n_targets, kw_release_row* out);

typedef enum kw_table_format { KW_TABLE_CSV = 0, KW_TABLE_TEXT = 1 } kw_table_format;

kw_status kw_sweep_format(const kw_sweep* sweep, kw_table_format format,
                          char** out);
kw_status kw_release_report_format(const kw_sweep* sweep,
                                   const double* targets, int32_t n_targets,
                                   kw_table_format format, char** out);
void kw_sweep_free(kw_sweep* sweep);

kw_status kw_auc_roc(const double* confidences, const int32_t* correctness,
                     int64_t n, double* out);

typedef enum kw_averaging {
  KW_AVG_MICRO = 0,
  KW_AVG_MACRO = 1,
  KW_AVG_WEIGHTED = 2
} kw_averaging;

/* out[4] = precision, recall, f1, f05 */
kw_status kw_multiclass_metrics(const int32_t* true_levels,
                                const int32_t* predicted_levels, int64_t n,
                                int32_t n_classes, kw_averaging averaging,
                                double out[4]);

/* ---------------------------------------------------------- verification */

/* Finite-difference gradient check across all loss kinds and K in
 * {2, 3, 41}. max_rel_err (optional) receives the worst case; report_out
 * (optional) receives an aligned table. Returns KW_OK also when the check
 * fails tolerance; *passed tells the outcome. */
kw_status kw_grad_check(uint64_t seed, int32_t instances_per_case,
                        double tolerance, char** report_out,
                        double* max_rel_err, int32_t* passed);

#ifdef __cplusplus
}
#endif

#endif /* KWOCCE_KWOCCE_H */
