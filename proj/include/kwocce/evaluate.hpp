#pragma once

// Threshold sweep, binary-decision metrics, AUC-ROC, multi-class metric
// averaging, and the hybrid-marking release simulation.

#include <optional>
#include <span>
#include <vector>

#include "kwocce/cefr.hpp"

namespace kwocce {

struct SweepRow {
  double threshold = 0.0;
  long long tp = 0, fp = 0, tn = 0, fn = 0;
  double precision = 0.0, recall = 0.0, f1 = 0.0, f05 = 0.0, accuracy = 0.0;
  double pct_released = 0.0;   // 0..100
  double cefr_agreement = 0.0; // 0..100, final band vs FA band
  std::optional<double> rmse_released;  // absent when nothing is released
};

// Thresholds k/n_steps for k = 0..n_steps (inclusive grid). A record is
// released when confidence >= threshold. Positive = released and
// band-correct; the release-simulation columns (pct_released,
// cefr_agreement, rmse_released) are filled per threshold.
std::vector<SweepRow> sweep(std::span<const ConfidenceRecord> records,
                            std::span<const int> fa_scores,
                            const ScoreScheme& scheme, int n_steps = 1000);

// Max F1; ties break to the lower threshold.
const SweepRow& best_f1_row(std::span<const SweepRow> rows);

// Probability a random positive outranks a random negative, ties count half.
// Requires at least one positive and one negative label.
double auc_roc(std::span<const double> confidences,
               std::span<const int> correctness);

enum class Averaging { Micro, Macro, Weighted };

struct MulticlassMetrics {
  double precision = 0.0, recall = 0.0, f1 = 0.0, f05 = 0.0;
};

// One-vs-rest counts per class over the label space [0, n_classes).
// 0/0 denominators yield 0.
MulticlassMetrics multiclass_metrics(std::span<const int> true_levels,
                                     std::span<const int> predicted_levels,
                                     int n_classes, Averaging averaging);

struct ReleasePoint {
  double pct_released = 0.0;
  double cefr_agreement = 0.0;
  std::optional<double> rmse_released;
};

// Final score per candidate = AM score if confidence >= threshold, else the
// FA score; agreement compares final band to FA band; RMSE is over released
// candidates only, on the raw score scale.
ReleasePoint release_simulation(std::span<const ConfidenceRecord> records,
                                std::span<const int> fa_scores,
                                const ScoreScheme& scheme, double threshold);

struct ReleaseReportRow {
  double target = 0.0;  // minimum cefr_agreement, 0..100
  bool feasible = false;
  double pct_released = 0.0;
  std::optional<double> rmse_released;
  double threshold = 0.0;
};

inline constexpr double kDefaultReleaseTargets[] = {100, 99, 98, 97, 96, 95};

// For each target: the maximal pct_released among thresholds whose
// cefr_agreement meets it, with the operating point's RMSE and threshold.
std::vector<ReleaseReportRow> release_report(
    std::span<const SweepRow> rows,
    std::span<const double> targets = kDefaultReleaseTargets);

}  // namespace kwocce
