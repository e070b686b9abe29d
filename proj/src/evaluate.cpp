#include "kwocce/evaluate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace kwocce {

namespace {

double ratio_or_zero(double num, double den) {
  return den > 0.0 ? num / den : 0.0;
}

double fbeta(double precision, double recall, double beta2) {
  const double den = beta2 * precision + recall;
  return den > 0.0 ? (1.0 + beta2) * precision * recall / den : 0.0;
}

// Confidence-sorted view plus suffix sums, shared by sweep and the
// single-threshold simulation.
struct ReleaseContext {
  std::vector<double> conf_sorted;       // ascending
  std::vector<long long> correct_suffix; // band-correct among conf >= cutoff
  std::vector<double> sqerr_suffix;      // squared score error, same set
  long long total = 0;
  long long total_correct = 0;

  ReleaseContext(std::span<const ConfidenceRecord> records,
                 std::span<const int> fa_scores, const ScoreScheme& scheme) {
    if (records.size() != fa_scores.size()) {
      throw std::invalid_argument(
          "sweep: records and reference scores are misaligned");
    }
    if (records.empty()) {
      throw std::invalid_argument("sweep: no records");
    }
    total = static_cast<long long>(records.size());
    std::vector<std::size_t> order(records.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return records[a].confidence < records[b].confidence;
    });

    conf_sorted.resize(records.size());
    correct_suffix.assign(records.size() + 1, 0);
    sqerr_suffix.assign(records.size() + 1, 0.0);
    for (std::size_t pos = 0; pos < order.size(); ++pos) {
      conf_sorted[pos] = records[order[pos]].confidence;
    }
    for (std::size_t pos = order.size(); pos-- > 0;) {
      const auto& r = records[order[pos]];
      const int fa = fa_scores[order[pos]];
      const bool correct = r.am_level == band_of(fa, scheme);
      const double err = static_cast<double>(r.am_score - fa);
      correct_suffix[pos] = correct_suffix[pos + 1] + (correct ? 1 : 0);
      sqerr_suffix[pos] = sqerr_suffix[pos + 1] + err * err;
    }
    total_correct = correct_suffix.empty() ? 0 : correct_suffix[0];
  }

  SweepRow row_at(double threshold) const {
    const auto it = std::lower_bound(conf_sorted.begin(), conf_sorted.end(),
                                     threshold);  // first conf >= threshold
    const std::size_t pos =
        static_cast<std::size_t>(it - conf_sorted.begin());
    const long long released = total - static_cast<long long>(pos);

    SweepRow row;
    row.threshold = threshold;
    row.tp = correct_suffix[pos];
    row.fp = released - row.tp;
    row.fn = total_correct - row.tp;
    row.tn = (total - released) - row.fn;
    row.precision = ratio_or_zero(static_cast<double>(row.tp),
                                  static_cast<double>(row.tp + row.fp));
    row.recall = ratio_or_zero(static_cast<double>(row.tp),
                               static_cast<double>(row.tp + row.fn));
    row.f1 = fbeta(row.precision, row.recall, 1.0);
    row.f05 = fbeta(row.precision, row.recall, 0.25);
    row.accuracy = ratio_or_zero(static_cast<double>(row.tp + row.tn),
                                 static_cast<double>(total));
    row.pct_released =
        100.0 * ratio_or_zero(static_cast<double>(released),
                              static_cast<double>(total));
    // Withheld candidates fall back to the FA score, so only released
    // mismatches break agreement.
    row.cefr_agreement =
        100.0 * ratio_or_zero(static_cast<double>(total - row.fp),
                              static_cast<double>(total));
    if (released > 0) {
      row.rmse_released =
          std::sqrt(sqerr_suffix[pos] / static_cast<double>(released));
    }
    return row;
  }
};

}  // namespace

std::vector<SweepRow> sweep(std::span<const ConfidenceRecord> records,
                            std::span<const int> fa_scores,
                            const ScoreScheme& scheme, int n_steps) {
  if (n_steps < 1) throw std::invalid_argument("sweep: n_steps must be >= 1");
  const ReleaseContext ctx(records, fa_scores, scheme);
  std::vector<SweepRow> rows;
  rows.reserve(static_cast<std::size_t>(n_steps) + 1);
  for (int k = 0; k <= n_steps; ++k) {
    rows.push_back(ctx.row_at(static_cast<double>(k) / n_steps));
  }
  return rows;
}

const SweepRow& best_f1_row(std::span<const SweepRow> rows) {
  if (rows.empty()) throw std::invalid_argument("best_f1_row: no rows");
  std::size_t best = 0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i].f1 > rows[best].f1) best = i;  // ties keep the lower threshold
  }
  return rows[best];
}

double auc_roc(std::span<const double> confidences,
               std::span<const int> correctness) {
  if (confidences.size() != correctness.size()) {
    throw std::invalid_argument("auc_roc: misaligned inputs");
  }
  long long n_pos = 0, n_neg = 0;
  for (const int label : correctness) {
    if (label != 0 && label != 1) {
      throw std::invalid_argument("auc_roc: labels must be 0 or 1");
    }
    (label == 1 ? n_pos : n_neg) += 1;
  }
  if (n_pos == 0 || n_neg == 0) {
    throw std::invalid_argument(
        "auc_roc: need at least one positive and one negative label");
  }

  std::vector<std::size_t> order(confidences.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return confidences[a] < confidences[b];
  });

  // Walk ascending tie groups; wins and ties stay integer so the result is
  // exactly (wins + ties/2) / (n_pos * n_neg).
  long long wins = 0, ties = 0, neg_seen = 0;
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    long long pos_group = 0, neg_group = 0;
    while (j < order.size() &&
           confidences[order[j]] == confidences[order[i]]) {
      (correctness[order[j]] == 1 ? pos_group : neg_group) += 1;
      ++j;
    }
    wins += pos_group * neg_seen;
    ties += pos_group * neg_group;
    neg_seen += neg_group;
    i = j;
  }
  return (static_cast<double>(wins) + 0.5 * static_cast<double>(ties)) /
         (static_cast<double>(n_pos) * static_cast<double>(n_neg));
}

MulticlassMetrics multiclass_metrics(std::span<const int> true_levels,
                                     std::span<const int> predicted_levels,
                                     int n_classes, Averaging averaging) {
  if (true_levels.size() != predicted_levels.size() || true_levels.empty()) {
    throw std::invalid_argument(
        "multiclass_metrics: need aligned nonempty label lists");
  }
  if (n_classes < 2) {
    throw std::invalid_argument("multiclass_metrics: n_classes must be >= 2");
  }
  std::vector<long long> tp(n_classes, 0), fp(n_classes, 0), fn(n_classes, 0),
      support(n_classes, 0);
  for (std::size_t i = 0; i < true_levels.size(); ++i) {
    const int t = true_levels[i], p = predicted_levels[i];
    if (t < 0 || t >= n_classes || p < 0 || p >= n_classes) {
      throw std::invalid_argument(
          "multiclass_metrics: label outside [0, n_classes)");
    }
    ++support[t];
    if (t == p) {
      ++tp[t];
    } else {
      ++fn[t];
      ++fp[p];
    }
  }

  MulticlassMetrics out;
  if (averaging == Averaging::Micro) {
    long long tp_sum = 0, fp_sum = 0, fn_sum = 0;
    for (int c = 0; c < n_classes; ++c) {
      tp_sum += tp[c];
      fp_sum += fp[c];
      fn_sum += fn[c];
    }
    out.precision = ratio_or_zero(static_cast<double>(tp_sum),
                                  static_cast<double>(tp_sum + fp_sum));
    out.recall = ratio_or_zero(static_cast<double>(tp_sum),
                               static_cast<double>(tp_sum + fn_sum));
    out.f1 = fbeta(out.precision, out.recall, 1.0);
    out.f05 = fbeta(out.precision, out.recall, 0.25);
    return out;
  }

  const double n = static_cast<double>(true_levels.size());
  for (int c = 0; c < n_classes; ++c) {
    const double p = ratio_or_zero(static_cast<double>(tp[c]),
                                   static_cast<double>(tp[c] + fp[c]));
    const double r = ratio_or_zero(static_cast<double>(tp[c]),
                                   static_cast<double>(tp[c] + fn[c]));
    const double weight = averaging == Averaging::Macro
                              ? 1.0 / n_classes
                              : static_cast<double>(support[c]) / n;
    out.precision += weight * p;
    out.recall += weight * r;
    out.f1 += weight * fbeta(p, r, 1.0);
    out.f05 += weight * fbeta(p, r, 0.25);
  }
  return out;
}

ReleasePoint release_simulation(std::span<const ConfidenceRecord> records,
                                std::span<const int> fa_scores,
                                const ScoreScheme& scheme, double threshold) {
  const ReleaseContext ctx(records, fa_scores, scheme);
  const SweepRow row = ctx.row_at(threshold);
  return ReleasePoint{row.pct_released, row.cefr_agreement, row.rmse_released};
}

std::vector<ReleaseReportRow> release_report(std::span<const SweepRow> rows,
                                             std::span<const double> targets) {
  std::vector<ReleaseReportRow> report;
  report.reserve(targets.size());
  for (const double target : targets) {
    ReleaseReportRow out;
    out.target = target;
    for (const auto& row : rows) {
      if (row.cefr_agreement < target) continue;
      if (!out.feasible || row.pct_released > out.pct_released) {
        out.feasible = true;
        out.pct_released = row.pct_released;
        out.rmse_released = row.rmse_released;
        out.threshold = row.threshold;
      }
    }
    report.push_back(out);
  }
  return report;
}

}  // namespace kwocce
