#include "kwocce/report.hpp"

#include <cstdio>
#include <string>

namespace kwocce {

namespace {

std::string fixed4(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4f", v);
  return buf;
}

std::string pad_left(const std::string& s, std::size_t width) {
  return s.size() >= width ? s : std::string(width - s.size(), ' ') + s;
}

const char* kSweepHeader[] = {"threshold", "tp",       "fp",
                              "tn",        "fn",       "precision",
                              "recall",    "f1",       "f05",
                              "accuracy",  "pct_released",
                              "cefr_agreement", "rmse_released"};

std::vector<std::string> sweep_fields(const SweepRow& row) {
  return {fixed4(row.threshold),
          std::to_string(row.tp),
          std::to_string(row.fp),
          std::to_string(row.tn),
          std::to_string(row.fn),
          fixed4(row.precision),
          fixed4(row.recall),
          fixed4(row.f1),
          fixed4(row.f05),
          fixed4(row.accuracy),
          fixed4(row.pct_released),
          fixed4(row.cefr_agreement),
          row.rmse_released ? fixed4(*row.rmse_released) : std::string()};
}

const char* kReleaseHeader[] = {"target", "pct_released", "rmse_released",
                                "threshold"};

std::vector<std::string> release_fields(const ReleaseReportRow& row) {
  if (!row.feasible) {
    return {fixed4(row.target), std::string(), std::string(), std::string()};
  }
  return {fixed4(row.target), fixed4(row.pct_released),
          row.rmse_released ? fixed4(*row.rmse_released) : std::string(),
          fixed4(row.threshold)};
}

template <typename Row, std::size_t N>
std::string render_csv(std::span<const Row> rows, const char* const (&header)[N],
                       std::vector<std::string> (*fields)(const Row&)) {
  std::string out;
  for (std::size_t i = 0; i < N; ++i) {
    if (i) out += ',';
    out += header[i];
  }
  out += '\n';
  for (const auto& row : rows) {
    const auto values = fields(row);
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (i) out += ',';
      out += values[i];
    }
    out += '\n';
  }
  return out;
}

template <typename Row, std::size_t N>
std::string render_text(std::span<const Row> rows,
                        const char* const (&header)[N],
                        std::vector<std::string> (*fields)(const Row&)) {
  std::vector<std::size_t> widths(N);
  for (std::size_t i = 0; i < N; ++i) widths[i] = std::string(header[i]).size();
  std::vector<std::vector<std::string>> table;
  table.reserve(rows.size());
  for (const auto& row : rows) {
    table.push_back(fields(row));
    for (std::size_t i = 0; i < N; ++i) {
      if (table.back()[i].empty()) table.back()[i] = "-";
      widths[i] = std::max(widths[i], table.back()[i].size());
    }
  }
  std::string out;
  for (std::size_t i = 0; i < N; ++i) {
    if (i) out += "  ";
    out += pad_left(header[i], widths[i]);
  }
  out += '\n';
  for (const auto& values : table) {
    for (std::size_t i = 0; i < N; ++i) {
      if (i) out += "  ";
      out += pad_left(values[i], widths[i]);
    }
    out += '\n';
  }
  return out;
}

}  // namespace

std::string sweep_table_csv(std::span<const SweepRow> rows) {
  return render_csv(rows, kSweepHeader, &sweep_fields);
}

std::string sweep_table_text(std::span<const SweepRow> rows) {
  return render_text(rows, kSweepHeader, &sweep_fields);
}

std::string release_report_csv(std::span<const ReleaseReportRow> rows) {
  return render_csv(rows, kReleaseHeader, &release_fields);
}

std::string release_report_text(std::span<const ReleaseReportRow> rows) {
  return render_text(rows, kReleaseHeader, &release_fields);
}

}  // namespace kwocce
