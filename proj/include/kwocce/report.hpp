#pragma once

// Table rendering for sweep and release reports: CSV (header row, 4-decimal
// reals) and an aligned plain-text layout. Both are stable output contracts.

#include <span>
#include <string>

#include "kwocce/evaluate.hpp"

namespace kwocce {

std::string sweep_table_csv(std::span<const SweepRow> rows);
std::string sweep_table_text(std::span<const SweepRow> rows);

std::string release_report_csv(std::span<const ReleaseReportRow> rows);
std::string release_report_text(std::span<const ReleaseReportRow> rows);

}  // namespace kwocce
