#pragma once

// Central finite-difference verification of the analytic gradients, across
// every loss kind and classifier head size.

#include <cstdint>
#include <string>
#include <vector>

namespace kwocce {

struct GradCheckCase {
  std::string loss_name;
  int n_classes = 0;
  int instances = 0;
  double max_rel_err = 0.0;
};

struct GradCheckReport {
  std::vector<GradCheckCase> cases;
  double max_rel_err = 0.0;
  int total_instances = 0;

  bool passed(double tolerance) const { return max_rel_err <= tolerance; }
};

// Random small networks (full parameter-space check) for each loss kind and
// K in {2, 3, 41}; instances_per_case random instances per combination.
// Central differences with step 1e-6; relative error has a unit floor:
// |a - f| / max(1, |a|, |f|).
GradCheckReport run_grad_check(std::uint64_t seed, int instances_per_case = 6);

std::string grad_check_table(const GradCheckReport& report, double tolerance);

}  // namespace kwocce
