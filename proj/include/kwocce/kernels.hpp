#pragma once

// Kernels mapping an ordinal class distance to a penalty-shaping value, plus
// the linear argmax-distance weight used by the reference OCC loss. All
// kernels are even in the distance and non-increasing in its magnitude.

#include <string>
#include <string_view>

namespace kwocce {

enum class KernelKind { Linear, Log, Exp, Gaussian, ConstantOne };
enum class WeightScheme { OccStyle, Literal };

const char* kernel_kind_name(KernelKind kind);
KernelKind kernel_kind_from_name(std::string_view name);
const char* weight_scheme_name(WeightScheme scheme);
WeightScheme weight_scheme_from_name(std::string_view name);

// Signed ordinal distance (predicted index - true index) together with the
// class count it was measured on. |x| must not exceed n_classes - 1.
struct ClassDistance {
  int x = 0;
  int n_classes = 2;
};

struct KernelSpec {
  KernelKind kind = KernelKind::ConstantOne;
  double alpha = 0.0;  // shape; must stay 0 for linear and constant-one
  double beta = 0.0;   // exp-kernel offset in class-distance units
  WeightScheme weight_scheme = WeightScheme::OccStyle;

  void validate() const;  // throws std::invalid_argument

  // Config record, e.g. "kind=gaussian alpha=0.5 beta=0 weight_scheme=occ_style".
  // Field names are part of the CLI config contract.
  std::string to_record() const;
  static KernelSpec from_record(std::string_view record);

  // Documented default hyperparameters per kind (log a=3, exp a=1 b=3,
  // gaussian a=0.5).
  static KernelSpec with_defaults(KernelKind kind,
                                  WeightScheme scheme = WeightScheme::OccStyle);
};

// max(0, 1 - |x|/N)
double kernel_linear(ClassDistance d);
// max(0, 1 - a*log(1+|x|)/log(N)); requires N >= 2
double kernel_log(ClassDistance d, double alpha);
// max(0, a*(1 - 1/(1+exp(b-|x|)))), computed through a stable logistic
double kernel_exp(ClassDistance d, double alpha, double beta);
// exp(-(x/a)^2); the outer max(0, .) is vacuous but kept as written
double kernel_gaussian(ClassDistance d, double alpha);

// |y_true - y_pred| / (K - 1); requires K >= 2
double occ_distance_weight(int y_true_index, int y_pred_index, int n_classes);

// Dispatch over kernel kinds; constant-one returns 1 for every distance.
double kernel_eval(const KernelSpec& spec, ClassDistance d);

}  // namespace kwocce
