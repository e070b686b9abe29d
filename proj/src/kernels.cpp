#include "kwocce/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "text_io.hpp"

namespace kwocce {

namespace {

void check_distance(ClassDistance d) {
  if (d.n_classes < 1) {
    throw std::invalid_argument("class distance: n_classes must be positive");
  }
  if (std::abs(d.x) > d.n_classes - 1) {
    throw std::invalid_argument("class distance: |x| exceeds n_classes - 1");
  }
}

// 1/(1+exp(-t)) without overflowing for large |t|
double logistic(double t) {
  if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
  const double e = std::exp(t);
  return e / (1.0 + e);
}

}  // namespace

const char* kernel_kind_name(KernelKind kind) {
  switch (kind) {
    case KernelKind::Linear: return "linear";
    case KernelKind::Log: return "log";
    case KernelKind::Exp: return "exp";
    case KernelKind::Gaussian: return "gaussian";
    case KernelKind::ConstantOne: return "constant-one";
  }
  throw std::invalid_argument("unknown kernel kind");
}

KernelKind kernel_kind_from_name(std::string_view name) {
  if (name == "linear") return KernelKind::Linear;
  if (name == "log") return KernelKind::Log;
  if (name == "exp") return KernelKind::Exp;
  if (name == "gaussian") return KernelKind::Gaussian;
  if (name == "constant-one") return KernelKind::ConstantOne;
  throw std::invalid_argument("unknown kernel kind: '" + std::string(name) +
                              "'");
}

const char* weight_scheme_name(WeightScheme scheme) {
  return scheme == WeightScheme::OccStyle ? "occ_style" : "literal";
}

WeightScheme weight_scheme_from_name(std::string_view name) {
  if (name == "occ_style") return WeightScheme::OccStyle;
  if (name == "literal") return WeightScheme::Literal;
  throw std::invalid_argument("unknown weight scheme: '" + std::string(name) +
                              "'");
}

void KernelSpec::validate() const {
  switch (kind) {
    case KernelKind::Linear:
    case KernelKind::ConstantOne:
      if (alpha != 0.0 || beta != 0.0) {
        throw std::invalid_argument(
            std::string(kernel_kind_name(kind)) +
            " kernel takes no alpha/beta; leave them defaulted");
      }
      break;
    case KernelKind::Log:
    case KernelKind::Gaussian:
      if (!(alpha > 0.0)) {
        throw std::invalid_argument(std::string(kernel_kind_name(kind)) +
                                    " kernel requires alpha > 0");
      }
      if (beta != 0.0) {
        throw std::invalid_argument(std::string(kernel_kind_name(kind)) +
                                    " kernel takes no beta");
      }
      break;
    case KernelKind::Exp:
      if (!(alpha > 0.0)) {
        throw std::invalid_argument("exp kernel requires alpha > 0");
      }
      if (!(beta >= 0.0)) {
        throw std::invalid_argument("exp kernel requires beta >= 0");
      }
      break;
  }
}

std::string KernelSpec::to_record() const {
  return "kind=" + std::string(kernel_kind_name(kind)) +
         " alpha=" + detail::format_real(alpha) +
         " beta=" + detail::format_real(beta) +
         " weight_scheme=" + weight_scheme_name(weight_scheme);
}

KernelSpec KernelSpec::from_record(std::string_view record) {
  bool have_kind = false;
  KernelKind kind = KernelKind::ConstantOne;
  WeightScheme scheme = WeightScheme::OccStyle;
  double alpha = -1.0, beta = -1.0;
  bool have_alpha = false, have_beta = false;

  for (const auto token : detail::split_ws(record)) {
    const auto [key, value] = detail::split_kv(token, "kernel record");
    if (key == "kind") {
      kind = kernel_kind_from_name(value);
      have_kind = true;
    } else if (key == "alpha") {
      alpha = detail::parse_real(value, "kernel record alpha");
      have_alpha = true;
    } else if (key == "beta") {
      beta = detail::parse_real(value, "kernel record beta");
      have_beta = true;
    } else if (key == "weight_scheme") {
      scheme = weight_scheme_from_name(value);
    } else {
      throw ParseError("kernel record: unknown field '" + std::string(key) +
                       "'");
    }
  }
  if (!have_kind) throw ParseError("kernel record: missing 'kind'");

  KernelSpec spec = with_defaults(kind, scheme);
  if (have_alpha) spec.alpha = alpha;
  if (have_beta) spec.beta = beta;
  spec.validate();
  return spec;
}

KernelSpec KernelSpec::with_defaults(KernelKind kind, WeightScheme scheme) {
  KernelSpec spec;
  spec.kind = kind;
  spec.weight_scheme = scheme;
  switch (kind) {
    case KernelKind::Log: spec.alpha = 3.0; break;
    case KernelKind::Exp: spec.alpha = 1.0; spec.beta = 3.0; break;
    case KernelKind::Gaussian: spec.alpha = 0.5; break;
    case KernelKind::Linear:
    case KernelKind::ConstantOne: break;
  }
  return spec;
}

double kernel_linear(ClassDistance d) {
  check_distance(d);
  const double v = 1.0 - std::abs(static_cast<double>(d.x)) / d.n_classes;
  return std::max(0.0, v);
}

double kernel_log(ClassDistance d, double alpha) {
  check_distance(d);
  if (d.n_classes < 2) {
    throw std::invalid_argument("log kernel requires n_classes >= 2");
  }
  if (!(alpha > 0.0)) {
    throw std::invalid_argument("log kernel requires alpha > 0");
  }
  const double v = 1.0 - alpha *
                             std::log1p(std::abs(static_cast<double>(d.x))) /
                             std::log(static_cast<double>(d.n_classes));
  return std::max(0.0, v);
}

double kernel_exp(ClassDistance d, double alpha, double beta) {
  check_distance(d);
  if (!(alpha > 0.0)) {
    throw std::invalid_argument("exp kernel requires alpha > 0");
  }
  const double f = alpha * logistic(beta - std::abs(static_cast<double>(d.x)));
  return std::max(0.0, f);
}

double kernel_gaussian(ClassDistance d, double alpha) {
  check_distance(d);
  if (!(alpha > 0.0)) {
    throw std::invalid_argument("gaussian kernel requires alpha > 0");
  }
  const double t = static_cast<double>(d.x) / alpha;
  return std::max(0.0, std::exp(-t * t));
}

double occ_distance_weight(int y_true_index, int y_pred_index, int n_classes) {
  if (n_classes < 2) {
    throw std::invalid_argument("occ distance weight requires K >= 2");
  }
  if (y_true_index < 0 || y_true_index >= n_classes || y_pred_index < 0 ||
      y_pred_index >= n_classes) {
    throw std::invalid_argument("occ distance weight: index out of range");
  }
  return std::abs(static_cast<double>(y_true_index) - y_pred_index) /
         (n_classes - 1);
}

double kernel_eval(const KernelSpec& spec, ClassDistance d) {
  spec.validate();
  switch (spec.kind) {
    case KernelKind::Linear: return kernel_linear(d);
    case KernelKind::Log: return kernel_log(d, spec.alpha);
    case KernelKind::Exp: return kernel_exp(d, spec.alpha, spec.beta);
    case KernelKind::Gaussian: return kernel_gaussian(d, spec.alpha);
    case KernelKind::ConstantOne:
      check_distance(d);
      return 1.0;
  }
  throw std::invalid_argument("unknown kernel kind");
}

}  // namespace kwocce
