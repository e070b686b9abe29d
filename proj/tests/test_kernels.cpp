#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "kwocce/kernels.hpp"

using namespace kwocce;

namespace {

// Independent one-line reimplementations used as the brute-force oracle.
double oracle_linear(int x, int n) { return std::max(0.0, 1.0 - std::abs(x) / double(n)); }
double oracle_log(int x, int n, double a) {
  return std::max(0.0, 1.0 - a * std::log(1.0 + std::abs(x)) / std::log(double(n)));
}
double oracle_exp(int x, double a, double b) {
  return std::max(0.0, a * (1.0 - 1.0 / (1.0 + std::exp(b - std::abs(x)))));
}
double oracle_gauss(int x, double a) {
  return std::max(0.0, std::exp(-(x / a) * (x / a)));
}

}  // namespace

TEST_CASE("linear kernel spot values") {
  CHECK(kernel_linear({0, 41}) == 1.0);
  CHECK(kernel_linear({20, 40}) == doctest::Approx(0.5).epsilon(1e-12));
  // max distance stays inside the distance invariant; the clip never engages
  CHECK(kernel_linear({40, 41}) == doctest::Approx(1.0 / 41.0).epsilon(1e-15));
  CHECK_THROWS_AS(kernel_linear({41, 41}), std::invalid_argument);
}

TEST_CASE("log kernel spot values") {
  CHECK(kernel_log({0, 41}, 3.0) == 1.0);
  CHECK(kernel_log({1, 41}, 3.0) == doctest::Approx(0.4401).epsilon(1e-4));
  CHECK(kernel_log({40, 41}, 3.0) == 0.0);  // pre-clip value is negative
  CHECK_THROWS_AS(kernel_log({0, 1}, 3.0), std::invalid_argument);
}

TEST_CASE("exp kernel spot values") {
  CHECK(kernel_exp({0, 41}, 1.0, 3.0) == doctest::Approx(0.95257).epsilon(1e-5));
  CHECK(kernel_exp({3, 41}, 1.0, 3.0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(kernel_exp({40, 41}, 1.0, 3.0) < 1e-15);
  CHECK(kernel_exp({40, 41}, 1.0, 3.0) > 0.0);  // stable logistic, no underflow to subnormal garbage
}

TEST_CASE("gaussian kernel spot values") {
  CHECK(kernel_gaussian({0, 41}, 0.5) == 1.0);
  CHECK(kernel_gaussian({1, 41}, 0.5) == doctest::Approx(0.018316).epsilon(1e-4));
  CHECK(kernel_gaussian({-1, 41}, 0.5) == kernel_gaussian({1, 41}, 0.5));
}

TEST_CASE("occ distance weight") {
  CHECK(occ_distance_weight(0, 0, 3) == 0.0);
  CHECK(occ_distance_weight(0, 2, 3) == 1.0);
  CHECK(occ_distance_weight(5, 7, 41) == doctest::Approx(0.05).epsilon(1e-15));
  CHECK_THROWS_AS(occ_distance_weight(0, 0, 1), std::invalid_argument);
  CHECK_THROWS_AS(occ_distance_weight(3, 0, 3), std::invalid_argument);
}

TEST_CASE("kernel_eval dispatch") {
  KernelSpec constant;  // defaults to constant-one
  CHECK(kernel_eval(constant, {17, 41}) == 1.0);
  CHECK(kernel_eval(KernelSpec::with_defaults(KernelKind::Linear), {0, 41}) == 1.0);
  CHECK(kernel_eval(KernelSpec::with_defaults(KernelKind::Gaussian), {1, 41}) ==
        doctest::Approx(0.018316).epsilon(1e-4));
}

TEST_CASE("brute-force table matches oracle for K=5, all 25 pairs") {
  const int k = 5;
  for (int t = 0; t < k; ++t) {
    for (int p = 0; p < k; ++p) {
      const ClassDistance d{p - t, k};
      CHECK(kernel_linear(d) == doctest::Approx(oracle_linear(p - t, k)).epsilon(1e-12));
      CHECK(kernel_log(d, 3.0) == doctest::Approx(oracle_log(p - t, k, 3.0)).epsilon(1e-12));
      CHECK(kernel_exp(d, 1.0, 3.0) == doctest::Approx(oracle_exp(p - t, 1.0, 3.0)).epsilon(1e-12));
      CHECK(kernel_gaussian(d, 0.5) == doctest::Approx(oracle_gauss(p - t, 0.5)).epsilon(1e-12));
    }
  }
}

TEST_CASE("kernel properties: normalization, symmetry, decay, range") {
  const KernelSpec specs[] = {
      KernelSpec::with_defaults(KernelKind::Linear),
      KernelSpec::with_defaults(KernelKind::Log),
      KernelSpec::with_defaults(KernelKind::Exp),
      KernelSpec::with_defaults(KernelKind::Gaussian),
      KernelSpec{},  // constant-one
  };
  for (const int k : {3, 41}) {
    for (const auto& spec : specs) {
      // value at zero distance
      const double at_zero = kernel_eval(spec, {0, k});
      if (spec.kind == KernelKind::Exp) {
        const double expected =
            spec.alpha * (1.0 - 1.0 / (1.0 + std::exp(spec.beta)));
        CHECK(at_zero == doctest::Approx(expected).epsilon(1e-15));
      } else {
        CHECK(at_zero == 1.0);
      }
      double prev = at_zero;
      for (int x = 0; x <= k - 1; ++x) {
        const double v = kernel_eval(spec, {x, k});
        CHECK(v == kernel_eval(spec, {-x, k}));  // symmetry
        CHECK(v >= 0.0);                         // range floor
        if (spec.kind == KernelKind::Exp) {
          CHECK(v <= spec.alpha);
        } else {
          CHECK(v <= 1.0);
        }
        if (x > 0) {
          CHECK(v <= prev);  // monotone decay
          if (spec.kind != KernelKind::ConstantOne && v > 0.0) {
            CHECK(v < prev);  // strict while the pre-clip value is positive
          }
          prev = v;
        }
      }
    }
  }
}

TEST_CASE("spec validation") {
  KernelSpec bad;
  bad.kind = KernelKind::Linear;
  bad.alpha = 1.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

  bad = KernelSpec{};
  bad.kind = KernelKind::Log;
  bad.alpha = 0.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

  bad = KernelSpec::with_defaults(KernelKind::Exp);
  bad.beta = -1.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

  CHECK_THROWS_AS(kernel_eval(KernelSpec{}, {5, 3}), std::invalid_argument);
}

TEST_CASE("record round-trip") {
  for (const auto kind : {KernelKind::Linear, KernelKind::Log, KernelKind::Exp,
                          KernelKind::Gaussian, KernelKind::ConstantOne}) {
    const KernelSpec spec =
        KernelSpec::with_defaults(kind, WeightScheme::Literal);
    const KernelSpec back = KernelSpec::from_record(spec.to_record());
    CHECK(back.kind == spec.kind);
    CHECK(back.alpha == spec.alpha);
    CHECK(back.beta == spec.beta);
    CHECK(back.weight_scheme == spec.weight_scheme);
  }
  // missing alpha falls back to the kind's documented default
  const KernelSpec parsed = KernelSpec::from_record("kind=log");
  CHECK(parsed.alpha == 3.0);
  CHECK_THROWS(KernelSpec::from_record("kind=log alpha=oops"));
  CHECK_THROWS(KernelSpec::from_record("alpha=3"));
  CHECK_THROWS(KernelSpec::from_record("kind=log frobnicate=1"));
}
