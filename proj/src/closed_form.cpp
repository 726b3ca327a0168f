#include "efdiv/closed_form.hpp"

#include <cmath>
#include <string>

#include "efdiv/errors.hpp"
#include "efdiv/numerics.hpp"

namespace efdiv {

std::string_view to_string(Method m) noexcept {
  switch (m) {
    case Method::ClosedForm:
      return "closed_form";
    case Method::Bregman:
      return "bregman";
    case Method::Taylor:
      return "taylor";
    case Method::MonteCarlo:
      return "monte_carlo";
    case Method::Oracle:
      return "oracle";
  }
  return "unknown";
}

namespace {

// Log of I_{p,1-p}, after checking the mixed parameter against the domain.
double log_ipq(const FamilySpec& family, const NaturalParam& theta1, const NaturalParam& theta2, double p) {
  family.require_in_domain(theta1, "theta1");
  family.require_in_domain(theta2, "theta2");
  family.require_in_domain(affine_combination(p, theta1, 1.0 - p, theta2), "mixed parameter p*theta1 + q*theta2");
  return family.skew_gap(theta1, theta2, p);
}

void check_order(int k, int k_max) {
  if (k < 0) throw ArgumentError("chi order k must be non-negative");
  if (k_max > kMaxExactBinomialOrder) {
    throw ArgumentError("k_max may not exceed " + std::to_string(kMaxExactBinomialOrder));
  }
  if (k > k_max) {
    throw ArgumentError("chi order " + std::to_string(k) + " exceeds k_max = " + std::to_string(k_max) +
                        " (cancellation guard)");
  }
}

}  // namespace

double integral_ipq(const FamilySpec& family, const NaturalParam& theta1, const NaturalParam& theta2, double p) {
  if (!std::isfinite(p)) throw ArgumentError("exponent p must be finite");
  return std::exp(log_ipq(family, theta1, theta2, p));
}

DivergenceResult chi2_pearson(const FamilySpec& family, const NaturalParam& theta1, const NaturalParam& theta2) {
  const double exponent = log_ipq(family, theta1, theta2, -1.0);
  return {.value = std::expm1(exponent), .log1p_form = exponent, .method = Method::ClosedForm, .bound = {}};
}

DivergenceResult chi2_neyman(const FamilySpec& family, const NaturalParam& theta1, const NaturalParam& theta2) {
  return chi2_pearson(family, theta2, theta1);
}

DivergenceResult chi2_symmetric(const FamilySpec& family, const NaturalParam& theta1, const NaturalParam& theta2) {
  const auto pearson = chi2_pearson(family, theta1, theta2);
  const auto neyman = chi2_neyman(family, theta1, theta2);
  // Adding in a fixed order keeps the result exactly symmetric under a swap.
  const double lo = std::min(pearson.value, neyman.value);
  const double hi = std::max(pearson.value, neyman.value);
  return {.value = lo + hi, .log1p_form = {}, .method = Method::ClosedForm, .bound = {}};
}

double chi_k_lambda(const FamilySpec& family, const NaturalParam& theta1, const NaturalParam& theta2, int k,
                    double lambda, int k_max) {
  check_order(k, k_max);
  if (!std::isfinite(lambda)) throw ArgumentError("expansion centre lambda must be finite");
  family.require_in_domain(theta1, "theta1");
  family.require_in_domain(theta2, "theta2");
  if (k == 0) return 1.0;

  // sum_j C(k,j) (-lambda)^(k-j) I_{1-j,j}. Writing I = 1 + (I - 1) splits off
  // sum_j C(k,j) (-lambda)^(k-j) = (1 - lambda)^k exactly, so the remaining
  // terms carry expm1 of the log-integrals and no spurious O(1) baseline.
  CompensatedSum acc;
  acc.add(int_pow(1.0 - lambda, k));
  for (int j = 0; j <= k; ++j) {
    const double coefficient = static_cast<double>(binomial(k, j)) * int_pow(-lambda, k - j);
    if (coefficient == 0.0) continue;
    const double gap = log_ipq(family, theta1, theta2, 1.0 - j);
    acc.add(coefficient * std::expm1(gap));
  }
  const double value = acc.value();
  if (std::isnan(value)) throw NumericalError("chi^k evaluation produced NaN (overflowing integrals)");
  return value;
}

DivergenceResult chi_k_vajda(const FamilySpec& family, const NaturalParam& theta1, const NaturalParam& theta2,
                             int k, int k_max) {
  return {.value = chi_k_lambda(family, theta1, theta2, k, 1.0, k_max),
          .log1p_form = {},
          .method = Method::ClosedForm,
          .bound = {}};
}

DivergenceResult kl_bregman(const FamilySpec& family, const NaturalParam& theta1, const NaturalParam& theta2) {
  family.require_in_domain(theta1, "theta1");
  family.require_in_domain(theta2, "theta2");
  return {.value = family.bregman(theta2, theta1), .log1p_form = {}, .method = Method::Bregman, .bound = {}};
}

}  // namespace efdiv
