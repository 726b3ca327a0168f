#pragma once

#include <optional>
#include <string_view>

#include "efdiv/family.hpp"

namespace efdiv {

enum class Method { ClosedForm, Bregman, Taylor, MonteCarlo, Oracle };

[[nodiscard]] std::string_view to_string(Method m) noexcept;

struct DivergenceResult {
  double value = 0.0;
  /// Exponent E with value = e^E - 1, when the divergence has that shape.
  /// Stays usable in log scale after `value` has overflowed.
  std::optional<double> log1p_form;
  Method method = Method::ClosedForm;
  /// Truncation error bound (Taylor results only).
  std::optional<double> bound;
};

/// Orders above this lose too many digits to cancellation in the alternating
/// binomial sum to be trusted; callers may raise it explicitly.
inline constexpr int kDefaultMaxChiOrder = 30;

/// Integral of x1^p x2^(1-p): exp(F(p t1 + q t2) - p F(t1) - q F(t2)).
[[nodiscard]] double integral_ipq(const FamilySpec& family, const NaturalParam& theta1,
                                  const NaturalParam& theta2, double p);

/// Pearson chi-square, integral of (x2 - x1)^2 / x1.
[[nodiscard]] DivergenceResult chi2_pearson(const FamilySpec& family, const NaturalParam& theta1,
                                            const NaturalParam& theta2);
/// Neyman chi-square, integral of (x1 - x2)^2 / x2. Same code path as Pearson
/// with the arguments swapped.
[[nodiscard]] DivergenceResult chi2_neyman(const FamilySpec& family, const NaturalParam& theta1,
                                           const NaturalParam& theta2);
[[nodiscard]] DivergenceResult chi2_symmetric(const FamilySpec& family, const NaturalParam& theta1,
                                              const NaturalParam& theta2);

/// Signed Pearson-Vajda chi^k, integral of (x2 - x1)^k / x1^(k-1), by binomial
/// expansion into integrals I_{1-j,j}. Negative values are possible for odd k.
[[nodiscard]] DivergenceResult chi_k_vajda(const FamilySpec& family, const NaturalParam& theta1,
                                           const NaturalParam& theta2, int k,
                                           int k_max = kDefaultMaxChiOrder);

/// Integral of (x2 - lambda x1)^k / x1^(k-1); equal to 1 for k = 0.
[[nodiscard]] double chi_k_lambda(const FamilySpec& family, const NaturalParam& theta1,
                                  const NaturalParam& theta2, int k, double lambda,
                                  int k_max = kDefaultMaxChiOrder);

/// KL(X1 : X2) = B_F(theta2 : theta1).
[[nodiscard]] DivergenceResult kl_bregman(const FamilySpec& family, const NaturalParam& theta1,
                                          const NaturalParam& theta2);

}  // namespace efdiv
