#pragma once

#include <optional>
#include <string>
#include <vector>

#include "efdiv/closed_form.hpp"
#include "efdiv/family.hpp"
#include "efdiv/generator.hpp"

namespace efdiv {

enum class SeriesStatus {
  Fixed,            // truncated at the requested order
  Converged,        // two consecutive terms fell below the tolerance
  MaxOrderReached,  // s_max reached before convergence
  Diverging,        // term magnitudes grew for several consecutive orders
};

[[nodiscard]] std::string_view to_string(SeriesStatus s) noexcept;

/// Truncated power series sum_i f^(i)(center) / i! * chi^i_{center}.
struct SeriesTrace {
  double center = 1.0;
  std::vector<double> terms;
  std::vector<double> partial_sums;
  int truncation_order = 0;
  std::optional<double> remainder_bound;
  SeriesStatus status = SeriesStatus::Fixed;
  std::string diagnostic;
};

struct SeriesResult {
  DivergenceResult result;
  SeriesTrace trace;

  [[nodiscard]] bool converged() const noexcept {
    return trace.status == SeriesStatus::Fixed || trace.status == SeriesStatus::Converged;
  }
};

/// Caller-supplied bounds m <= x1 / x2 <= M on the density ratio. Needed for
/// the truncation bound; the library never infers them.
struct RatioBounds {
  double m = 0.0;
  double M = 0.0;
};

/// (1 / (s+1)!) sup_{[m,M]} |f^(s+1)| (M - m)^s.
[[nodiscard]] double remainder_bound(const GeneratorSpec& gen, int s, double m, double M);

/// I_f(X1 : X2) expanded around `center` and truncated after order s.
[[nodiscard]] SeriesResult taylor_fdiv(const GeneratorSpec& gen, const FamilySpec& family,
                                       const NaturalParam& theta1, const NaturalParam& theta2, double center,
                                       int s, std::optional<RatioBounds> bounds = std::nullopt,
                                       int k_max = kDefaultMaxChiOrder);

/// Grows the expansion order until two consecutive terms of order >= 2 are
/// both below tol * max(1, |partial sum|). The reported truncation order is
/// the last order before those two terms. Stops early with
/// SeriesStatus::Diverging if term magnitudes grow three orders in a row.
[[nodiscard]] SeriesResult taylor_fdiv_auto(const GeneratorSpec& gen, const FamilySpec& family,
                                            const NaturalParam& theta1, const NaturalParam& theta2,
                                            double center, double tol, int s_max = kDefaultMaxChiOrder);

/// f''(1) / 2 * chi^2(X1 : X2), the leading term of the expansion at 1.
[[nodiscard]] DivergenceResult second_order_approx(const GeneratorSpec& gen, const FamilySpec& family,
                                                   const NaturalParam& theta1, const NaturalParam& theta2);

/// KL(X1 : X2) ~ sum_{i=2}^s (-1)^i / i * chi^i(X1 : X2).
[[nodiscard]] SeriesResult kl_series(const FamilySpec& family, const NaturalParam& theta1,
                                     const NaturalParam& theta2, int s, int k_max = kDefaultMaxChiOrder);

}  // namespace efdiv
