#include "efdiv/taylor.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "efdiv/errors.hpp"
#include "efdiv/numerics.hpp"

namespace efdiv {

std::string_view to_string(SeriesStatus s) noexcept {
  switch (s) {
    case SeriesStatus::Fixed:
      return "fixed";
    case SeriesStatus::Converged:
      return "converged";
    case SeriesStatus::MaxOrderReached:
      return "max_order_reached";
    case SeriesStatus::Diverging:
      return "diverging";
  }
  return "unknown";
}

namespace {

void check_center(const GeneratorSpec& gen, double center) {
  if (!gen.has_derivatives()) throw DomainError(gen.name() + " is not analytic; no Taylor expansion exists");
  if (!gen.in_deriv_domain(center)) {
    throw DomainError("expansion centre " + std::to_string(center) + " is outside the derivative domain " +
                      gen.deriv_domain() + " of " + gen.name());
  }
}

// Appends term i of the expansion and its partial sum.
class SeriesBuilder {
 public:
  explicit SeriesBuilder(double center) { trace_.center = center; }

  void push(double term) {
    acc_.add(term);
    trace_.terms.push_back(term);
    trace_.partial_sums.push_back(acc_.value());
  }

  void truncate(int order) {
    trace_.terms.resize(static_cast<std::size_t>(order) + 1);
    trace_.partial_sums.resize(static_cast<std::size_t>(order) + 1);
  }

  [[nodiscard]] int last_order() const { return static_cast<int>(trace_.terms.size()) - 1; }
  [[nodiscard]] double partial() const { return acc_.value(); }
  SeriesTrace& trace() { return trace_; }

  SeriesResult finish(SeriesStatus status, std::string diagnostic = {}) {
    trace_.truncation_order = last_order();
    trace_.status = status;
    trace_.diagnostic = std::move(diagnostic);
    DivergenceResult r;
    r.value = trace_.partial_sums.empty() ? 0.0 : trace_.partial_sums.back();
    r.method = Method::Taylor;
    r.bound = trace_.remainder_bound;
    return {r, std::move(trace_)};
  }

 private:
  SeriesTrace trace_;
  CompensatedSum acc_;
};

double series_term(const GeneratorSpec& gen, const FamilySpec& family, const NaturalParam& theta1,
                   const NaturalParam& theta2, double center, int i, int k_max) {
  const double coefficient = gen.taylor_coefficient(i, center);
  if (coefficient == 0.0) return 0.0;
  return coefficient * chi_k_lambda(family, theta1, theta2, i, center, k_max);
}

}  // namespace

double remainder_bound(const GeneratorSpec& gen, int s, double m, double M) {
  if (s < 0) throw ArgumentError("truncation order must be non-negative");
  if (!(m > 0.0) || !(m <= M) || !std::isfinite(M)) throw ArgumentError("ratio bounds need 0 < m <= M < inf");
  if (!gen.has_derivatives()) throw DomainError(gen.name() + " has no derivatives");
  const double width = M - m;
  const double spread = int_pow(width, s);
  if (spread == 0.0) return 0.0;
  if (gen.is_polynomial() && s + 1 > (gen.kind() == GeneratorKind::PearsonChi2 ? 2 : gen.power())) return 0.0;
  return gen.sup_abs_deriv(s + 1, m, M) / factorial(s + 1) * spread;
}

SeriesResult taylor_fdiv(const GeneratorSpec& gen, const FamilySpec& family, const NaturalParam& theta1,
                         const NaturalParam& theta2, double center, int s, std::optional<RatioBounds> bounds,
                         int k_max) {
  check_center(gen, center);
  if (s < 0) throw ArgumentError("truncation order must be non-negative");
  if (s > k_max) {
    throw ArgumentError("truncation order " + std::to_string(s) + " exceeds k_max = " + std::to_string(k_max));
  }
  SeriesBuilder builder(center);
  for (int i = 0; i <= s; ++i) {
    const double term = series_term(gen, family, theta1, theta2, center, i, k_max);
    if (!std::isfinite(term)) {
      throw NumericalError("series term of order " + std::to_string(i) + " is not finite");
    }
    builder.push(term);
  }
  if (bounds) {
    if (center != 1.0) throw ArgumentError("the truncation bound applies to expansions about 1 only");
    builder.trace().remainder_bound = remainder_bound(gen, s, bounds->m, bounds->M);
  }
  return builder.finish(SeriesStatus::Fixed);
}

SeriesResult taylor_fdiv_auto(const GeneratorSpec& gen, const FamilySpec& family, const NaturalParam& theta1,
                              const NaturalParam& theta2, double center, double tol, int s_max) {
  check_center(gen, center);
  if (!(tol > 0.0)) throw ArgumentError("tolerance must be positive");
  if (s_max < 0) throw ArgumentError("s_max must be non-negative");
  if (s_max > kMaxExactBinomialOrder) {
    throw ArgumentError("s_max may not exceed " + std::to_string(kMaxExactBinomialOrder));
  }

  SeriesBuilder builder(center);
  bool previous_negligible = false;
  int growth_run = 0;
  int smallest_order = -1;
  double smallest_magnitude = 0.0;

  for (int i = 0; i <= s_max; ++i) {
    double term;
    try {
      term = series_term(gen, family, theta1, theta2, center, i, s_max);
    } catch (const NumericalError&) {
      term = std::numeric_limits<double>::quiet_NaN();  // chi^i itself overflowed
    }
    if (!std::isfinite(term)) {
      if (smallest_order >= 0) builder.truncate(smallest_order);
      return builder.finish(SeriesStatus::Diverging,
                            "term of order " + std::to_string(i) + " is not finite; kept orders up to the smallest term");
    }
    const double previous_magnitude = i > 0 ? std::abs(builder.trace().terms.back()) : 0.0;
    builder.push(term);
    if (i < 2) continue;

    const double magnitude = std::abs(term);
    if (smallest_order < 0 || magnitude < smallest_magnitude) {
      smallest_order = i;
      smallest_magnitude = magnitude;
    }

    const bool negligible = magnitude < tol * std::max(1.0, std::abs(builder.partial()));
    if (negligible && previous_negligible) {
      builder.truncate(i - 2);
      return builder.finish(SeriesStatus::Converged);
    }
    previous_negligible = negligible;

    growth_run = (i > 2 && magnitude > previous_magnitude) ? growth_run + 1 : 0;
    if (growth_run >= 3) {
      builder.truncate(smallest_order);
      return builder.finish(SeriesStatus::Diverging, "term magnitudes grew for 3 consecutive orders up to order " +
                                                         std::to_string(i) +
                                                         "; truncated at the smallest term");
    }
  }
  return builder.finish(SeriesStatus::MaxOrderReached,
                        "no convergence within s_max = " + std::to_string(s_max));
}

DivergenceResult second_order_approx(const GeneratorSpec& gen, const FamilySpec& family, const NaturalParam& theta1,
                                     const NaturalParam& theta2) {
  check_center(gen, 1.0);
  // The order-2 term of the expansion about 1 of x1 f(x2 / x1) integrates to
  // f''(1) / 2 times the integral of (x2 - x1)^2 / x1.
  const auto chi2 = chi2_pearson(family, theta1, theta2);
  DivergenceResult r;
  r.value = 0.5 * gen.deriv(2, 1.0) * chi2.value;
  r.method = Method::Taylor;
  return r;
}

SeriesResult kl_series(const FamilySpec& family, const NaturalParam& theta1, const NaturalParam& theta2, int s,
                       int k_max) {
  if (s < 2) throw ArgumentError("KL series needs s >= 2");
  if (s > k_max) {
    throw ArgumentError("truncation order " + std::to_string(s) + " exceeds k_max = " + std::to_string(k_max));
  }
  family.require_in_domain(theta1, "theta1");
  family.require_in_domain(theta2, "theta2");
  SeriesBuilder builder(1.0);
  builder.push(0.0);
  builder.push(0.0);
  for (int i = 2; i <= s; ++i) {
    const double sign = (i % 2 == 0) ? 1.0 : -1.0;
    const double term = sign / i * chi_k_vajda(family, theta1, theta2, i, k_max).value;
    if (!std::isfinite(term)) {
      throw NumericalError("series term of order " + std::to_string(i) + " is not finite");
    }
    builder.push(term);
  }
  return builder.finish(SeriesStatus::Fixed);
}

}  // namespace efdiv
