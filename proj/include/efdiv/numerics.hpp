#pragma once

#include <cstdint>
#include <span>

namespace efdiv {

/// Neumaier's variant of Kahan summation. The running compensation also
/// captures the low-order bits lost when a new term is larger than the sum,
/// which is the common case in alternating binomial expansions.
class CompensatedSum {
 public:
  void add(double x) noexcept;
  CompensatedSum& operator+=(double x) noexcept {
    add(x);
    return *this;
  }
  [[nodiscard]] double value() const noexcept { return sum_ + compensation_; }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

[[nodiscard]] double compensated_sum(std::span<const double> xs) noexcept;

/// Largest n for which every C(n, j) fits in 64 bits.
inline constexpr int kMaxExactBinomialOrder = 62;

/// Exact binomial coefficient C(n, k); throws ArgumentError for n outside
/// [0, kMaxExactBinomialOrder] or k outside [0, n].
[[nodiscard]] std::uint64_t binomial(int n, int k);

/// e^x - 1 - x without cancellation for small |x|.
[[nodiscard]] double expm1_minus_x(double x) noexcept;

/// log(e^a + e^b).
[[nodiscard]] double log_add_exp(double a, double b) noexcept;

/// log|e^a - e^b|; -inf when a == b.
[[nodiscard]] double log_abs_diff_exp(double a, double b) noexcept;

[[nodiscard]] double factorial(int n) noexcept;

/// x (x - 1) ... (x - n + 1), with the empty product equal to 1.
[[nodiscard]] double falling_factorial(double x, int n) noexcept;

/// x^n by repeated squaring, exact for small integer bases.
[[nodiscard]] double int_pow(double x, int n) noexcept;

}  // namespace efdiv
