#include "efdiv/numerics.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "efdiv/errors.hpp"

namespace efdiv {

void CompensatedSum::add(double x) noexcept {
  const double t = sum_ + x;
  if (std::abs(sum_) >= std::abs(x)) {
    compensation_ += (sum_ - t) + x;
  } else {
    compensation_ += (x - t) + sum_;
  }
  sum_ = t;
}

double compensated_sum(std::span<const double> xs) noexcept {
  CompensatedSum acc;
  for (double x : xs) acc.add(x);
  return acc.value();
}

std::uint64_t binomial(int n, int k) {
  if (n < 0 || n > kMaxExactBinomialOrder) {
    throw ArgumentError("binomial order " + std::to_string(n) + " outside [0, " +
                        std::to_string(kMaxExactBinomialOrder) + "]");
  }
  if (k < 0 || k > n) {
    throw ArgumentError("binomial index " + std::to_string(k) + " outside [0, " +
                        std::to_string(n) + "]");
  }
  if (k > n - k) k = n - k;
  // C(n, i) = C(n, i - 1) * (n - i + 1) / i stays integral at every step; the
  // 128-bit intermediate keeps the product exact before the division.
  __extension__ using u128 = unsigned __int128;
  u128 c = 1;
  for (int i = 1; i <= k; ++i) {
    c = c * static_cast<unsigned>(n - k + i) / static_cast<unsigned>(i);
  }
  return static_cast<std::uint64_t>(c);
}

double expm1_minus_x(double x) noexcept {
  if (std::abs(x) >= 0.5) return std::expm1(x) - x;
  // x^2/2! + x^3/3! + ... ; the ratio of successive terms is x / (n + 1) <= 1/6.
  double term = 0.5 * x * x;
  double sum = term;
  for (int n = 3; n < 40; ++n) {
    term *= x / n;
    const double next = sum + term;
    if (next == sum) break;
    sum = next;
  }
  return sum;
}

double log_add_exp(double a, double b) noexcept {
  if (a < b) std::swap(a, b);
  if (b == -std::numeric_limits<double>::infinity()) return a;
  return a + std::log1p(std::exp(b - a));
}

double log_abs_diff_exp(double a, double b) noexcept {
  if (a < b) std::swap(a, b);
  if (a == b) return -std::numeric_limits<double>::infinity();
  if (b == -std::numeric_limits<double>::infinity()) return a;
  const double d = b - a;
  // log(1 - e^d), switching form around d = -log 2 to keep full precision.
  const double tail = d > -0.6931471805599453 ? std::log(-std::expm1(d)) : std::log1p(-std::exp(d));
  return a + tail;
}

double factorial(int n) noexcept {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

double falling_factorial(double x, int n) noexcept {
  double f = 1.0;
  for (int i = 0; i < n; ++i) f *= x - i;
  return f;
}

double int_pow(double x, int n) noexcept {
  if (n < 0) return 1.0 / int_pow(x, -n);
  double result = 1.0;
  while (n > 0) {
    if (n & 1) result *= x;
    x *= x;
    n >>= 1;
  }
  return result;
}

}  // namespace efdiv
