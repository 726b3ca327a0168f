#include "efdiv/density.hpp"

#include <cmath>
#include <numbers>

#include "efdiv/errors.hpp"

namespace efdiv {

double poisson_log_pmf(std::uint64_t x, double theta) {
  const double xd = static_cast<double>(x);
  return xd * theta - std::exp(theta) - std::lgamma(xd + 1.0);
}

double gaussian_log_pdf(std::span<const double> x, std::span<const double> theta) {
  if (x.size() != theta.size()) throw ArgumentError("gaussian point and mean differ in dimension");
  double sq = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = x[i] - theta[i];
    sq += d * d;
  }
  const double log_2pi = std::log(2.0 * std::numbers::pi);
  return -0.5 * static_cast<double>(x.size()) * log_2pi - 0.5 * sq;
}

double log_density_ratio(const FamilySpec& family, const NaturalParam& numer, const NaturalParam& denom,
                         std::uint64_t count) {
  if (family.kind() != FamilyKind::Poisson) throw ArgumentError("count observations need a poisson family");
  return static_cast<double>(count) * (numer[0] - denom[0]) - (std::exp(numer[0]) - std::exp(denom[0]));
}

double log_density_ratio(const FamilySpec& family, const NaturalParam& numer, const NaturalParam& denom,
                         std::span<const double> point) {
  if (family.kind() != FamilyKind::IsotropicGaussian) throw ArgumentError("point observations need a gaussian family");
  if (point.size() != family.order()) throw ArgumentError("observation dimension does not match the family");
  // -(|x - numer|^2 - |x - denom|^2) / 2, expanded per coordinate.
  double s = 0.0;
  for (std::size_t i = 0; i < point.size(); ++i) {
    const double a = point[i] - numer[i];
    const double b = point[i] - denom[i];
    s += (b - a) * (b + a);
  }
  return 0.5 * s;
}

double poisson_tail_bound(std::span<const double> rates, std::uint64_t x_max) {
  double total = 0.0;
  const double x = static_cast<double>(x_max);
  for (double rate : rates) {
    if (!(rate > 0.0)) throw DomainError("poisson rate must be positive");
    const double ratio = rate / (x + 2.0);
    if (ratio >= 1.0) return 1.0;
    total += std::exp(poisson_log_pmf(x_max + 1, std::log(rate))) / (1.0 - ratio);
  }
  return std::min(total, 1.0);
}

PoissonSupport poisson_support(std::span<const double> rates, double tail) {
  double max_rate = 0.0;
  for (double rate : rates) max_rate = std::max(max_rate, rate);
  auto x = static_cast<std::uint64_t>(std::ceil(max_rate));
  while (true) {
    const double bound = poisson_tail_bound(rates, x);
    if (bound < tail) return {x, bound};
    ++x;
  }
}

}  // namespace efdiv
