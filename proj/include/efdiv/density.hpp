#pragma once

#include <cstdint>
#include <span>

#include "efdiv/family.hpp"

namespace efdiv {

/// log p(x | theta) for the Poisson family: x theta - e^theta - log x!.
[[nodiscard]] double poisson_log_pmf(std::uint64_t x, double theta);

/// log p(x | theta) for the unit-variance isotropic Gaussian with mean theta.
[[nodiscard]] double gaussian_log_pdf(std::span<const double> x, std::span<const double> theta);

/// log(p(x | numer) / p(x | denom)) = <t(x), numer - denom> - F(numer) + F(denom).
/// The carrier term cancels, so the ratio never passes through an
/// underflowing density.
[[nodiscard]] double log_density_ratio(const FamilySpec& family, const NaturalParam& numer,
                                       const NaturalParam& denom, std::uint64_t count);
[[nodiscard]] double log_density_ratio(const FamilySpec& family, const NaturalParam& numer,
                                       const NaturalParam& denom, std::span<const double> point);

struct PoissonSupport {
  std::uint64_t x_max = 0;
  /// Upper bound on the total probability above x_max, summed over rates.
  double tail_mass = 0.0;
};

/// Smallest x_max >= max(rates) whose combined upper tail mass over all rates
/// is below `tail`, using P(X > x) <= p(x + 1) / (1 - rate / (x + 2)).
[[nodiscard]] PoissonSupport poisson_support(std::span<const double> rates, double tail = 1e-16);

/// The same tail bound evaluated at a given cut-off.
[[nodiscard]] double poisson_tail_bound(std::span<const double> rates, std::uint64_t x_max);

}  // namespace efdiv
