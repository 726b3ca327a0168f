#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>

#include "efdiv/family.hpp"
#include "efdiv/generator.hpp"

namespace efdiv {

struct EstimateResult {
  double value = 0.0;
  /// Sample count (Monte Carlo), summed support points (Poisson oracle) or
  /// integrand evaluations (Gaussian oracle).
  std::size_t n = 0;
  std::optional<double> std_error;
  /// Probability mass of both distributions beyond the summed support.
  std::optional<double> tail_mass_dropped;
  /// Error estimate of the Gaussian quadrature.
  std::optional<double> abs_error;
  /// Monte Carlo summands dropped because the density ratio was not finite.
  std::size_t skipped = 0;
  std::string diagnostic;
};

struct MonteCarloOptions {
  std::size_t workers = 1;
  /// Skipped-summand fraction above which a diagnostic is attached.
  double skip_warning_fraction = 1e-6;
};

/// Symmetrized two-sample estimate
///   1/(2n) sum_i [ f(r(s_i)) + f(r(t_i)) / r(t_i) ],  r = x2 / x1,
/// with s_i ~ X1 and t_i ~ X2. Both halves are unbiased for I_f(X1 : X2).
/// std_error is the sample standard deviation of the 2n summands over
/// sqrt(2n). Bit-identical for a fixed (seed, workers) pair.
[[nodiscard]] EstimateResult mc_fdiv(const GeneratorSpec& gen, const FamilySpec& family,
                                     const NaturalParam& theta1, const NaturalParam& theta2, std::size_t n,
                                     std::uint64_t seed, const MonteCarloOptions& options = {});

struct OracleOptions {
  /// Upper tail mass allowed beyond the initial Poisson cut-off.
  double tail_mass = 1e-16;
  /// Multiplies the initial Poisson cut-off (self-consistency checks use 2).
  double support_scale = 1.0;
  /// Absolute tolerance of the Gaussian quadrature.
  double quadrature_tol = 1e-12;
  /// Relative tolerance of the Gaussian quadrature; keeps large integrals
  /// from chasing an absolute target below their roundoff level.
  double quadrature_rel_tol = 1e-13;
  /// Half-width added around the means to form the Gaussian integration box.
  double box_margin = 12.0;
};

inline constexpr std::size_t kMaxOracleGaussianDim = 3;

/// Integrand of the oracle, given log x1(x) and log x2(x).
using LogIntegrand = std::function<double(double log_x1, double log_x2)>;

/// Integral of integrand(log x1, log x2) against the reference measure.
///
/// Poisson: summation over 0..x_max. The cut-off starts where both pmfs have
/// tail mass below options.tail_mass and is extended until the summands
/// themselves have decayed, since integrands such as x2^2 / x1 are heavier
/// than either pmf.
/// Gaussian: adaptive quadrature over [min mean - margin, max mean + margin]
/// per coordinate, widened to cover `centres` (points where the integrand
/// mass concentrates away from both means); ArgumentError for dimension
/// above 3.
[[nodiscard]] EstimateResult oracle_integral(const FamilySpec& family, const NaturalParam& theta1,
                                             const NaturalParam& theta2, const LogIntegrand& integrand,
                                             const OracleOptions& options = {},
                                             std::span<const NaturalParam> centres = {});

/// Direct numerical evaluation of I_f(X1 : X2).
[[nodiscard]] EstimateResult oracle_fdiv(const GeneratorSpec& gen, const FamilySpec& family,
                                         const NaturalParam& theta1, const NaturalParam& theta2,
                                         const OracleOptions& options = {});

/// Direct numerical evaluation of the integral of (x2 - lambda x1)^k / x1^(k-1).
[[nodiscard]] EstimateResult oracle_chi_k(const FamilySpec& family, const NaturalParam& theta1,
                                          const NaturalParam& theta2, int k, double lambda,
                                          const OracleOptions& options = {});

}  // namespace efdiv
