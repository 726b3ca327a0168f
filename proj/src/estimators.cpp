#include "efdiv/estimators.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <thread>
#include <vector>

#include "efdiv/density.hpp"
#include "efdiv/errors.hpp"
#include "efdiv/numerics.hpp"
#include "efdiv/quadrature.hpp"
#include "efdiv/sampling.hpp"

namespace efdiv {

namespace {

// Welford accumulator, mergeable with Chan's update.
struct Moments {
  double count = 0.0;
  double mean = 0.0;
  double m2 = 0.0;
  std::size_t skipped = 0;

  void add(double x) {
    count += 1.0;
    const double delta = x - mean;
    mean += delta / count;
    m2 += delta * (x - mean);
  }

  void merge(const Moments& other) {
    skipped += other.skipped;
    if (other.count == 0.0) return;
    if (count == 0.0) {
      const auto kept = skipped;
      *this = other;
      skipped = kept;
      return;
    }
    const double total = count + other.count;
    const double delta = other.mean - mean;
    mean += delta * other.count / total;
    m2 += other.m2 + delta * delta * count * other.count / total;
    count = total;
  }
};

constexpr std::uint64_t kStreamX1 = 0;
constexpr std::uint64_t kStreamX2 = 1;

Moments mc_worker(const GeneratorSpec& gen, const FamilySpec& family, const NaturalParam& theta1,
                  const NaturalParam& theta2, std::size_t count, std::uint64_t seed, std::size_t worker) {
  Sampler from_x1(family, theta1, derive_stream_seed(seed, kStreamX1, worker));
  Sampler from_x2(family, theta2, derive_stream_seed(seed, kStreamX2, worker));
  std::vector<double> point(family.order());
  Moments moments;

  const auto log_ratio_of = [&](Sampler& sampler) {
    if (family.kind() == FamilyKind::Poisson) {
      return log_density_ratio(family, theta2, theta1, sampler.next_count());
    }
    sampler.next_point(point);
    return log_density_ratio(family, theta2, theta1, point);
  };
  const auto push = [&](double summand) {
    if (std::isfinite(summand)) {
      moments.add(summand);
    } else {
      ++moments.skipped;
    }
  };

  for (std::size_t i = 0; i < count; ++i) {
    // f(r(s)) with s ~ X1, then f(r(t)) / r(t) with t ~ X2, both as
    // perspectives p f(q / p) in log space.
    const double lr_s = log_ratio_of(from_x1);
    push(gen.perspective(0.0, lr_s));
    const double lr_t = log_ratio_of(from_x2);
    push(gen.perspective(-lr_t, 0.0));
  }
  return moments;
}

EstimateResult oracle_poisson(const NaturalParam& theta1, const NaturalParam& theta2, const LogIntegrand& integrand,
                              const OracleOptions& options) {
  const double rates[2] = {std::exp(theta1[0]), std::exp(theta2[0])};
  const auto support = poisson_support(rates, options.tail_mass);
  const auto minimum_cutoff =
      static_cast<std::uint64_t>(std::ceil(static_cast<double>(support.x_max) * options.support_scale));
  constexpr std::uint64_t kHardCap = 10'000'000;
  constexpr double kNegligible = 1e-20;
  constexpr int kDecayRun = 4;

  CompensatedSum sum;
  double abs_sum = 0.0;
  double previous = std::numeric_limits<double>::infinity();
  int decaying = 0;
  std::uint64_t x = 0;
  for (;; ++x) {
    if (x > kHardCap) throw NumericalError("oracle summation did not settle within the hard support cap");
    const double term = integrand(poisson_log_pmf(x, theta1[0]), poisson_log_pmf(x, theta2[0]));
    if (!std::isfinite(term)) {
      throw NumericalError("oracle summand at x = " + std::to_string(x) + " is not finite");
    }
    sum.add(term);
    abs_sum += std::abs(term);
    const double magnitude = std::abs(term);
    decaying = (magnitude <= previous && magnitude <= kNegligible * abs_sum) ? decaying + 1 : 0;
    previous = magnitude;
    if (x >= minimum_cutoff && decaying >= kDecayRun) break;
  }

  EstimateResult out;
  out.value = sum.value();
  out.n = static_cast<std::size_t>(x + 1);
  out.tail_mass_dropped = poisson_tail_bound(rates, x);
  return out;
}

EstimateResult oracle_gaussian(const FamilySpec& family, const NaturalParam& theta1, const NaturalParam& theta2,
                               const LogIntegrand& integrand, const OracleOptions& options,
                               std::span<const NaturalParam> centres) {
  const std::size_t d = family.order();
  if (d > kMaxOracleGaussianDim) {
    throw ArgumentError("gaussian oracle supports dimension <= 3 (got " + std::to_string(d) +
                        "); use the Monte Carlo estimator");
  }
  std::vector<double> lo(d);
  std::vector<double> hi(d);
  for (std::size_t i = 0; i < d; ++i) {
    lo[i] = std::min(theta1[i], theta2[i]);
    hi[i] = std::max(theta1[i], theta2[i]);
    for (const auto& c : centres) {
      lo[i] = std::min(lo[i], c[i]);
      hi[i] = std::max(hi[i], c[i]);
    }
    lo[i] -= options.box_margin;
    hi[i] += options.box_margin;
  }
  const auto mean1 = theta1.coords();
  const auto mean2 = theta2.coords();
  const auto q = integrate_box(
      [&](std::span<const double> x) {
        const double term = integrand(gaussian_log_pdf(x, mean1), gaussian_log_pdf(x, mean2));
        if (!std::isfinite(term)) throw NumericalError("oracle integrand is not finite");
        return term;
      },
      lo, hi, options.quadrature_tol, options.quadrature_rel_tol);

  EstimateResult out;
  out.value = q.value;
  out.n = q.evaluations;
  out.abs_error = q.abs_error;
  if (!q.tolerance_met) out.diagnostic = "quadrature tolerance not met";
  return out;
}

}  // namespace

EstimateResult mc_fdiv(const GeneratorSpec& gen, const FamilySpec& family, const NaturalParam& theta1,
                       const NaturalParam& theta2, std::size_t n, std::uint64_t seed,
                       const MonteCarloOptions& options) {
  if (n == 0) throw ArgumentError("sample size must be positive");
  if (options.workers == 0) throw ArgumentError("worker count must be positive");
  family.require_in_domain(theta1, "theta1");
  family.require_in_domain(theta2, "theta2");

  std::vector<Moments> partial(options.workers);
  const auto run = [&](std::size_t worker) {
    const auto range = worker_range(n, options.workers, worker);
    partial[worker] = mc_worker(gen, family, theta1, theta2, range.end - range.begin, seed, worker);
  };
  if (options.workers == 1) {
    run(0);
  } else {
    std::vector<std::jthread> threads;
    threads.reserve(options.workers);
    for (std::size_t w = 0; w < options.workers; ++w) threads.emplace_back(run, w);
  }

  Moments total;
  for (const auto& m : partial) total.merge(m);
  if (total.count == 0.0) throw NumericalError("every Monte Carlo summand had a non-finite density ratio");

  EstimateResult out;
  out.value = total.mean;
  out.n = n;
  out.skipped = total.skipped;
  const double variance = total.count > 1.0 ? total.m2 / (total.count - 1.0) : 0.0;
  out.std_error = std::sqrt(variance / total.count);
  const double skipped_fraction = static_cast<double>(total.skipped) / (2.0 * static_cast<double>(n));
  if (skipped_fraction > options.skip_warning_fraction) {
    out.diagnostic = std::to_string(total.skipped) + " of " + std::to_string(2 * n) +
                     " summands skipped (non-finite density ratio)";
  }
  return out;
}

EstimateResult oracle_integral(const FamilySpec& family, const NaturalParam& theta1, const NaturalParam& theta2,
                               const LogIntegrand& integrand, const OracleOptions& options,
                               std::span<const NaturalParam> centres) {
  family.require_in_domain(theta1, "theta1");
  family.require_in_domain(theta2, "theta2");
  for (const auto& c : centres) family.require_in_domain(c, "integrand centre");
  if (family.kind() == FamilyKind::Poisson) return oracle_poisson(theta1, theta2, integrand, options);
  return oracle_gaussian(family, theta1, theta2, integrand, options, centres);
}

EstimateResult oracle_fdiv(const GeneratorSpec& gen, const FamilySpec& family, const NaturalParam& theta1,
                           const NaturalParam& theta2, const OracleOptions& options) {
  // Chi-square type integrands peak at 2 theta2 - theta1 (or the mirror);
  // alpha outside (-1, 1) moves the mixture outside the segment.
  std::vector<NaturalParam> centres{affine_combination(2.0, theta2, -1.0, theta1),
                                    affine_combination(2.0, theta1, -1.0, theta2)};
  if (gen.kind() == GeneratorKind::Alpha) {
    const double p = 0.5 * (1.0 - gen.alpha());
    centres.push_back(affine_combination(p, theta1, 1.0 - p, theta2));
  }
  return oracle_integral(
      family, theta1, theta2, [&](double lp, double lq) { return gen.perspective(lp, lq); }, options, centres);
}

EstimateResult oracle_chi_k(const FamilySpec& family, const NaturalParam& theta1, const NaturalParam& theta2, int k,
                            double lambda, const OracleOptions& options) {
  if (k < 0) throw ArgumentError("chi order k must be non-negative");
  if (!std::isfinite(lambda)) throw ArgumentError("lambda must be finite");
  family.require_in_domain(theta1, "theta1");
  family.require_in_domain(theta2, "theta2");
  if (k == 0) {
    EstimateResult out;
    out.value = 1.0;
    return out;
  }
  const double log_abs_lambda = lambda != 0.0 ? std::log(std::abs(lambda)) : 0.0;
  return oracle_integral(
      family, theta1, theta2,
      [&](double lp, double lq) {
        // (q - lambda p)^k / p^(k-1) through log|q - lambda p|.
        double log_abs;
        bool negative = false;
        if (lambda > 0.0) {
          const double lp_scaled = lp + log_abs_lambda;
          log_abs = log_abs_diff_exp(lq, lp_scaled);
          negative = lq < lp_scaled;
        } else if (lambda == 0.0) {
          log_abs = lq;
        } else {
          log_abs = log_add_exp(lq, lp + log_abs_lambda);
        }
        if (log_abs == -std::numeric_limits<double>::infinity()) return 0.0;
        const double magnitude = std::exp(k * log_abs - (k - 1) * lp);
        return (negative && k % 2 == 1) ? -magnitude : magnitude;
      },
      options, std::array{affine_combination(static_cast<double>(k), theta2, 1.0 - k, theta1)});
}

}  // namespace efdiv
