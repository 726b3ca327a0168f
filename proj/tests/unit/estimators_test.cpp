#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "efdiv/closed_form.hpp"
#include "efdiv/density.hpp"
#include "efdiv/errors.hpp"
#include "efdiv/estimators.hpp"
#include "efdiv/generator.hpp"
#include "support/brute_force.hpp"

namespace efdiv {
namespace {

using testing::relative_error;
using testing::Uniform;

constexpr double kKl0603 = 0.11588830833596718565;

NaturalParam rate(double r) { return to_natural(make_poisson(), PoissonRate{r}); }

TEST(Density, PoissonLogPmfMatchesRecurrence) {
  const auto table = testing::poisson_pmf_table(3.7L, 120);
  for (std::uint64_t x : {0u, 1u, 5u, 30u, 120u}) {
    EXPECT_LE(relative_error(poisson_log_pmf(x, std::log(3.7)), static_cast<double>(std::log(table[x]))), 1e-13);
  }
}

TEST(Density, GaussianLogPdf) {
  const std::vector<double> x{0.5, -1.0};
  const std::vector<double> mean{0.0, 1.0};
  const double expected = std::log(testing::normal_pdf(0.5, 0.0) * testing::normal_pdf(-1.0, 1.0));
  EXPECT_NEAR(gaussian_log_pdf(x, mean), expected, 1e-14);
}

TEST(Density, LogRatioSkipsTheCarrier) {
  const auto f = make_poisson();
  for (std::uint64_t x : {0u, 3u, 400u}) {
    const double direct = poisson_log_pmf(x, std::log(0.6)) - poisson_log_pmf(x, std::log(0.3));
    EXPECT_NEAR(log_density_ratio(f, rate(0.6), rate(0.3), x), direct, 1e-12 * std::max(1.0, std::abs(direct)));
  }
  const auto g = make_iso_gaussian(2);
  const std::vector<double> point{0.3, -0.4};
  const double direct = gaussian_log_pdf(point, std::vector<double>{1.0, 0.0}) -
                        gaussian_log_pdf(point, std::vector<double>{0.0, 2.0});
  EXPECT_NEAR(log_density_ratio(g, NaturalParam{1.0, 0.0}, NaturalParam{0.0, 2.0}, point), direct, 1e-14);
}

TEST(Density, PoissonSupportBoundsTheTail) {
  const std::vector<double> rates{0.6, 0.3};
  const auto support = poisson_support(rates);
  EXPECT_LE(support.tail_mass, 1e-16);
  // The bound is conservative: compare with the true tail by long double summation.
  for (double r : rates) {
    const auto table = testing::poisson_pmf_table(r, static_cast<int>(support.x_max) + 60);
    long double tail = 0.0L;
    for (std::size_t x = support.x_max + 1; x < table.size(); ++x) tail += table[x];
    EXPECT_LE(static_cast<double>(tail), support.tail_mass);
  }
  EXPECT_GE(poisson_tail_bound(rates, support.x_max - 1), 1e-16);
}

TEST(MonteCarlo, KlAtPointSixPointThree) {
  const auto r = mc_fdiv(make_generator("kl"), make_poisson(), rate(0.6), rate(0.3), 1'000'000, 7);
  ASSERT_TRUE(r.std_error.has_value());
  EXPECT_GT(*r.std_error, 0.0);
  EXPECT_LE(std::abs(r.value - kKl0603), 4.0 * *r.std_error);
  // The single printed realization 0.1156 is plausible at the same scale.
  EXPECT_LE(std::abs(0.1156 - kKl0603), 4.0 * *r.std_error);
  EXPECT_EQ(r.n, 1'000'000u);
  EXPECT_EQ(r.skipped, 0u);
}

TEST(MonteCarlo, IdenticalArgumentsGiveExactZero) {
  for (const char* name : {"kl", "pearson", "js", "tv", "hellinger"}) {
    const auto r = mc_fdiv(make_generator(name), make_poisson(), rate(2.0), rate(2.0), 10'000, 1);
    EXPECT_EQ(r.value, 0.0) << name;
    EXPECT_EQ(*r.std_error, 0.0) << name;
  }
  const auto g = mc_fdiv(make_generator("kl"), make_iso_gaussian(2), NaturalParam{1.0, 2.0}, NaturalParam{1.0, 2.0},
                         10'000, 1);
  EXPECT_EQ(g.value, 0.0);
}

TEST(MonteCarlo, PearsonAgainstClosedForm) {
  const auto r = mc_fdiv(make_generator("pearson"), make_poisson(), rate(1.0), rate(2.0), 1'000'000, 3);
  EXPECT_LE(std::abs(r.value - (std::exp(1.0) - 1.0)), 4.0 * *r.std_error);
}

TEST(MonteCarlo, GaussianKl) {
  const auto g = make_iso_gaussian(3);
  const NaturalParam a{0.0, 0.5, -0.5};
  const NaturalParam b{0.3, 0.1, 0.0};
  const auto r = mc_fdiv(make_generator("kl"), g, a, b, 200'000, 11, {.workers = 3});
  EXPECT_LE(std::abs(r.value - kl_bregman(g, a, b).value), 4.0 * *r.std_error);
}

TEST(MonteCarlo, ErrorShrinksWithSampleSize) {
  const auto kl = make_generator("kl");
  const auto f = make_poisson();
  const std::vector<std::size_t> sizes{1'000, 10'000, 100'000, 1'000'000};
  std::vector<double> rms;
  for (std::size_t n : sizes) {
    double sq = 0.0;
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
      const double err = mc_fdiv(kl, f, rate(0.6), rate(0.3), n, 1000 + seed).value - kKl0603;
      sq += err * err;
    }
    rms.push_back(std::sqrt(sq / 8.0));
  }
  for (std::size_t i = 1; i < rms.size(); ++i) EXPECT_LT(rms[i], rms[i - 1]) << "n=" << sizes[i];
}

TEST(MonteCarlo, CoverageOverSeededTrials) {
  const auto kl = make_generator("kl");
  int inside = 0;
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const auto r = mc_fdiv(kl, make_poisson(), rate(0.6), rate(0.3), 100'000, 500 + seed);
    if (std::abs(r.value - kKl0603) <= 4.0 * *r.std_error) ++inside;
  }
  EXPECT_GE(inside, 38);
}

TEST(MonteCarlo, SeedDeterminism) {
  const auto kl = make_generator("kl");
  const auto f = make_poisson();
  const auto a = mc_fdiv(kl, f, rate(0.6), rate(0.3), 50'000, 42);
  const auto b = mc_fdiv(kl, f, rate(0.6), rate(0.3), 50'000, 42);
  EXPECT_EQ(a.value, b.value);
  EXPECT_EQ(*a.std_error, *b.std_error);
  const auto c = mc_fdiv(kl, f, rate(0.6), rate(0.3), 50'000, 43);
  EXPECT_NE(a.value, c.value);
  EXPECT_LE(std::abs(a.value - c.value), 6.0 * std::hypot(*a.std_error, *c.std_error));

  const auto w1 = mc_fdiv(kl, f, rate(0.6), rate(0.3), 50'001, 42, {.workers = 4});
  const auto w2 = mc_fdiv(kl, f, rate(0.6), rate(0.3), 50'001, 42, {.workers = 4});
  EXPECT_EQ(w1.value, w2.value);
}

TEST(MonteCarlo, Errors) {
  EXPECT_THROW((void)mc_fdiv(make_generator("kl"), make_poisson(), rate(1.0), rate(2.0), 0, 1), ArgumentError);
  EXPECT_THROW((void)mc_fdiv(make_generator("kl"), make_poisson(), rate(1.0), rate(2.0), 10, 1, {.workers = 0}),
               ArgumentError);
}

TEST(Oracle, Examples) {
  const auto f = make_poisson();
  const auto pearson = oracle_fdiv(make_generator("pearson"), f, rate(1.0), rate(2.0));
  EXPECT_LE(relative_error(pearson.value, std::exp(1.0) - 1.0), 1e-10);
  ASSERT_TRUE(pearson.tail_mass_dropped.has_value());
  EXPECT_LE(*pearson.tail_mass_dropped, 1e-15);
  EXPECT_EQ(oracle_fdiv(make_generator("tv"), f, rate(1.5), rate(1.5)).value, 0.0);
  EXPECT_LE(relative_error(oracle_fdiv(make_generator("js"), f, rate(5.0), rate(5.1)).value,
                           4.9493510091507874643e-4),
            1e-10);
  EXPECT_LE(relative_error(oracle_fdiv(make_generator("kl"), f, rate(0.6), rate(0.3)).value, kKl0603), 1e-10);
}

TEST(Oracle, ChiK) {
  const auto f = make_poisson();
  EXPECT_EQ(oracle_chi_k(f, rate(0.6), rate(0.3), 0, 1.0).value, 1.0);
  EXPECT_LE(std::abs(oracle_chi_k(f, rate(0.6), rate(0.3), 1, 1.0).value), 1e-12);
  EXPECT_LE(relative_error(oracle_chi_k(f, rate(0.6), rate(0.3), 2, 1.0).value,
                           chi_k_vajda(f, rate(0.6), rate(0.3), 2).value),
            1e-10);
  EXPECT_THROW((void)oracle_chi_k(f, rate(0.6), rate(0.3), -1, 1.0), ArgumentError);
}

TEST(Oracle, PoissonNormalization) {
  const auto r = oracle_integral(make_poisson(), rate(4.0), rate(9.0),
                                 [](double lp, double lq) { return std::exp(lp) + std::exp(lq); });
  EXPECT_GE(r.value, 2.0 - 2e-15);
  EXPECT_LE(r.value, 2.0 + 2e-15);
}

TEST(Oracle, GaussianAgainstClosedForms) {
  const auto g1 = make_iso_gaussian(1);
  EXPECT_LE(relative_error(oracle_fdiv(make_generator("kl"), g1, NaturalParam{0.0}, NaturalParam{2.0}).value, 2.0),
            1e-10);
  const auto g2 = make_iso_gaussian(2);
  const auto chi2 = oracle_fdiv(make_generator("pearson"), g2, NaturalParam{0.0, 0.0}, NaturalParam{1.0, 1.0});
  EXPECT_LE(relative_error(chi2.value, std::expm1(2.0)), 1e-10);
  ASSERT_TRUE(chi2.abs_error.has_value());
  EXPECT_TRUE(chi2.diagnostic.empty());
  const auto g3 = make_iso_gaussian(3);
  const NaturalParam a{0.1, -0.2, 0.3};
  const NaturalParam b{-0.1, 0.2, 0.0};
  EXPECT_LE(relative_error(oracle_fdiv(make_generator("kl"), g3, a, b).value, kl_bregman(g3, a, b).value), 1e-9);

  // Independent tensor Simpson on the Hellinger integrand in 2D.
  const double simpson = testing::simpson_2d(
      [](double x, double y) {
        const double p = testing::normal_pdf(x, 0.0) * testing::normal_pdf(y, 0.0);
        const double q = testing::normal_pdf(x, 1.0) * testing::normal_pdf(y, 1.0);
        const double d = std::sqrt(q) - std::sqrt(p);
        return d * d;
      },
      -12.0, 13.0, -12.0, 13.0, 800);
  const auto hel = oracle_fdiv(make_generator("hellinger"), g2, NaturalParam{0.0, 0.0}, NaturalParam{1.0, 1.0});
  EXPECT_LE(relative_error(hel.value, simpson), 1e-9);
  EXPECT_LE(relative_error(hel.value, 2.0 * (1.0 - integral_ipq(g2, NaturalParam{0.0, 0.0}, NaturalParam{1.0, 1.0}, 0.5))),
            1e-10);
}

TEST(Oracle, RejectsHighDimensionalGaussian) {
  const auto g4 = make_iso_gaussian(4);
  EXPECT_THROW((void)oracle_fdiv(make_generator("kl"), g4, NaturalParam{0.0, 0.0, 0.0, 0.0},
                                 NaturalParam{1.0, 0.0, 0.0, 0.0}),
               ArgumentError);
}

TEST(Oracle, SelfConsistency) {
  Uniform u(71);
  const auto f = make_poisson();
  for (int i = 0; i < 10; ++i) {
    const NaturalParam a{u(-2.0, 2.0)};
    const NaturalParam b{u(-2.0, 2.0)};
    for (const char* name : {"kl", "pearson", "js"}) {
      const auto gen = make_generator(name);
      const double base = oracle_fdiv(gen, f, a, b).value;
      const double wide = oracle_fdiv(gen, f, a, b, {.support_scale = 2.0}).value;
      EXPECT_LE(relative_error(wide, base), 1e-11) << name;
    }
  }
  const auto g = make_iso_gaussian(1);
  for (const char* name : {"kl", "pearson", "js"}) {
    const auto gen = make_generator(name);
    const double base = oracle_fdiv(gen, g, NaturalParam{0.2}, NaturalParam{-1.1}).value;
    const double tight =
        oracle_fdiv(gen, g, NaturalParam{0.2}, NaturalParam{-1.1}, {.quadrature_tol = 5e-13, .quadrature_rel_tol = 5e-14})
            .value;
    EXPECT_LE(relative_error(tight, base), 1e-11) << name;
  }
}

TEST(OracleEquivalence, PearsonOnRandomPairs) {
  Uniform u(73);
  const auto pearson = make_generator("pearson");
  for (int i = 0; i < 50; ++i) {
    const std::size_t d = static_cast<std::size_t>(i % 3);
    const auto f = d == 0 ? make_poisson() : make_iso_gaussian(d);
    std::vector<double> a(f.order());
    std::vector<double> b(f.order());
    for (std::size_t c = 0; c < f.order(); ++c) {
      a[c] = u(-2.0, 2.0) / std::sqrt(static_cast<double>(f.order()));
      b[c] = u(-2.0, 2.0) / std::sqrt(static_cast<double>(f.order()));
    }
    const auto oracle = oracle_fdiv(pearson, f, NaturalParam(a), NaturalParam(b));
    EXPECT_LE(relative_error(oracle.value, chi2_pearson(f, NaturalParam(a), NaturalParam(b)).value), 1e-9) << i;
  }
}

}  // namespace
}  // namespace efdiv
