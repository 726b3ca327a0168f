#include <gtest/gtest.h>

#include <array>
#include <cmath>

#include "efdiv/closed_form.hpp"
#include "efdiv/errors.hpp"
#include "efdiv/estimators.hpp"
#include "efdiv/family.hpp"
#include "support/brute_force.hpp"

namespace efdiv {
namespace {

using testing::poisson_sum;
using testing::relative_error;
using testing::Uniform;

const double kE = std::exp(1.0);

NaturalParam rate(double r) { return to_natural(make_poisson(), PoissonRate{r}); }

// Reference values from 50-digit arithmetic.
constexpr std::array<double, 9> kVajda0603{
    0.16183424272828312262,  -0.030511313566648031796, 0.042785396570663082023,
    -0.021000537954242985836, 0.018324289056444901904,  -0.012624426604996004324,
    0.010085402590494547035,  -0.0077588781758502974746, 0.0062323114627526519579};

TEST(IntegralIpq, Examples) {
  const auto f = make_poisson();
  const auto g = make_iso_gaussian(2);
  EXPECT_EQ(integral_ipq(f, rate(0.7), rate(0.7), -3.0), 1.0);
  EXPECT_EQ(integral_ipq(g, NaturalParam{1.0, 2.0}, NaturalParam{1.0, 2.0}, -3.0), 1.0);
  EXPECT_LE(relative_error(integral_ipq(f, rate(1.0), rate(2.0), -1.0), kE), 1e-15);
  EXPECT_EQ(integral_ipq(f, rate(0.6), rate(0.3), 0.0), 1.0);
  EXPECT_EQ(integral_ipq(f, rate(0.6), rate(0.3), 1.0), 1.0);

  const auto bc = static_cast<double>(
      poisson_sum(0.6L, 0.3L, [](long double a, long double b) { return std::sqrt(a * b); }, 200));
  EXPECT_LE(relative_error(integral_ipq(f, rate(0.6), rate(0.3), 0.5), bc), 1e-10);
  EXPECT_LE(relative_error(integral_ipq(f, rate(0.6), rate(0.3), 0.5), 0.97459241499514540637), 1e-14);
}

TEST(Chi2, PearsonExamples) {
  const auto f = make_poisson();
  const auto r = chi2_pearson(f, rate(1.0), rate(2.0));
  EXPECT_LE(relative_error(r.value, kE - 1.0), 1e-12);
  EXPECT_EQ(r.method, Method::ClosedForm);
  ASSERT_TRUE(r.log1p_form.has_value());
  EXPECT_NEAR(*r.log1p_form, 1.0, 1e-15);
  EXPECT_EQ(chi2_pearson(f, rate(3.0), rate(3.0)).value, 0.0);

  const auto g = make_iso_gaussian(2);
  EXPECT_LE(relative_error(chi2_pearson(g, NaturalParam{0.0, 0.0}, NaturalParam{1.0, 1.0}).value,
                           std::expm1(2.0)),
            1e-15);
}

TEST(Chi2, GaussianMatchesOneDimensionalSimpson) {
  const auto g = make_iso_gaussian(1);
  const double m1 = 0.3;
  const double m2 = -0.8;
  const double direct = testing::simpson(
      [&](double x) {
        const double a = testing::normal_pdf(x, m1);
        const double b = testing::normal_pdf(x, m2);
        return (b - a) * (b - a) / a;
      },
      -20.0, 20.0, 20000);
  EXPECT_LE(relative_error(chi2_pearson(g, NaturalParam{m1}, NaturalParam{m2}).value, direct), 1e-9);
}

TEST(Chi2, NeymanIsPearsonSwapped) {
  const auto f = make_poisson();
  EXPECT_LE(relative_error(chi2_neyman(f, rate(2.0), rate(1.0)).value, kE - 1.0), 1e-12);
  EXPECT_EQ(chi2_neyman(f, rate(2.0), rate(2.0)).value, 0.0);
  Uniform u(17);
  for (int i = 0; i < 100; ++i) {
    const NaturalParam a{u(-3.0, 3.0)};
    const NaturalParam b{u(-3.0, 3.0)};
    EXPECT_EQ(chi2_neyman(f, a, b).value, chi2_pearson(f, b, a).value);
    EXPECT_EQ(chi2_neyman(f, a, b).log1p_form, chi2_pearson(f, b, a).log1p_form);
  }
}

TEST(Chi2, GaussianSymmetryOnRandomPairs) {
  Uniform u(23);
  for (int i = 0; i < 20; ++i) {
    const std::size_t d = 1 + static_cast<std::size_t>(i % 3);
    const auto g = make_iso_gaussian(d);
    std::vector<double> a(d);
    std::vector<double> b(d);
    double dist2 = 0.0;
    for (std::size_t c = 0; c < d; ++c) {
      a[c] = u(-2.0, 2.0);
      b[c] = u(-2.0, 2.0);
      dist2 += (b[c] - a[c]) * (b[c] - a[c]);
    }
    const double expected = std::expm1(dist2);
    EXPECT_LE(relative_error(chi2_pearson(g, NaturalParam(a), NaturalParam(b)).value, expected), 1e-14);
    EXPECT_LE(relative_error(chi2_neyman(g, NaturalParam(a), NaturalParam(b)).value, expected), 1e-14);
    EXPECT_LE(relative_error(kl_bregman(g, NaturalParam(a), NaturalParam(b)).value, 0.5 * dist2), 1e-14);
  }
}

TEST(Chi2, SymmetricSum) {
  const auto f = make_poisson();
  EXPECT_EQ(chi2_symmetric(f, rate(1.5), rate(1.5)).value, 0.0);
  const double neyman = static_cast<double>(
      poisson_sum(1.0L, 2.0L, [](long double a, long double b) { return (a - b) * (a - b) / b; }, 200));
  EXPECT_LE(relative_error(chi2_symmetric(f, rate(1.0), rate(2.0)).value, kE - 1.0 + neyman), 1e-12);
  Uniform u(29);
  for (int i = 0; i < 50; ++i) {
    const NaturalParam a{u(-2.0, 2.0)};
    const NaturalParam b{u(-2.0, 2.0)};
    EXPECT_EQ(chi2_symmetric(f, a, b).value, chi2_symmetric(f, b, a).value);
  }
}

TEST(Chi2, LargeSeparationKeepsExponent) {
  const auto g = make_iso_gaussian(1);
  const auto r = chi2_pearson(g, NaturalParam{0.0}, NaturalParam{40.0});
  EXPECT_TRUE(std::isinf(r.value));
  ASSERT_TRUE(r.log1p_form.has_value());
  EXPECT_EQ(*r.log1p_form, 1600.0);
}

TEST(ChiK, VajdaSequenceAtPointSixPointThree) {
  const auto f = make_poisson();
  for (int k = 2; k <= 10; ++k) {
    const double v = chi_k_vajda(f, rate(0.6), rate(0.3), k).value;
    EXPECT_LE(relative_error(v, kVajda0603[static_cast<std::size_t>(k - 2)]), 1e-10) << "k = " << k;
    // Signs alternate for this pair.
    EXPECT_EQ(v > 0.0, k % 2 == 0) << "k = " << k;
    const double oracle = oracle_chi_k(f, rate(0.6), rate(0.3), k, 1.0).value;
    EXPECT_LE(relative_error(v, oracle), 1e-9) << "k = " << k;
  }
}

TEST(ChiK, SmallOrdersAndIdenticalArguments) {
  const auto f = make_poisson();
  EXPECT_EQ(chi_k_vajda(f, rate(0.6), rate(0.3), 0).value, 1.0);
  EXPECT_LE(relative_error(chi_k_vajda(f, rate(1.0), rate(2.0), 2).value, chi2_pearson(f, rate(1.0), rate(2.0)).value),
            1e-12);
  Uniform u(31);
  for (int i = 0; i < 50; ++i) {
    const NaturalParam a{u(-2.0, 2.0)};
    const NaturalParam b{u(-2.0, 2.0)};
    EXPECT_LE(std::abs(chi_k_vajda(f, a, b, 1).value), 1e-12 * std::max(1.0, chi2_pearson(f, a, b).value));
    for (int k = 1; k <= 12; ++k) EXPECT_EQ(chi_k_vajda(f, a, a, k).value, 0.0);
  }
  const auto g = make_iso_gaussian(2);
  EXPECT_LE(std::abs(chi_k_vajda(g, NaturalParam{0.1, 0.2}, NaturalParam{-0.3, 0.4}, 1).value), 1e-12);
}

TEST(ChiK, OverflowIsReportedNotReturned) {
  // I_{1-k,k} = exp(e^{k t2 - (k-1) t1} - ...) leaves double range here.
  EXPECT_THROW((void)chi_k_vajda(make_poisson(), NaturalParam{-1.0}, NaturalParam{1.0}, 6), NumericalError);
}

TEST(ChiK, OrderGuard) {
  const auto f = make_poisson();
  EXPECT_THROW((void)chi_k_vajda(f, rate(0.6), rate(0.3), 31), ArgumentError);
  EXPECT_NO_THROW((void)chi_k_vajda(f, rate(0.6), rate(0.3), 31, 40));
  EXPECT_THROW((void)chi_k_vajda(f, rate(0.6), rate(0.3), 63, 63), ArgumentError);
  EXPECT_THROW((void)chi_k_vajda(f, rate(0.6), rate(0.3), -1), ArgumentError);
}

TEST(ChiKLambda, ReducesToVajdaAtOne) {
  const auto f = make_poisson();
  Uniform u(37);
  for (int i = 0; i < 20; ++i) {
    const NaturalParam a{u(-0.5, 0.5)};
    const NaturalParam b{u(-0.5, 0.5)};
    for (int k = 2; k <= 6; ++k) {
      const double v = chi_k_vajda(f, a, b, k).value;
      EXPECT_LE(std::abs(chi_k_lambda(f, a, b, k, 1.0) - v), 1e-12 * std::max(std::abs(v), 1e-300) + 1e-300);
    }
  }
  EXPECT_EQ(chi_k_lambda(f, rate(0.6), rate(0.3), 0, 0.3), 1.0);
}

TEST(ChiKLambda, LambdaZeroIsSingleIntegral) {
  const auto f = make_poisson();
  for (int i = 1; i <= 6; ++i) {
    const double ipq = integral_ipq(f, rate(0.6), rate(0.3), 1.0 - i);
    EXPECT_LE(relative_error(chi_k_lambda(f, rate(0.6), rate(0.3), i, 0.0), ipq), 1e-14);
  }
}

TEST(ChiKLambda, HalfLambdaCubeMatchesSummation) {
  const auto f = make_poisson();
  const double direct = static_cast<double>(poisson_sum(
      0.6L, 0.3L, [](long double a, long double b) { return std::pow(b - 0.5L * a, 3) / (a * a); }, 200));
  const double v = chi_k_lambda(f, rate(0.6), rate(0.3), 3, 0.5);
  EXPECT_LE(relative_error(v, direct), 1e-9);
  EXPECT_LE(relative_error(v, 0.33724005052577665213), 1e-12);
}

TEST(Kl, BregmanExamples) {
  const auto f = make_poisson();
  const auto r = kl_bregman(f, rate(0.6), rate(0.3));
  EXPECT_EQ(r.method, Method::Bregman);
  EXPECT_NEAR(r.value, 0.1158, 1e-4);
  EXPECT_LE(relative_error(r.value, 0.11588830833596718565), 1e-14);
  EXPECT_EQ(kl_bregman(f, rate(0.6), rate(0.6)).value, 0.0);
  EXPECT_EQ(kl_bregman(make_iso_gaussian(1), NaturalParam{0.0}, NaturalParam{2.0}).value, 2.0);

  const double direct = static_cast<double>(
      poisson_sum(0.6L, 0.3L, [](long double a, long double b) { return a * std::log(a / b); }, 200));
  EXPECT_LE(relative_error(r.value, direct), 1e-12);
}

TEST(Kl, GaussianQuadratureCrossCheck) {
  const double direct = testing::simpson(
      [](double x) {
        const double a = testing::normal_pdf(x, 0.0);
        return a * (0.5 * (x - 2.0) * (x - 2.0) - 0.5 * x * x);
      },
      -20.0, 20.0, 20000);
  EXPECT_LE(relative_error(direct, 2.0), 1e-10);
}

// Every closed form against independent long double summation.
TEST(OracleEquivalence, PoissonRandomPairs) {
  const auto f = make_poisson();
  Uniform u(41);
  for (int i = 0; i < 50; ++i) {
    const double t1 = u(-2.0, 2.0);
    const double t2 = u(-2.0, 2.0);
    const long double r1 = std::exp(static_cast<long double>(t1));
    const long double r2 = std::exp(static_cast<long double>(t2));
    const NaturalParam a{t1};
    const NaturalParam b{t2};
    const int x_max = 1000;

    const double pearson = static_cast<double>(
        poisson_sum(r1, r2, [](long double p, long double q) { return (q - p) * (q - p) / p; }, x_max));
    const double neyman = static_cast<double>(
        poisson_sum(r1, r2, [](long double p, long double q) { return (p - q) * (p - q) / q; }, x_max));
    const double kl = static_cast<double>(
        poisson_sum(r1, r2, [](long double p, long double q) { return p * std::log(p / q); }, x_max));
    const double p = u(-1.0, 2.0);
    const long double lp = p;
    const double ipq = static_cast<double>(poisson_sum(
        r1, r2, [lp](long double x, long double y) { return std::pow(x, lp) * std::pow(y, 1.0L - lp); }, x_max));

    EXPECT_LE(relative_error(chi2_pearson(f, a, b).value, pearson), 1e-9) << t1 << " " << t2;
    EXPECT_LE(relative_error(chi2_neyman(f, a, b).value, neyman), 1e-9) << t1 << " " << t2;
    EXPECT_LE(relative_error(chi2_symmetric(f, a, b).value, pearson + neyman), 1e-9) << t1 << " " << t2;
    EXPECT_LE(relative_error(kl_bregman(f, a, b).value, kl), 1e-9) << t1 << " " << t2;
    EXPECT_LE(relative_error(integral_ipq(f, a, b, p), ipq), 1e-9) << t1 << " " << t2 << " " << p;
  }
}

TEST(OracleEquivalence, PoissonHigherOrders) {
  const auto f = make_poisson();
  Uniform u(43);
  for (int i = 0; i < 50; ++i) {
    const double t1 = u(-0.5, 0.5);
    const double t2 = u(-0.5, 0.5);
    const long double r1 = std::exp(static_cast<long double>(t1));
    const long double r2 = std::exp(static_cast<long double>(t2));
    const int k = 3 + i % 3;
    const long double lambda = (i % 2 == 0) ? 1.0L : 0.5L;
    const double direct = static_cast<double>(poisson_sum(
        r1, r2, [k, lambda](long double p, long double q) { return p * std::pow(q / p - lambda, k); },
        1000));
    const double v = chi_k_lambda(f, NaturalParam{t1}, NaturalParam{t2}, k, static_cast<double>(lambda));
    // Odd orders can cancel to nearly zero; scale by the absolute integral.
    const double scale = static_cast<double>(poisson_sum(
        r1, r2,
        [k, lambda](long double p, long double q) { return p * std::abs(std::pow(q / p - lambda, k)); },
        1000));
    EXPECT_LE(std::abs(v - direct), 1e-9 * scale) << t1 << " " << t2 << " k=" << k;
  }
}

TEST(OracleEquivalence, GaussianRandomPairs) {
  Uniform u(47);
  for (int i = 0; i < 50; ++i) {
    const std::size_t d = 1 + static_cast<std::size_t>(i % 2);
    const auto g = make_iso_gaussian(d);
    std::vector<double> a(d);
    std::vector<double> b(d);
    for (std::size_t c = 0; c < d; ++c) {
      a[c] = u(-2.0, 2.0) / static_cast<double>(d);
      b[c] = u(-2.0, 2.0) / static_cast<double>(d);
    }
    const NaturalParam t1(a);
    const NaturalParam t2(b);
    const auto chi2 = oracle_chi_k(g, t1, t2, 2, 1.0);
    EXPECT_LE(relative_error(chi2_pearson(g, t1, t2).value, chi2.value), 1e-9);
    const auto chi3 = oracle_chi_k(g, t1, t2, 3, 0.5);
    EXPECT_LE(relative_error(chi_k_lambda(g, t1, t2, 3, 0.5), chi3.value), 1e-9)
        << d << " " << a[0] << " " << b[0] << " " << chi3.value << " " << chi_k_lambda(g, t1, t2, 3, 0.5);
  }
}

TEST(SecondOrder, PearsonTracksTwiceKlForClosePairs) {
  const auto f = make_poisson();
  Uniform u(53);
  for (int i = 0; i < 50; ++i) {
    const double r1 = std::exp(u(-2.0, 3.0));
    const double r2 = r1 * (1.0 + u(-0.02, 0.02));
    const double chi2 = chi2_pearson(f, rate(r1), rate(r2)).value;
    const double kl = kl_bregman(f, rate(r1), rate(r2)).value;
    EXPECT_LE(relative_error(chi2, 2.0 * kl), 0.05) << r1 << " " << r2;
  }
}

TEST(Results, NonNegativeAndLogFormConsistent) {
  Uniform u(59);
  const auto f = make_poisson();
  for (int i = 0; i < 100; ++i) {
    const NaturalParam a{u(-2.0, 2.0)};
    const NaturalParam b{u(-2.0, 2.0)};
    const auto r = chi2_pearson(f, a, b);
    EXPECT_GE(r.value, -1e-12);
    EXPECT_GE(kl_bregman(f, a, b).value, -1e-12);
    const NaturalParam near_a{a[0] / 3.0};
    const NaturalParam near_b{b[0] / 3.0};
    EXPECT_GE(chi_k_vajda(f, near_a, near_b, 4).value, -1e-12);
    EXPECT_LE(relative_error(r.value, std::expm1(*r.log1p_form)), 1e-15);
  }
}

TEST(Method, Names) {
  EXPECT_EQ(to_string(Method::ClosedForm), "closed_form");
  EXPECT_EQ(to_string(Method::MonteCarlo), "monte_carlo");
}

}  // namespace
}  // namespace efdiv
