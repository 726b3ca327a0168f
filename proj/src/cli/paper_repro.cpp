#include <cmath>
#include <cstdio>
#include <random>

#include "efdiv/cli.hpp"
#include "efdiv/closed_form.hpp"
#include "efdiv/estimators.hpp"
#include "efdiv/taylor.hpp"

namespace efdiv::cli {

namespace {

std::string fmt(const char* pattern, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, pattern, x);
  return buf;
}

double relative_error(double value, double reference) { return std::abs(value - reference) / std::abs(reference); }

// One unit in the last printed digit of a decimal literal such as "-0.0077".
double last_digit_unit(const std::string& printed) {
  const auto dot = printed.find('.');
  if (dot == std::string::npos) return 1.0;
  return std::pow(10.0, -static_cast<double>(printed.size() - dot - 1));
}

struct PrintedValue {
  int order;
  const char* text;
};

}  // namespace

std::vector<ReproRow> paper_repro(std::uint64_t seed, std::size_t workers, std::size_t mc_runs) {
  std::vector<ReproRow> rows;
  const auto poisson = make_poisson();
  const auto rate = [&](double l) { return to_natural(poisson, PoissonRate{l}); };

  {
    const double v = chi2_pearson(poisson, rate(1.0), rate(2.0)).value;
    const double expected = std::expm1(1.0);
    rows.push_back({"chi2_pearson poisson(1:2)", "e-1 ~ 1.718", v, "rel 1e-12 vs e-1",
                    relative_error(v, expected) <= 1e-12});
  }

  const auto t1 = rate(0.6);
  const auto t2 = rate(0.3);
  constexpr PrintedValue kVajda[] = {{2, "0.16"},    {3, "-0.03"}, {4, "0.04"},    {5, "-0.02"}, {6, "0.018"},
                                     {7, "-0.013"}, {8, "0.01"},  {9, "-0.0077"}, {10, "0.006"}};
  for (const auto& [k, text] : kVajda) {
    const double v = chi_k_vajda(poisson, t1, t2, k).value;
    const double printed = std::stod(text);
    const double unit = last_digit_unit(text);
    rows.push_back({"chi^" + std::to_string(k) + " poisson(0.6:0.3)", text, v, "+-" + fmt("%g", unit),
                    std::abs(v - printed) <= unit * (1.0 + 1e-12)});
    const double oracle = oracle_chi_k(poisson, t1, t2, k, 1.0).value;
    rows.push_back({"chi^" + std::to_string(k) + " closed form vs oracle", "agreement", oracle, "rel 1e-9",
                    relative_error(v, oracle) <= 1e-9});
  }

  const auto kl_gen = make_generator(GeneratorKind::KullbackLeibler);
  const double kl = kl_bregman(poisson, t1, t2).value;
  rows.push_back({"kl bregman poisson(0.6:0.3)", "0.1158", kl, "+-1e-4", std::abs(kl - 0.1158) <= 1e-4});
  {
    const double oracle = oracle_fdiv(kl_gen, poisson, t1, t2).value;
    rows.push_back({"kl bregman vs oracle", "agreement", oracle, "rel 1e-10", relative_error(kl, oracle) <= 1e-10});
  }

  constexpr PrintedValue kPartialSums[] = {{2, "0.0809"}, {3, "0.0910"}, {4, "0.1017"}, {10, "0.1135"}, {15, "0.1150"}};
  const auto series = kl_series(poisson, t1, t2, 15);
  for (const auto& [s, text] : kPartialSums) {
    const double v = series.trace.partial_sums[static_cast<std::size_t>(s)];
    rows.push_back({"kl series s=" + std::to_string(s), text, v, "+-5e-4", std::abs(v - std::stod(text)) <= 5e-4});
  }

  {
    constexpr double kTarget = 0.11589;
    std::size_t inside = 0;
    EstimateResult first;
    for (std::size_t run = 0; run < mc_runs; ++run) {
      const auto e = mc_fdiv(kl_gen, poisson, t1, t2, 1'000'000, seed + run, {.workers = workers});
      if (run == 0) first = e;
      if (std::abs(e.value - kTarget) <= 4.0 * *e.std_error) ++inside;
    }
    const double fraction = static_cast<double>(inside) / static_cast<double>(mc_runs);
    rows.push_back({"kl monte carlo n=1e6, fraction within 4se of 0.11589", ">= 0.95", fraction,
                    std::to_string(mc_runs) + " seeded runs", fraction >= 0.95});
    rows.push_back({"kl monte carlo n=1e6, first run vs 0.1156", "0.1156", first.value,
                    "4se = " + fmt("%.2g", 4.0 * *first.std_error),
                    std::abs(first.value - 0.1156) <= 4.0 * *first.std_error});
  }

  {
    const auto js = make_generator(GeneratorKind::JensenShannon);
    const auto a = rate(5.0);
    const auto b = rate(5.1);
    const double approx = second_order_approx(js, poisson, a, b).value;
    const double reference = oracle_fdiv(js, poisson, a, b).value;
    const double percent = 100.0 * relative_error(approx, reference);
    rows.push_back({"js second-order relative error % poisson(5:5.1)", "1.15", percent, "+-0.2 points",
                    std::abs(percent - 1.15) <= 0.2});
  }

  {
    std::mt19937_64 engine(seed);
    const auto uniform = [&] { return -2.0 + 4.0 * static_cast<double>(engine() >> 11) * 0x1.0p-53; };
    double worst_chi = 0.0;
    double worst_kl = 0.0;
    for (int pair = 0; pair < 20; ++pair) {
      const std::size_t d = 1 + static_cast<std::size_t>(pair % 3);
      const auto gaussian = make_iso_gaussian(d);
      std::vector<double> m1(d);
      std::vector<double> m2(d);
      for (std::size_t i = 0; i < d; ++i) {
        m1[i] = uniform();
        m2[i] = uniform();
      }
      double sq = 0.0;
      for (std::size_t i = 0; i < d; ++i) sq += (m2[i] - m1[i]) * (m2[i] - m1[i]);
      const NaturalParam g1(m1);
      const NaturalParam g2(m2);
      const double expected_chi = std::expm1(sq);
      worst_chi = std::max({worst_chi, relative_error(chi2_pearson(gaussian, g1, g2).value, expected_chi),
                            relative_error(chi2_neyman(gaussian, g1, g2).value, expected_chi)});
      worst_kl = std::max(worst_kl, relative_error(kl_bregman(gaussian, g1, g2).value, 0.5 * sq));
    }
    rows.push_back({"gaussian chi2_P = chi2_N = e^|dmu|^2 - 1, max rel err", "0", worst_chi, "<= 1e-14",
                    worst_chi <= 1e-14});
    rows.push_back({"gaussian kl = |dmu|^2 / 2, max rel err", "0", worst_kl, "<= 1e-14", worst_kl <= 1e-14});
  }
  return rows;
}

}  // namespace efdiv::cli
