#include <algorithm>
#include <cmath>

#include "CLI11.hpp"
#include "efdiv/cli.hpp"
#include "efdiv/errors.hpp"
#include "efdiv/generator.hpp"
#include "json.hpp"
#include "report.hpp"

namespace efdiv::cli {

namespace {

std::string format_double(double x) { return number_text(x); }

std::string join(const std::vector<double>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i > 0) out += ',';
    out += format_double(xs[i]);
  }
  return out;
}

std::string_view command_name(Command c) {
  switch (c) {
    case Command::Chi2:
      return "chi2";
    case Command::ChiK:
      return "chik";
    case Command::Fdiv:
      return "fdiv";
    case Command::Kl:
      return "kl";
    case Command::Mc:
      return "mc";
    case Command::Oracle:
      return "oracle";
    case Command::PaperRepro:
      return "paper-repro";
  }
  return "";
}

Outcome bad_arguments(const std::string& message) {
  nlohmann::ordered_json e;
  e["error"] = "bad_arguments";
  e["message"] = message;
  return {kExitBadArguments, {}, e.dump()};
}

void add_family_options(CLI::App& sub, Request& r) {
  sub.add_option("--family", r.family, "distribution family")->check(CLI::IsMember({"poisson", "gaussian"}));
  sub.add_option("--l1", r.l1, "rate of the first Poisson distribution");
  sub.add_option("--l2", r.l2, "rate of the second Poisson distribution");
  sub.add_option("--mu1", r.mu1, "mean of the first Gaussian (comma separated)")->delimiter(',');
  sub.add_option("--mu2", r.mu2, "mean of the second Gaussian (comma separated)")->delimiter(',');
}

void add_generator_options(CLI::App& sub, Request& r) {
  sub.add_option("--generator", r.generator,
                 "kl, reverse-kl, pearson, neyman, hellinger, js, alpha, vajda, tv");
  sub.add_option("--alpha", r.alpha, "alpha of the alpha-divergence generator");
  sub.add_option("--power", r.power, "power k of the Pearson-Vajda generator");
}

void add_sampling_options(CLI::App& sub, Request& r) {
  sub.add_option("--n", r.n, "Monte Carlo sample count per distribution");
  sub.add_option("--workers", r.workers, "Monte Carlo worker threads");
}

void add_output_options(CLI::App& sub, Request& r) {
  sub.add_option("--format", r.format, "json, csv or plain")
      ->transform(CLI::CheckedTransformer(
          std::map<std::string, Format>{{"json", Format::Json}, {"csv", Format::Csv}, {"plain", Format::Plain}}));
  sub.add_option("--output", r.output, "write the report to this path instead of stdout");
  sub.add_option("--seed", r.seed, "random seed");
}

std::optional<std::string> validate(const Request& r) {
  if (r.family == "gaussian") {
    if (r.mu1.empty() || r.mu2.empty()) return "gaussian family needs --mu1 and --mu2";
    if (r.mu1.size() != r.mu2.size()) return "--mu1 and --mu2 differ in dimension";
    for (double v : r.mu1) {
      if (!std::isfinite(v)) return "--mu1 has a non-finite coordinate";
    }
    for (double v : r.mu2) {
      if (!std::isfinite(v)) return "--mu2 has a non-finite coordinate";
    }
  } else if (!std::isfinite(r.l1) || !std::isfinite(r.l2)) {
    return "--l1 and --l2 must be finite";
  }
  if (r.k < 0) return "--k must be non-negative";
  if (r.k_max < 0 || r.k_max > 62) return "--k-max must lie in [0, 62]";
  if (r.s < 0) return "--s must be non-negative";
  if (r.s_max < 0 || r.s_max > 62) return "--s-max must lie in [0, 62]";
  if (!(r.tol > 0.0)) return "--tol must be positive";
  if (r.n == 0) return "--n must be positive";
  if (r.workers == 0 || r.workers > 1024) return "--workers must lie in [1, 1024]";
  if (r.repro_runs == 0) return "--runs must be positive";
  if (!std::isfinite(r.lambda)) return "--lambda must be finite";
  if (r.ratio_m.has_value() != r.ratio_M.has_value()) return "--m and --M must be given together";

  const auto method_ok = [&](std::initializer_list<std::string_view> allowed) {
    return r.method.empty() || std::find(allowed.begin(), allowed.end(), r.method) != allowed.end();
  };
  switch (r.command) {
    case Command::Chi2:
      if (r.side != "pearson" && r.side != "neyman" && r.side != "symmetric") {
        return "--side must be pearson, neyman or symmetric";
      }
      break;
    case Command::Kl:
      if (!method_ok({"bregman", "series", "taylor", "mc", "oracle"})) {
        return "kl --method must be bregman, series, taylor, mc or oracle";
      }
      break;
    case Command::Fdiv:
      if (!method_ok({"taylor", "auto", "second-order", "mc", "oracle"})) {
        return "fdiv --method must be taylor, auto, second-order, mc or oracle";
      }
      break;
    default:
      break;
  }
  if (r.command == Command::Fdiv || r.command == Command::Mc ||
      (r.command == Command::Oracle && !r.k_given)) {
    try {
      (void)make_generator(r.generator, r.alpha, r.power);
    } catch (const Error& e) {
      return std::string(e.what());
    }
  }
  return std::nullopt;
}

}  // namespace

std::variant<Request, Outcome> parse_args(const std::vector<std::string>& args) {
  Request r;
  CLI::App app{"Closed-form, series, Monte Carlo and brute-force f-divergences between exponential-family members",
               "efdiv"};
  app.require_subcommand(1);

  auto* chi2 = app.add_subcommand("chi2", "Pearson / Neyman / symmetric chi-square distance (closed form)");
  add_family_options(*chi2, r);
  chi2->add_option("--side", r.side, "pearson, neyman or symmetric");

  auto* chik = app.add_subcommand("chik", "signed higher-order chi^k distance (closed form)");
  add_family_options(*chik, r);
  chik->add_option("--k", r.k, "order k");
  chik->add_option("--lambda", r.lambda, "weight lambda in (x2 - lambda x1)^k / x1^(k-1)");
  chik->add_option("--k-max", r.k_max, "cancellation guard on k");

  auto* fdiv_cmd = app.add_subcommand("fdiv", "f-divergence by Taylor series, Monte Carlo or oracle");
  add_family_options(*fdiv_cmd, r);
  add_generator_options(*fdiv_cmd, r);
  add_sampling_options(*fdiv_cmd, r);
  fdiv_cmd->add_option("--method", r.method, "taylor, auto (default), second-order, mc or oracle");
  fdiv_cmd->add_option("--lambda", r.lambda, "expansion centre");
  fdiv_cmd->add_option("--s", r.s, "truncation order (taylor)");
  fdiv_cmd->add_option("--tol", r.tol, "term tolerance (auto)");
  fdiv_cmd->add_option("--s-max", r.s_max, "maximum order (auto)");
  fdiv_cmd->add_option("--k-max", r.k_max, "cancellation guard on the chi order (taylor)");
  fdiv_cmd->add_option("--m", r.ratio_m, "lower bound on the density ratio (truncation bound)");
  fdiv_cmd->add_option("--M", r.ratio_M, "upper bound on the density ratio (truncation bound)");

  auto* kl = app.add_subcommand("kl", "Kullback-Leibler divergence");
  add_family_options(*kl, r);
  add_sampling_options(*kl, r);
  kl->add_option("--method", r.method, "bregman (default), series, taylor, mc or oracle");
  kl->add_option("--s", r.s, "truncation order (series, taylor)");
  kl->add_option("--k-max", r.k_max, "cancellation guard on the chi order");

  auto* mc = app.add_subcommand("mc", "symmetrized Monte Carlo estimate of an f-divergence");
  add_family_options(*mc, r);
  add_generator_options(*mc, r);
  add_sampling_options(*mc, r);

  auto* oracle = app.add_subcommand("oracle", "brute-force summation / quadrature reference");
  add_family_options(*oracle, r);
  add_generator_options(*oracle, r);
  add_sampling_options(*oracle, r);
  auto* oracle_k = oracle->add_option("--k", r.k, "evaluate the chi^k_lambda integral instead of a generator");
  oracle->add_option("--lambda", r.lambda, "weight lambda of the chi^k_lambda integrand");

  auto* repro = app.add_subcommand("paper-repro", "recompute every published constant and check tolerances");
  repro->add_option("--workers", r.workers, "Monte Carlo worker threads");
  repro->add_option("--runs", r.repro_runs, "seeded Monte Carlo repetitions");

  for (auto* sub : {chi2, chik, fdiv_cmd, kl, mc, oracle, repro}) add_output_options(*sub, r);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    return Outcome{kExitOk, app.help(), {}};
  } catch (const CLI::ParseError& e) {
    return bad_arguments(e.what());
  }

  if (chi2->parsed()) r.command = Command::Chi2;
  if (chik->parsed()) r.command = Command::ChiK;
  if (fdiv_cmd->parsed()) r.command = Command::Fdiv;
  if (kl->parsed()) r.command = Command::Kl;
  if (mc->parsed()) r.command = Command::Mc;
  if (oracle->parsed()) r.command = Command::Oracle;
  if (repro->parsed()) r.command = Command::PaperRepro;
  r.k_given = r.command == Command::Oracle && oracle_k->count() > 0;

  if (const auto problem = validate(r)) return bad_arguments(*problem);
  return r;
}

std::vector<std::string> to_args(const Request& r) {
  std::vector<std::string> a{std::string(command_name(r.command))};
  const auto opt = [&](const std::string& name, const std::string& value) {
    a.push_back(name);
    a.push_back(value);
  };
  if (r.command != Command::PaperRepro) {
    opt("--family", r.family);
    if (r.family == "gaussian") {
      opt("--mu1", join(r.mu1));
      opt("--mu2", join(r.mu2));
    } else {
      opt("--l1", format_double(r.l1));
      opt("--l2", format_double(r.l2));
    }
  }
  const auto generator_opts = [&] {
    opt("--generator", r.generator);
    opt("--alpha", format_double(r.alpha));
    opt("--power", std::to_string(r.power));
  };
  switch (r.command) {
    case Command::Chi2:
      opt("--side", r.side);
      break;
    case Command::ChiK:
      opt("--k", std::to_string(r.k));
      opt("--lambda", format_double(r.lambda));
      opt("--k-max", std::to_string(r.k_max));
      break;
    case Command::Fdiv:
      generator_opts();
      if (!r.method.empty()) opt("--method", r.method);
      opt("--lambda", format_double(r.lambda));
      opt("--s", std::to_string(r.s));
      opt("--tol", format_double(r.tol));
      opt("--s-max", std::to_string(r.s_max));
      opt("--k-max", std::to_string(r.k_max));
      if (r.ratio_m) opt("--m", format_double(*r.ratio_m));
      if (r.ratio_M) opt("--M", format_double(*r.ratio_M));
      opt("--n", std::to_string(r.n));
      opt("--workers", std::to_string(r.workers));
      break;
    case Command::Kl:
      if (!r.method.empty()) opt("--method", r.method);
      opt("--s", std::to_string(r.s));
      opt("--k-max", std::to_string(r.k_max));
      opt("--n", std::to_string(r.n));
      opt("--workers", std::to_string(r.workers));
      break;
    case Command::Mc:
      generator_opts();
      opt("--n", std::to_string(r.n));
      opt("--workers", std::to_string(r.workers));
      break;
    case Command::Oracle:
      if (r.k_given) {
        opt("--k", std::to_string(r.k));
        opt("--lambda", format_double(r.lambda));
      } else {
        generator_opts();
      }
      opt("--n", std::to_string(r.n));
      opt("--workers", std::to_string(r.workers));
      break;
    case Command::PaperRepro:
      opt("--workers", std::to_string(r.workers));
      opt("--runs", std::to_string(r.repro_runs));
      break;
  }
  opt("--seed", std::to_string(r.seed));
  opt("--format", r.format == Format::Json ? "json" : r.format == Format::Csv ? "csv" : "plain");
  return a;
}

}  // namespace efdiv::cli
