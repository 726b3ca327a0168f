#include <fstream>
#include <iostream>

#include "efdiv/cli.hpp"
#include "efdiv/closed_form.hpp"
#include "efdiv/errors.hpp"
#include "efdiv/estimators.hpp"
#include "efdiv/taylor.hpp"
#include "report.hpp"

namespace efdiv::cli {

namespace {

struct Setup {
  FamilySpec family;
  NaturalParam theta1;
  NaturalParam theta2;
};

Setup make_setup(const Request& r) {
  if (r.family == "gaussian") {
    auto family = make_iso_gaussian(r.mu1.size());
    return {family, to_natural(family, GaussianMean{r.mu1}), to_natural(family, GaussianMean{r.mu2})};
  }
  auto family = make_poisson();
  return {family, to_natural(family, PoissonRate{r.l1}), to_natural(family, PoissonRate{r.l2})};
}

Report base_report(const Request& r) {
  Report rep;
  rep["command"] = to_args(r).front();
  rep["family"] = r.family;
  Report params;
  if (r.family == "gaussian") {
    params["mu1"] = r.mu1;
    params["mu2"] = r.mu2;
  } else {
    params["l1"] = r.l1;
    params["l2"] = r.l2;
  }
  rep["params"] = std::move(params);
  return rep;
}

void put_divergence(Report& rep, const DivergenceResult& d) {
  rep["method"] = std::string(to_string(d.method));
  rep["value"] = d.value;
  if (d.log1p_form) rep["log_exponent"] = *d.log1p_form;
  if (d.bound) rep["bound"] = *d.bound;
}

// Returns true when the series reached its requested or converged order.
bool put_series(Report& rep, const SeriesResult& s) {
  put_divergence(rep, s.result);
  rep["trace"] = s.trace.partial_sums;
  rep["terms"] = s.trace.terms;
  rep["center"] = s.trace.center;
  rep["truncation_order"] = s.trace.truncation_order;
  rep["status"] = std::string(to_string(s.trace.status));
  if (!s.trace.diagnostic.empty()) rep["diagnostic"] = s.trace.diagnostic;
  return s.converged();
}

void put_estimate(Report& rep, const EstimateResult& e, Method method) {
  rep["method"] = std::string(to_string(method));
  rep["value"] = e.value;
  rep["n"] = e.n;
  if (e.std_error) rep["std_error"] = *e.std_error;
  if (e.tail_mass_dropped) rep["tail_mass_dropped"] = *e.tail_mass_dropped;
  if (e.abs_error) rep["abs_error"] = *e.abs_error;
  if (e.skipped > 0) rep["skipped"] = e.skipped;
  if (!e.diagnostic.empty()) rep["diagnostic"] = e.diagnostic;
}

void put_generator(Report& rep, const Request& r, const GeneratorSpec& gen) {
  rep["params"]["generator"] = gen.name();
  if (gen.kind() == GeneratorKind::Alpha) rep["params"]["alpha"] = r.alpha;
  if (gen.kind() == GeneratorKind::PearsonVajda) rep["params"]["power"] = r.power;
}

void put_monte_carlo(Report& rep, const Request& r, const GeneratorSpec& gen, const Setup& s) {
  const auto e = mc_fdiv(gen, s.family, s.theta1, s.theta2, r.n, r.seed, {.workers = r.workers});
  put_estimate(rep, e, Method::MonteCarlo);
  rep["seed"] = r.seed;
  rep["params"]["workers"] = r.workers;
}

void put_oracle(Report& rep, const Request& r, const GeneratorSpec& gen, const Setup& s) {
  if (s.family.kind() == FamilyKind::IsotropicGaussian && s.family.order() > kMaxOracleGaussianDim) {
    put_monte_carlo(rep, r, gen, s);
    rep["diagnostic"] = "gaussian dimension above 3: quadrature oracle replaced by Monte Carlo";
    return;
  }
  put_estimate(rep, oracle_fdiv(gen, s.family, s.theta1, s.theta2), Method::Oracle);
}

Outcome failure(int code, std::string_view kind, const std::string& message, std::string report = {}) {
  Report e;
  e["error"] = kind;
  e["message"] = message;
  return {code, std::move(report), e.dump()};
}

Outcome run_repro(const Request& r) {
  const auto rows = paper_repro(r.seed, r.workers, r.repro_runs);
  bool all_pass = true;
  for (const auto& row : rows) all_pass = all_pass && row.pass;
  return {all_pass ? kExitOk : kExitFailure, render_repro(rows, all_pass, r.format), {}};
}

}  // namespace

Outcome run(const Request& r) {
  try {
    if (r.command == Command::PaperRepro) return run_repro(r);

    const auto setup = make_setup(r);
    Report rep = base_report(r);
    bool converged = true;

    switch (r.command) {
      case Command::Chi2: {
        rep["params"]["side"] = r.side;
        if (r.side == "pearson") {
          put_divergence(rep, chi2_pearson(setup.family, setup.theta1, setup.theta2));
        } else if (r.side == "neyman") {
          put_divergence(rep, chi2_neyman(setup.family, setup.theta1, setup.theta2));
        } else {
          put_divergence(rep, chi2_symmetric(setup.family, setup.theta1, setup.theta2));
        }
        break;
      }
      case Command::ChiK: {
        rep["params"]["k"] = r.k;
        rep["params"]["lambda"] = r.lambda;
        DivergenceResult d;
        d.value = chi_k_lambda(setup.family, setup.theta1, setup.theta2, r.k, r.lambda, r.k_max);
        put_divergence(rep, d);
        break;
      }
      case Command::Fdiv: {
        const auto gen = make_generator(r.generator, r.alpha, r.power);
        put_generator(rep, r, gen);
        const std::string method = r.method.empty() ? "auto" : r.method;
        rep["params"]["method"] = method;
        if (method == "taylor") {
          std::optional<RatioBounds> bounds;
          if (r.ratio_m) bounds = RatioBounds{*r.ratio_m, *r.ratio_M};
          rep["params"]["s"] = r.s;
          rep["params"]["lambda"] = r.lambda;
          converged = put_series(
              rep, taylor_fdiv(gen, setup.family, setup.theta1, setup.theta2, r.lambda, r.s, bounds, r.k_max));
        } else if (method == "auto") {
          rep["params"]["lambda"] = r.lambda;
          rep["params"]["tol"] = r.tol;
          rep["params"]["s_max"] = r.s_max;
          converged = put_series(
              rep, taylor_fdiv_auto(gen, setup.family, setup.theta1, setup.theta2, r.lambda, r.tol, r.s_max));
        } else if (method == "second-order") {
          put_divergence(rep, second_order_approx(gen, setup.family, setup.theta1, setup.theta2));
        } else if (method == "mc") {
          put_monte_carlo(rep, r, gen, setup);
        } else {
          put_oracle(rep, r, gen, setup);
        }
        break;
      }
      case Command::Kl: {
        const std::string method = r.method.empty() ? "bregman" : r.method;
        rep["params"]["method"] = method;
        const auto gen = make_generator(GeneratorKind::KullbackLeibler);
        if (method == "bregman") {
          put_divergence(rep, kl_bregman(setup.family, setup.theta1, setup.theta2));
        } else if (method == "series") {
          rep["params"]["s"] = r.s;
          converged = put_series(rep, kl_series(setup.family, setup.theta1, setup.theta2, r.s, r.k_max));
        } else if (method == "taylor") {
          rep["params"]["s"] = r.s;
          converged = put_series(
              rep, taylor_fdiv(gen, setup.family, setup.theta1, setup.theta2, 1.0, r.s, std::nullopt, r.k_max));
        } else if (method == "mc") {
          put_monte_carlo(rep, r, gen, setup);
        } else {
          put_oracle(rep, r, gen, setup);
        }
        break;
      }
      case Command::Mc: {
        const auto gen = make_generator(r.generator, r.alpha, r.power);
        put_generator(rep, r, gen);
        put_monte_carlo(rep, r, gen, setup);
        break;
      }
      case Command::Oracle: {
        if (r.k_given) {
          rep["params"]["k"] = r.k;
          rep["params"]["lambda"] = r.lambda;
          put_estimate(rep, oracle_chi_k(setup.family, setup.theta1, setup.theta2, r.k, r.lambda), Method::Oracle);
        } else {
          const auto gen = make_generator(r.generator, r.alpha, r.power);
          put_generator(rep, r, gen);
          put_oracle(rep, r, gen, setup);
        }
        break;
      }
      case Command::PaperRepro:
        break;
    }

    rep["request"] = to_args(r);
    auto text = render(rep, r.format);
    if (!converged) {
      return failure(kExitNonConvergence, "non_convergence",
                     rep.contains("diagnostic") ? rep["diagnostic"].get<std::string>() : "series did not converge",
                     std::move(text));
    }
    return {kExitOk, std::move(text), {}};
  } catch (const ArgumentError& e) {
    return failure(kExitBadArguments, "bad_arguments", e.what());
  } catch (const DomainError& e) {
    return failure(kExitDomain, "domain", e.what());
  } catch (const NumericalError& e) {
    return failure(kExitNonConvergence, "numerical", e.what());
  } catch (const std::exception& e) {
    return failure(kExitFailure, "internal", e.what());
  }
}

int main_entry(int argc, const char* const* argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  auto parsed = parse_args(args);
  Outcome outcome;
  std::string output_path;
  if (auto* early = std::get_if<Outcome>(&parsed)) {
    outcome = std::move(*early);
  } else {
    const auto& request = std::get<Request>(parsed);
    output_path = request.output;
    outcome = run(request);
  }

  if (!outcome.report.empty()) {
    if (output_path.empty()) {
      std::cout << outcome.report << std::flush;
    } else {
      std::ofstream file(output_path);
      if (!file) {
        std::cerr << R"({"error":"io","message":"cannot open output file"})" << '\n';
        return kExitFailure;
      }
      file << outcome.report;
    }
  }
  if (!outcome.error.empty()) std::cerr << outcome.error << '\n';
  return outcome.exit_code;
}

}  // namespace efdiv::cli
