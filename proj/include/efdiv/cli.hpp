#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace efdiv::cli {

enum class Command { Chi2, ChiK, Fdiv, Kl, Mc, Oracle, PaperRepro };
enum class Format { Json, Csv, Plain };

/// Process exit statuses.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitBadArguments = 2;
inline constexpr int kExitDomain = 3;
inline constexpr int kExitNonConvergence = 4;

/// One fully-validated invocation. Distribution parameters are given in the
/// source parameterization (Poisson rates, Gaussian means).
struct Request {
  Command command = Command::Chi2;
  std::string family = "poisson";
  double l1 = 1.0;
  double l2 = 1.0;
  std::vector<double> mu1;
  std::vector<double> mu2;

  std::string side = "pearson";   // chi2
  int k = 2;                      // chik, oracle
  bool k_given = false;           // oracle: chi-type integrand instead of a generator
  double lambda = 1.0;            // expansion centre / chi^k_lambda weight
  int k_max = 30;
  std::string generator = "kl";
  double alpha = 0.0;
  int power = 2;
  std::string method;             // per-command default when empty
  int s = 10;
  double tol = 1e-10;
  int s_max = 30;
  std::optional<double> ratio_m;
  std::optional<double> ratio_M;
  std::uint64_t n = 1'000'000;
  std::uint64_t seed = 42;
  std::size_t workers = 1;
  std::size_t repro_runs = 40;    // paper-repro Monte Carlo repetitions

  Format format = Format::Json;
  std::string output;             // empty: stdout
};

struct Outcome {
  int exit_code = kExitOk;
  /// Serialized report (may be present even on non-zero exit, e.g. a
  /// non-converged series).
  std::string report;
  /// Single-line JSON error for stderr, empty on success.
  std::string error;
};

/// Parses and validates argv. Returns an Outcome (exit 0 with usage text for
/// --help, exit 2 with an error line otherwise) when no request results.
[[nodiscard]] std::variant<Request, Outcome> parse_args(const std::vector<std::string>& args);

/// Canonical argv (without the program name) that reproduces `request`.
[[nodiscard]] std::vector<std::string> to_args(const Request& request);

[[nodiscard]] Outcome run(const Request& request);

/// Parse, run, write the report to --output or stdout and the error line to
/// stderr. Returns the exit status.
int main_entry(int argc, const char* const* argv);

struct ReproRow {
  std::string name;
  std::string published;   // the constant as printed, or the criterion
  double recomputed = 0.0;
  std::string tolerance;
  bool pass = false;
};

/// Recomputes every published constant and checks it against its tolerance.
[[nodiscard]] std::vector<ReproRow> paper_repro(std::uint64_t seed, std::size_t workers, std::size_t mc_runs);

}  // namespace efdiv::cli
