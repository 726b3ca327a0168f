#pragma once

#include <string>
#include <string_view>

namespace efdiv {

enum class GeneratorKind {
  KullbackLeibler,         // -log u
  ReverseKullbackLeibler,  // u log u
  PearsonChi2,             // (u - 1)^2
  NeymanChi2,              // (1 - u)^2 / u
  SquaredHellinger,        // (sqrt(u) - 1)^2
  JensenShannon,           // -(u + 1) log((1 + u) / 2) + u log u
  Alpha,                   // 4 / (1 - a^2) (1 - u^((1 + a) / 2))
  PearsonVajda,            // (u - 1)^k
  TotalVariation,          // |u - 1| / 2, evaluation only
};

/// Generator f of an f-divergence I_f(X1 : X2) = integral of x1 f(x2 / x1),
/// normalized so that f(1) = 0, with closed-form derivatives of every order.
///
/// The alpha generator follows the u^((1+a)/2) column of the usual table, so
/// I_f = 4 / (1 - a^2) (1 - I_{(1-a)/2,(1+a)/2}). The companion integral
/// formula printed with that table carries q^(1+a), which is inconsistent
/// with the generator and is not used.
class GeneratorSpec {
 public:
  [[nodiscard]] GeneratorKind kind() const noexcept { return kind_; }
  [[nodiscard]] std::string name() const;
  /// Alpha for the alpha-divergence, 0 otherwise.
  [[nodiscard]] double alpha() const noexcept { return alpha_; }
  /// Power k for Pearson-Vajda, 0 otherwise.
  [[nodiscard]] int power() const noexcept { return power_; }

  /// f(u). Throws DomainError outside the evaluation domain.
  [[nodiscard]] double eval(double u) const;

  /// i-th derivative at u; deriv(0, u) == eval(u). Throws DomainError when u
  /// is outside the derivative domain.
  [[nodiscard]] double deriv(int i, double u) const;

  /// f^(i)(u) / i!, computed without forming the factorial where the closed
  /// form allows it.
  [[nodiscard]] double taylor_coefficient(int i, double u) const;

  /// True when derivatives of every order exist at u.
  [[nodiscard]] bool in_deriv_domain(double u) const noexcept;
  /// Human-readable derivative domain, e.g. "(0, inf)".
  [[nodiscard]] std::string deriv_domain() const;
  [[nodiscard]] bool has_derivatives() const noexcept { return kind_ != GeneratorKind::TotalVariation; }
  /// Polynomial generators have f^(i) == 0 for i > degree.
  [[nodiscard]] bool is_polynomial() const noexcept;

  /// p f(q / p) from log p and log q, evaluated without forming the ratio so
  /// that tails where q / p overflows or underflows stay finite.
  [[nodiscard]] double perspective(double log_p, double log_q) const;

  /// sup of |f^(i)| over [m, M]; every built-in derivative of order >= 1 is
  /// monotone on the positive axis, so the sup sits at an endpoint.
  [[nodiscard]] double sup_abs_deriv(int i, double m, double M) const;

  friend bool operator==(const GeneratorSpec&, const GeneratorSpec&) = default;

 private:
  GeneratorSpec(GeneratorKind kind, double alpha, int power) : kind_(kind), alpha_(alpha), power_(power) {}
  friend GeneratorSpec make_generator(GeneratorKind kind, double alpha, int power);

  GeneratorKind kind_;
  double alpha_ = 0.0;
  int power_ = 0;
};

/// `alpha` is used by Alpha (must not be +-1), `power` by PearsonVajda (>= 1).
[[nodiscard]] GeneratorSpec make_generator(GeneratorKind kind, double alpha = 0.0, int power = 2);

/// Accepts kl, reverse-kl, pearson, neyman, hellinger, js, alpha, vajda, tv
/// (and a few aliases). Throws ArgumentError for unknown names.
[[nodiscard]] GeneratorSpec make_generator(std::string_view name, double alpha = 0.0, int power = 2);

}  // namespace efdiv
