#include "efdiv/generator.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "efdiv/errors.hpp"
#include "efdiv/numerics.hpp"

namespace efdiv {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double sign_pow(int i) { return (i % 2 == 0) ? 1.0 : -1.0; }

// Generalized binomial coefficient x (x-1) ... (x-n+1) / n!.
double general_binomial(double x, int n) {
  double c = 1.0;
  for (int i = 0; i < n; ++i) c *= (x - i) / (i + 1);
  return c;
}

double alpha_exponent(double alpha) { return 0.5 * (1.0 + alpha); }
double alpha_scale(double alpha) { return 4.0 / (1.0 - alpha * alpha); }

// p * e^{lp}-style products where p = 0 must give 0 even against an infinite
// log factor.
double weighted(double log_weight, double factor) {
  if (log_weight == kNegInf) return 0.0;
  return std::exp(log_weight) * factor;
}

}  // namespace

GeneratorSpec make_generator(GeneratorKind kind, double alpha, int power) {
  if (kind == GeneratorKind::Alpha) {
    if (!std::isfinite(alpha)) throw ArgumentError("alpha must be finite");
    if (alpha == 1.0 || alpha == -1.0) throw ArgumentError("alpha-divergence generator is singular at alpha = +-1");
    return GeneratorSpec(kind, alpha, 0);
  }
  if (kind == GeneratorKind::PearsonVajda) {
    if (power < 1) throw ArgumentError("Pearson-Vajda power must be at least 1");
    return GeneratorSpec(kind, 0.0, power);
  }
  return GeneratorSpec(kind, 0.0, 0);
}

GeneratorSpec make_generator(std::string_view name, double alpha, int power) {
  if (name == "kl" || name == "kullback-leibler") return make_generator(GeneratorKind::KullbackLeibler);
  if (name == "reverse-kl" || name == "rkl") return make_generator(GeneratorKind::ReverseKullbackLeibler);
  if (name == "pearson" || name == "pearson-chi2" || name == "chi2") return make_generator(GeneratorKind::PearsonChi2);
  if (name == "neyman" || name == "neyman-chi2") return make_generator(GeneratorKind::NeymanChi2);
  if (name == "hellinger" || name == "squared-hellinger") return make_generator(GeneratorKind::SquaredHellinger);
  if (name == "js" || name == "jensen-shannon") return make_generator(GeneratorKind::JensenShannon);
  if (name == "alpha") return make_generator(GeneratorKind::Alpha, alpha);
  if (name == "vajda" || name == "pearson-vajda") return make_generator(GeneratorKind::PearsonVajda, 0.0, power);
  if (name == "tv" || name == "total-variation") return make_generator(GeneratorKind::TotalVariation);
  throw ArgumentError("unknown generator '" + std::string(name) + "'");
}

std::string GeneratorSpec::name() const {
  switch (kind_) {
    case GeneratorKind::KullbackLeibler:
      return "kl";
    case GeneratorKind::ReverseKullbackLeibler:
      return "reverse-kl";
    case GeneratorKind::PearsonChi2:
      return "pearson-chi2";
    case GeneratorKind::NeymanChi2:
      return "neyman-chi2";
    case GeneratorKind::SquaredHellinger:
      return "squared-hellinger";
    case GeneratorKind::JensenShannon:
      return "jensen-shannon";
    case GeneratorKind::Alpha:
      return "alpha";
    case GeneratorKind::PearsonVajda:
      return "pearson-vajda";
    case GeneratorKind::TotalVariation:
      return "total-variation";
  }
  return "unknown";
}

bool GeneratorSpec::is_polynomial() const noexcept {
  return kind_ == GeneratorKind::PearsonChi2 || kind_ == GeneratorKind::PearsonVajda;
}

bool GeneratorSpec::in_deriv_domain(double u) const noexcept {
  if (!std::isfinite(u)) return false;
  switch (kind_) {
    case GeneratorKind::PearsonChi2:
    case GeneratorKind::PearsonVajda:
      return true;
    case GeneratorKind::TotalVariation:
      return false;
    default:
      return u > 0.0;
  }
}

std::string GeneratorSpec::deriv_domain() const {
  if (is_polynomial()) return "(-inf, inf)";
  if (kind_ == GeneratorKind::TotalVariation) return "{}";
  return "(0, inf)";
}

double GeneratorSpec::eval(double u) const {
  if (std::isnan(u)) throw DomainError("generator evaluated at NaN");
  const auto need = [&](bool ok) {
    if (!ok) throw DomainError(name() + " generator is undefined at u = " + std::to_string(u));
  };
  switch (kind_) {
    case GeneratorKind::KullbackLeibler:
      need(u > 0.0);
      return -std::log(u);
    case GeneratorKind::ReverseKullbackLeibler:
      need(u >= 0.0);
      return u == 0.0 ? 0.0 : u * std::log(u);
    case GeneratorKind::PearsonChi2:
      return (u - 1.0) * (u - 1.0);
    case GeneratorKind::NeymanChi2:
      need(u > 0.0);
      return (1.0 - u) * (1.0 - u) / u;
    case GeneratorKind::SquaredHellinger: {
      need(u >= 0.0);
      const double r = std::sqrt(u) - 1.0;
      return r * r;
    }
    case GeneratorKind::JensenShannon: {
      need(u >= 0.0);
      if (u == 0.0) return std::numbers::ln2;
      return -(u + 1.0) * std::log((1.0 + u) / 2.0) + u * std::log(u);
    }
    case GeneratorKind::Alpha: {
      const double beta = alpha_exponent(alpha_);
      need(beta >= 0.0 ? u >= 0.0 : u > 0.0);
      return alpha_scale(alpha_) * (1.0 - std::pow(u, beta));
    }
    case GeneratorKind::PearsonVajda:
      return int_pow(u - 1.0, power_);
    case GeneratorKind::TotalVariation:
      return 0.5 * std::abs(u - 1.0);
  }
  return 0.0;
}

double GeneratorSpec::deriv(int i, double u) const {
  if (i < 0) throw ArgumentError("derivative order must be non-negative");
  if (i == 0) return eval(u);
  if (!in_deriv_domain(u)) {
    throw DomainError(name() + " derivatives are undefined at u = " + std::to_string(u) + "; domain " +
                      deriv_domain());
  }
  switch (kind_) {
    case GeneratorKind::KullbackLeibler:
      return sign_pow(i) * factorial(i - 1) * std::pow(u, -i);
    case GeneratorKind::ReverseKullbackLeibler:
      if (i == 1) return std::log(u) + 1.0;
      return sign_pow(i) * factorial(i - 2) * std::pow(u, 1 - i);
    case GeneratorKind::PearsonChi2:
      if (i == 1) return 2.0 * (u - 1.0);
      return i == 2 ? 2.0 : 0.0;
    case GeneratorKind::NeymanChi2:
      if (i == 1) return 1.0 - 1.0 / (u * u);
      return sign_pow(i) * factorial(i) * std::pow(u, -(i + 1));
    case GeneratorKind::SquaredHellinger:
      if (i == 1) return 1.0 - 1.0 / std::sqrt(u);
      return -2.0 * falling_factorial(0.5, i) * std::pow(u, 0.5 - i);
    case GeneratorKind::JensenShannon:
      if (i == 1) return std::log(2.0 * u / (1.0 + u));
      return sign_pow(i) * factorial(i - 2) * (std::pow(u, 1 - i) - std::pow(1.0 + u, 1 - i));
    case GeneratorKind::Alpha: {
      const double beta = alpha_exponent(alpha_);
      return -alpha_scale(alpha_) * falling_factorial(beta, i) * std::pow(u, beta - i);
    }
    case GeneratorKind::PearsonVajda:
      if (i > power_) return 0.0;
      return falling_factorial(power_, i) * int_pow(u - 1.0, power_ - i);
    case GeneratorKind::TotalVariation:
      break;
  }
  throw DomainError(name() + " has no derivatives");
}

double GeneratorSpec::taylor_coefficient(int i, double u) const {
  if (i < 0) throw ArgumentError("derivative order must be non-negative");
  if (i <= 1) return deriv(i, u);
  if (!in_deriv_domain(u)) {
    throw DomainError(name() + " derivatives are undefined at u = " + std::to_string(u) + "; domain " +
                      deriv_domain());
  }
  switch (kind_) {
    case GeneratorKind::KullbackLeibler:
      return sign_pow(i) / (i * std::pow(u, i));
    case GeneratorKind::ReverseKullbackLeibler:
      return sign_pow(i) / (static_cast<double>(i) * (i - 1)) * std::pow(u, 1 - i);
    case GeneratorKind::PearsonChi2:
      return i == 2 ? 1.0 : 0.0;
    case GeneratorKind::NeymanChi2:
      return sign_pow(i) * std::pow(u, -(i + 1));
    case GeneratorKind::SquaredHellinger:
      return -2.0 * general_binomial(0.5, i) * std::pow(u, 0.5 - i);
    case GeneratorKind::JensenShannon:
      return sign_pow(i) / (static_cast<double>(i) * (i - 1)) * (std::pow(u, 1 - i) - std::pow(1.0 + u, 1 - i));
    case GeneratorKind::Alpha: {
      const double beta = alpha_exponent(alpha_);
      return -alpha_scale(alpha_) * general_binomial(beta, i) * std::pow(u, beta - i);
    }
    case GeneratorKind::PearsonVajda:
      if (i > power_) return 0.0;
      return static_cast<double>(binomial(power_, i)) * int_pow(u - 1.0, power_ - i);
    case GeneratorKind::TotalVariation:
      break;
  }
  throw DomainError(name() + " has no derivatives");
}

double GeneratorSpec::perspective(double log_p, double log_q) const {
  if (std::isnan(log_p) || std::isnan(log_q)) throw DomainError("perspective evaluated at NaN");
  if (log_p == kNegInf && log_q == kNegInf) return 0.0;
  switch (kind_) {
    case GeneratorKind::KullbackLeibler:
      if (log_q == kNegInf) return std::numeric_limits<double>::infinity();
      return weighted(log_p, log_p - log_q);
    case GeneratorKind::ReverseKullbackLeibler:
      if (log_p == kNegInf) return std::numeric_limits<double>::infinity();
      return weighted(log_q, log_q - log_p);
    case GeneratorKind::PearsonChi2:
      if (log_p == kNegInf) return std::numeric_limits<double>::infinity();
      return std::exp(2.0 * log_abs_diff_exp(log_q, log_p) - log_p);
    case GeneratorKind::NeymanChi2:
      if (log_q == kNegInf) return std::numeric_limits<double>::infinity();
      return std::exp(2.0 * log_abs_diff_exp(log_q, log_p) - log_q);
    case GeneratorKind::SquaredHellinger:
      return std::exp(2.0 * log_abs_diff_exp(0.5 * log_q, 0.5 * log_p));
    case GeneratorKind::JensenShannon: {
      const double log_sum = log_add_exp(log_p, log_q);
      return weighted(log_p, std::numbers::ln2 + log_p - log_sum) +
             weighted(log_q, std::numbers::ln2 + log_q - log_sum);
    }
    case GeneratorKind::Alpha: {
      // p (1 - (q/p)^beta) = -p expm1(beta (log q - log p))
      const double beta = alpha_exponent(alpha_);
      const double scale = alpha_scale(alpha_);
      if (log_p == kNegInf) return beta > 1.0 ? -scale * std::numeric_limits<double>::infinity() : 0.0;
      if (log_q == kNegInf) {
        return beta > 0.0 ? scale * std::exp(log_p) : -scale * std::numeric_limits<double>::infinity();
      }
      const double t = beta * (log_q - log_p);
      if (t > 30.0) return -scale * (std::exp(log_p + t) - std::exp(log_p));
      return -scale * std::exp(log_p) * std::expm1(t);
    }
    case GeneratorKind::PearsonVajda: {
      if (log_p == kNegInf) return std::numeric_limits<double>::infinity();
      const double magnitude = std::exp(power_ * log_abs_diff_exp(log_q, log_p) - (power_ - 1) * log_p);
      return (log_q < log_p && power_ % 2 == 1) ? -magnitude : magnitude;
    }
    case GeneratorKind::TotalVariation:
      return 0.5 * std::exp(log_abs_diff_exp(log_q, log_p));
  }
  return 0.0;
}

double GeneratorSpec::sup_abs_deriv(int i, double m, double M) const {
  if (!(m <= M)) throw ArgumentError("ratio interval needs m <= M");
  if (!in_deriv_domain(m) || !in_deriv_domain(M)) {
    throw DomainError(name() + " derivatives are not defined on the whole ratio interval; domain " +
                      deriv_domain());
  }
  if (i == 0) throw ArgumentError("sup_abs_deriv needs a derivative order >= 1");
  return std::max(std::abs(deriv(i, m)), std::abs(deriv(i, M)));
}

}  // namespace efdiv
