#include "efdiv/family.hpp"

#include <cmath>
#include <numeric>

#include "efdiv/errors.hpp"
#include "efdiv/numerics.hpp"

namespace efdiv {

namespace {

void check_finite(std::span<const double> coords) {
  for (double c : coords) {
    if (!std::isfinite(c)) throw ArgumentError("natural parameter has a non-finite coordinate");
  }
}

void check_dim(const FamilySpec& family, const NaturalParam& theta) {
  if (theta.dim() != family.order()) {
    throw ArgumentError(family.name() + " expects a natural parameter of dimension " +
                        std::to_string(family.order()) + ", got " + std::to_string(theta.dim()));
  }
}

double squared_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

}  // namespace

NaturalParam::NaturalParam(std::vector<double> coords) : coords_(std::move(coords)) {
  check_finite(coords_);
}

NaturalParam::NaturalParam(std::initializer_list<double> coords) : coords_(coords) {
  check_finite(coords_);
}

NaturalParam affine_combination(double a, const NaturalParam& x, double b, const NaturalParam& y) {
  if (x.dim() != y.dim()) throw ArgumentError("affine combination of parameters of different dimension");
  std::vector<double> out(x.dim());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a * x[i] + b * y[i];
  for (double v : out) {
    if (!std::isfinite(v)) throw DomainError("affine combination of natural parameters overflowed");
  }
  return NaturalParam(std::move(out));
}

std::string FamilySpec::name() const {
  switch (kind_) {
    case FamilyKind::Poisson:
      return "poisson";
    case FamilyKind::IsotropicGaussian:
      return "gaussian";
  }
  return "unknown";
}

double FamilySpec::log_normalizer(const NaturalParam& theta) const {
  check_dim(*this, theta);
  const auto c = theta.coords();
  switch (kind_) {
    case FamilyKind::Poisson:
      return std::exp(c[0]);
    case FamilyKind::IsotropicGaussian:
      return 0.5 * std::inner_product(c.begin(), c.end(), c.begin(), 0.0);
  }
  return 0.0;
}

std::vector<double> FamilySpec::grad_log_normalizer(const NaturalParam& theta) const {
  check_dim(*this, theta);
  const auto c = theta.coords();
  switch (kind_) {
    case FamilyKind::Poisson:
      return {std::exp(c[0])};
    case FamilyKind::IsotropicGaussian:
      return {c.begin(), c.end()};
  }
  return {};
}

bool FamilySpec::in_domain(const NaturalParam& theta) const noexcept {
  if (theta.dim() != order_) return false;
  for (double c : theta.coords()) {
    if (!std::isfinite(c)) return false;
  }
  return true;
}

void FamilySpec::require_in_domain(const NaturalParam& theta, const std::string& what) const {
  check_dim(*this, theta);
  if (!in_domain(theta)) throw DomainError(what + " lies outside the natural parameter space of " + name());
}

double FamilySpec::skew_gap(const NaturalParam& theta1, const NaturalParam& theta2, double p) const {
  check_dim(*this, theta1);
  check_dim(*this, theta2);
  const double q = 1.0 - p;
  switch (kind_) {
    case FamilyKind::Poisson: {
      // e^{t1} [ (e^{q d} - 1 - q d) - q (e^d - 1 - d) ],  d = t2 - t1.
      const double t1 = theta1[0];
      const double d = theta2[0] - t1;
      if (d == 0.0 || p == 0.0 || p == 1.0) return 0.0;
      return std::exp(t1) * (expm1_minus_x(q * d) - q * expm1_minus_x(d));
    }
    case FamilyKind::IsotropicGaussian:
      // -p q |t1 - t2|^2 / 2
      return -0.5 * p * q * squared_distance(theta1.coords(), theta2.coords());
  }
  return 0.0;
}

double FamilySpec::bregman(const NaturalParam& a, const NaturalParam& b) const {
  check_dim(*this, a);
  check_dim(*this, b);
  switch (kind_) {
    case FamilyKind::Poisson:
      // e^{b} (e^{a-b} - 1 - (a-b))
      return std::exp(b[0]) * expm1_minus_x(a[0] - b[0]);
    case FamilyKind::IsotropicGaussian:
      return 0.5 * squared_distance(a.coords(), b.coords());
  }
  return 0.0;
}

FamilySpec make_poisson() { return FamilySpec(FamilyKind::Poisson, 1); }

FamilySpec make_iso_gaussian(std::size_t d) {
  if (d == 0) throw ArgumentError("isotropic Gaussian dimension must be at least 1");
  return FamilySpec(FamilyKind::IsotropicGaussian, d);
}

NaturalParam to_natural(const FamilySpec& family, const SourceParam& src) {
  switch (family.kind()) {
    case FamilyKind::Poisson: {
      const auto* rate = std::get_if<PoissonRate>(&src);
      if (rate == nullptr) throw ArgumentError("poisson family expects a rate parameter");
      if (!(rate->rate > 0.0) || !std::isfinite(rate->rate)) {
        throw DomainError("poisson rate must be positive and finite");
      }
      return NaturalParam{std::log(rate->rate)};
    }
    case FamilyKind::IsotropicGaussian: {
      const auto* mean = std::get_if<GaussianMean>(&src);
      if (mean == nullptr) throw ArgumentError("gaussian family expects a mean vector");
      if (mean->mean.size() != family.order()) {
        throw ArgumentError("gaussian mean has dimension " + std::to_string(mean->mean.size()) +
                            ", family has " + std::to_string(family.order()));
      }
      return NaturalParam(mean->mean);
    }
  }
  throw ArgumentError("unknown family");
}

SourceParam to_source(const FamilySpec& family, const NaturalParam& theta) {
  check_dim(family, theta);
  switch (family.kind()) {
    case FamilyKind::Poisson:
      return PoissonRate{std::exp(theta[0])};
    case FamilyKind::IsotropicGaussian:
      return GaussianMean{{theta.coords().begin(), theta.coords().end()}};
  }
  throw ArgumentError("unknown family");
}

}  // namespace efdiv
