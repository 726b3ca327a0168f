#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace efdiv {

/// A point of the natural parameter space. Coordinates are always finite.
class NaturalParam {
 public:
  NaturalParam() = default;
  explicit NaturalParam(std::vector<double> coords);
  NaturalParam(std::initializer_list<double> coords);

  [[nodiscard]] std::size_t dim() const noexcept { return coords_.size(); }
  [[nodiscard]] std::span<const double> coords() const noexcept { return coords_; }
  [[nodiscard]] double operator[](std::size_t i) const noexcept { return coords_[i]; }

  friend bool operator==(const NaturalParam&, const NaturalParam&) = default;

 private:
  std::vector<double> coords_;
};

/// Affine combination a * x + b * y.
[[nodiscard]] NaturalParam affine_combination(double a, const NaturalParam& x, double b,
                                              const NaturalParam& y);

enum class FamilyKind { Poisson, IsotropicGaussian };

struct PoissonRate {
  double rate = 1.0;
};

struct GaussianMean {
  std::vector<double> mean;
};

/// Ordinary (source) parameterization of a family member.
using SourceParam = std::variant<PoissonRate, GaussianMean>;

/// An exponential family p(x | theta) = exp(<t(x), theta> - F(theta) + k(x))
/// whose natural parameter space is affine. The two built-in members are the
/// Poisson family (F = e^theta) and the isotropic unit-variance Gaussian
/// family in d dimensions (F = |theta|^2 / 2). Both have t(x) = x.
///
/// Carrier and density formulas live with the estimators; this type only knows
/// what the closed forms need: F, its gradient, the domain and sampling.
class FamilySpec {
 public:
  [[nodiscard]] FamilyKind kind() const noexcept { return kind_; }
  [[nodiscard]] std::size_t order() const noexcept { return order_; }
  [[nodiscard]] std::string name() const;

  /// F(theta).
  [[nodiscard]] double log_normalizer(const NaturalParam& theta) const;
  /// Gradient of F, which is also the mean of the sufficient statistic.
  [[nodiscard]] std::vector<double> grad_log_normalizer(const NaturalParam& theta) const;
  /// Membership in the natural parameter space. Identically true for finite
  /// inputs of the right dimension on both built-in families.
  [[nodiscard]] bool in_domain(const NaturalParam& theta) const noexcept;

  /// F(p theta1 + q theta2) - (p F(theta1) + q F(theta2)) with q = 1 - p,
  /// evaluated in a cancellation-free form specific to the family. This is the
  /// log of the integral of x1^p x2^q.
  [[nodiscard]] double skew_gap(const NaturalParam& theta1, const NaturalParam& theta2,
                                double p) const;

  /// Bregman divergence B_F(a : b) = F(a) - F(b) - <a - b, grad F(b)>,
  /// evaluated in a cancellation-free form.
  [[nodiscard]] double bregman(const NaturalParam& a, const NaturalParam& b) const;

  /// Throws DomainError unless in_domain(theta); `what` names the parameter.
  void require_in_domain(const NaturalParam& theta, const std::string& what) const;

  friend bool operator==(const FamilySpec&, const FamilySpec&) = default;

 private:
  FamilySpec(FamilyKind kind, std::size_t order) : kind_(kind), order_(order) {}
  friend FamilySpec make_poisson();
  friend FamilySpec make_iso_gaussian(std::size_t d);

  FamilyKind kind_;
  std::size_t order_;
};

[[nodiscard]] FamilySpec make_poisson();
/// Throws ArgumentError for d == 0.
[[nodiscard]] FamilySpec make_iso_gaussian(std::size_t d);

/// Poisson: theta = log(rate); Gaussian: theta = mean.
[[nodiscard]] NaturalParam to_natural(const FamilySpec& family, const SourceParam& src);
[[nodiscard]] SourceParam to_source(const FamilySpec& family, const NaturalParam& theta);

}  // namespace efdiv
