#pragma once

#include <cstddef>
#include <functional>
#include <span>

namespace efdiv {

struct QuadratureResult {
  double value = 0.0;
  double abs_error = 0.0;
  std::size_t evaluations = 0;
  bool tolerance_met = false;
};

/// Globally adaptive 15-point Gauss-Kronrod on [a, b]: the interval with the
/// largest error estimate is bisected until the summed estimate drops below
/// max(abs_tol, rel_tol |I|) or max_intervals is reached. Error estimates use the QUADPACK
/// scaling of |K15 - G7|.
[[nodiscard]] QuadratureResult integrate_gk15(const std::function<double(double)>& f, double a, double b,
                                              double abs_tol, double rel_tol = 0.0,
                                              std::size_t max_intervals = 2000);

/// Iterated adaptive quadrature over the box [lo, hi] (one nested level per
/// coordinate). Cost grows exponentially with the dimension.
[[nodiscard]] QuadratureResult integrate_box(const std::function<double(std::span<const double>)>& f,
                                             std::span<const double> lo, std::span<const double> hi,
                                             double abs_tol, double rel_tol = 0.0,
                                             std::size_t max_intervals = 2000);

}  // namespace efdiv
