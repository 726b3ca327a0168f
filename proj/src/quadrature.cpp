#include "efdiv/quadrature.hpp"

#include <cmath>
#include <limits>
#include <queue>
#include <vector>

#include "efdiv/errors.hpp"

namespace efdiv {

namespace {

// Kronrod abscissae on [0, 1]; odd indices are the 7-point Gauss nodes.
constexpr double kNodes[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000,
};
constexpr double kKronrodWeights[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714,
};
constexpr double kGaussWeights[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327,
};

struct Panel {
  double a;
  double b;
  double value;
  double error;
  bool operator<(const Panel& other) const { return error < other.error; }
};

Panel gk15(const std::function<double(double)>& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double f_center = f(center);
  double kronrod = f_center * kKronrodWeights[7];
  double gauss = f_center * kGaussWeights[3];
  double abs_kronrod = std::abs(kronrod);
  double fv1[7];
  double fv2[7];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kNodes[j];
    fv1[j] = f(center - dx);
    fv2[j] = f(center + dx);
    const double pair = fv1[j] + fv2[j];
    kronrod += kKronrodWeights[j] * pair;
    abs_kronrod += kKronrodWeights[j] * (std::abs(fv1[j]) + std::abs(fv2[j]));
    if (j % 2 == 1) gauss += kGaussWeights[j / 2] * pair;
  }
  const double mean = 0.5 * kronrod;
  double asc = kKronrodWeights[7] * std::abs(f_center - mean);
  for (int j = 0; j < 7; ++j) asc += kKronrodWeights[j] * (std::abs(fv1[j] - mean) + std::abs(fv2[j] - mean));

  const double result = kronrod * half;
  abs_kronrod *= std::abs(half);
  asc *= std::abs(half);
  double error = std::abs((kronrod - gauss) * half);
  if (asc != 0.0 && error != 0.0) error = asc * std::min(1.0, std::pow(200.0 * error / asc, 1.5));
  constexpr double kEps = std::numeric_limits<double>::epsilon();
  if (abs_kronrod > std::numeric_limits<double>::min() / (50.0 * kEps)) {
    error = std::max(50.0 * kEps * abs_kronrod, error);
  }
  return {a, b, result, error};
}

}  // namespace

QuadratureResult integrate_gk15(const std::function<double(double)>& f, double a, double b, double abs_tol,
                                double rel_tol, std::size_t max_intervals) {
  if (!(a <= b)) throw ArgumentError("quadrature interval needs a <= b");
  if (!(abs_tol > 0.0) || !(rel_tol >= 0.0)) throw ArgumentError("quadrature tolerance must be positive");
  QuadratureResult out;
  if (a == b) {
    out.tolerance_met = true;
    return out;
  }
  std::priority_queue<Panel> panels;
  panels.push(gk15(f, a, b));
  out.evaluations = 15;
  double value = panels.top().value;
  double error = panels.top().error;
  const auto target = [&](double v) { return std::max(abs_tol, rel_tol * std::abs(v)); };
  while (error > target(value) && panels.size() < max_intervals) {
    const Panel worst = panels.top();
    panels.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    const Panel left = gk15(f, worst.a, mid);
    const Panel right = gk15(f, mid, worst.b);
    out.evaluations += 30;
    panels.push(left);
    panels.push(right);
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
  }
  // Re-sum from the panels; the running totals above only steer refinement.
  value = 0.0;
  error = 0.0;
  while (!panels.empty()) {
    value += panels.top().value;
    error += panels.top().error;
    panels.pop();
  }
  out.value = value;
  out.abs_error = error;
  out.tolerance_met = error <= target(value);
  if (!std::isfinite(value)) throw NumericalError("quadrature produced a non-finite value");
  return out;
}

QuadratureResult integrate_box(const std::function<double(std::span<const double>)>& f,
                               std::span<const double> lo, std::span<const double> hi, double abs_tol,
                               double rel_tol, std::size_t max_intervals) {
  if (lo.size() != hi.size() || lo.empty()) throw ArgumentError("quadrature box bounds are malformed");
  const std::size_t d = lo.size();
  std::vector<double> point(d);
  std::size_t evaluations = 0;
  bool tolerance_met = true;

  // Integrates coordinates level..d-1 with the earlier ones fixed in `point`.
  std::function<QuadratureResult(std::size_t, double)> nested = [&](std::size_t level, double tol) {
    const double width = hi[level] - lo[level];
    if (level + 1 == d) {
      auto r = integrate_gk15(
          [&](double x) {
            point[level] = x;
            return f(point);
          },
          lo[level], hi[level], tol, rel_tol, max_intervals);
      evaluations += r.evaluations;
      tolerance_met = tolerance_met && r.tolerance_met;
      return r;
    }
    // Inner integrals are solved tighter so their noise stays below the
    // outer tolerance after integration over this coordinate.
    const double inner_tol = tol / (4.0 * width);
    auto r = integrate_gk15(
        [&](double x) {
          point[level] = x;
          return nested(level + 1, inner_tol).value;
        },
        lo[level], hi[level], 0.5 * tol, rel_tol, max_intervals);
    tolerance_met = tolerance_met && r.tolerance_met;
    return r;
  };

  auto result = nested(0, abs_tol);
  result.evaluations = evaluations;
  result.tolerance_met = tolerance_met;
  return result;
}

}  // namespace efdiv
