#pragma once

#include <algorithm>
#include <array>
#include <cmath>

namespace optosqueeze {

/// Real roots of a monic cubic, ascending. A double root appears once with
/// `degenerate` set; a triple root collapses to count == 1.
struct CubicRoots {
  std::array<double, 3> roots{};
  int count = 0;
  bool degenerate = false;
};

namespace detail {

inline double eval_cubic(double p, double q, double r, double x) {
  return ((x + p) * x + q) * x + r;
}

inline double eval_cubic_deriv(double p, double q, double x) {
  return (3.0 * x + 2.0 * p) * x + q;
}

// One or two guarded Newton steps; keeps the better iterate.
inline double polish_root(double p, double q, double r, double x) {
  for (int it = 0; it < 2; ++it) {
    const double f = eval_cubic(p, q, r, x);
    const double df = eval_cubic_deriv(p, q, x);
    if (df == 0.0) break;
    const double x1 = x - f / df;
    if (!std::isfinite(x1)) break;
    if (std::abs(eval_cubic(p, q, r, x1)) >= std::abs(f)) break;
    x = x1;
  }
  return x;
}

}  // namespace detail

/// Solves x^3 + p x^2 + q x + r = 0. Coefficients are rescaled internally so
/// the discriminant test (threshold 1e-10) is on O(1) numbers; roots are
/// polished on the original cubic.
inline CubicRoots solve_cubic(double p, double q, double r) {
  CubicRoots out;
  const double s = std::max({std::abs(p), std::sqrt(std::abs(q)),
                             std::cbrt(std::abs(r))});
  if (s == 0.0) {
    out.roots[0] = 0.0;
    out.count = 1;
    out.degenerate = true;
    return out;
  }
  const double ps = p / s;
  const double qs = q / (s * s);
  const double rs = r / (s * s * s);

  // Depressed form t^3 + a t + b with x = t - ps/3.
  const double a = qs - ps * ps / 3.0;
  const double b = (2.0 * ps * ps * ps / 27.0) - ps * qs / 3.0 + rs;
  const double disc = -4.0 * a * a * a - 27.0 * b * b;
  const double shift = -ps / 3.0;
  constexpr double kDegenerateTol = 1e-10;

  if (disc > kDegenerateTol) {
    // Three distinct real roots: trigonometric method.
    const double m = 2.0 * std::sqrt(-a / 3.0);
    const double arg = std::clamp(3.0 * b / (a * m), -1.0, 1.0);
    const double theta = std::acos(arg) / 3.0;
    constexpr double two_pi_3 = 2.0943951023931953;
    for (int k = 0; k < 3; ++k) {
      out.roots[k] = m * std::cos(theta - two_pi_3 * k) + shift;
    }
    out.count = 3;
  } else if (disc < -kDegenerateTol) {
    // Single real root: Cardano with the cancellation-free branch.
    const double sq = std::sqrt(b * b / 4.0 + a * a * a / 27.0);
    const double u = (b <= 0.0) ? std::cbrt(-b / 2.0 + sq)
                                : std::cbrt(-b / 2.0 - sq);
    const double v = (u != 0.0) ? -a / (3.0 * u) : 0.0;
    out.roots[0] = u + v + shift;
    out.count = 1;
  } else {
    out.degenerate = true;
    if (std::abs(a) <= kDegenerateTol) {
      // Triple root.
      out.roots[0] = shift;
      out.count = 1;
    } else {
      // Double root at -3b/(2a), simple root at 3b/a.
      out.roots[0] = -3.0 * b / (2.0 * a) + shift;
      out.roots[1] = 3.0 * b / a + shift;
      out.count = 2;
    }
  }

  for (int k = 0; k < out.count; ++k) {
    out.roots[k] *= s;
    if (!out.degenerate) {
      out.roots[k] = detail::polish_root(p, q, r, out.roots[k]);
    }
  }
  std::sort(out.roots.begin(), out.roots.begin() + out.count);
  return out;
}

}  // namespace optosqueeze
