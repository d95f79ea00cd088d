#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <queue>
#include <span>
#include <vector>

#include "optosqueeze/errors.hpp"

namespace optosqueeze {

template <std::size_t N>
struct QuadratureResult {
  std::array<double, N> integral{};
  std::array<double, N> error{};
  std::size_t evaluations = 0;
  std::size_t panels = 0;
  bool converged = false;
};

struct QuadratureOptions {
  double rel_tol = 1e-7;
  std::size_t max_panels = 200000;
  // Components whose error drives refinement and convergence. Components not
  // listed ride along on the same panels (diagnostics).
  std::vector<std::size_t> control{0};
  // Optional absolute error target per control component, used in addition
  // to rel_tol (convergence at err <= max(rel_tol * |I|, abs_target)). Lets a
  // slab be integrated to the accuracy of an enclosing integral.
  std::vector<double> abs_target;
};

namespace detail {

// Gauss-Kronrod 7-15 pair (QUADPACK dqk15 abscissae and weights).
inline constexpr std::array<double, 8> kGkNodes = {
    0.9914553711208126, 0.9491079123427585, 0.8648644233597691,
    0.7415311855993944, 0.5860872354676911, 0.4058451513773972,
    0.2077849550078985, 0.0};
inline constexpr std::array<double, 8> kGkKronrodW = {
    0.0229353220105292, 0.0630920926299785, 0.1047900103222502,
    0.1406532597155259, 0.1690047266392679, 0.1903505780647854,
    0.2044329400752989, 0.2094821410847278};
inline constexpr std::array<double, 4> kGkGaussW = {
    0.1294849661688697, 0.2797053914892767, 0.3818300505051189,
    0.4179591836734694};

template <std::size_t N>
struct Panel {
  double a = 0.0;
  double b = 0.0;
  std::array<double, N> integral{};
  std::array<double, N> error{};
  double priority = 0.0;
};

template <std::size_t N, class F>
Panel<N> evaluate_panel(F& f, double a, double b, std::size_t& evaluations) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  std::array<double, N> kronrod{};
  std::array<double, N> gauss{};

  const std::array<double, N> fc = f(center);
  for (std::size_t i = 0; i < N; ++i) {
    kronrod[i] += kGkKronrodW[7] * fc[i];
    gauss[i] += kGkGaussW[3] * fc[i];
  }
  for (std::size_t j = 0; j < 7; ++j) {
    const double dx = half * kGkNodes[j];
    const std::array<double, N> lo = f(center - dx);
    const std::array<double, N> hi = f(center + dx);
    for (std::size_t i = 0; i < N; ++i) {
      const double pair = lo[i] + hi[i];
      kronrod[i] += kGkKronrodW[j] * pair;
      if (j % 2 == 1) gauss[i] += kGkGaussW[j / 2] * pair;
    }
  }
  evaluations += 15;

  Panel<N> p;
  p.a = a;
  p.b = b;
  for (std::size_t i = 0; i < N; ++i) {
    p.integral[i] = half * kronrod[i];
    p.error[i] = std::abs(half * (kronrod[i] - gauss[i]));
    if (!std::isfinite(p.integral[i])) {
      throw QuadratureError("non-finite integrand value");
    }
  }
  return p;
}

template <std::size_t N>
struct PanelWorse {
  bool operator()(const Panel<N>& x, const Panel<N>& y) const {
    if (x.priority != y.priority) return x.priority < y.priority;
    if (x.a != y.a) return x.a > y.a;
    return x.b > y.b;
  }
};

// Pairwise reduction in interval order: deterministic and accurate.
template <std::size_t N>
std::array<double, N> pairwise_sum(const std::vector<std::array<double, N>>& v,
                                   std::size_t lo, std::size_t hi) {
  if (hi - lo == 1) return v[lo];
  const std::size_t mid = lo + (hi - lo) / 2;
  std::array<double, N> left = pairwise_sum(v, lo, mid);
  const std::array<double, N> right = pairwise_sum(v, mid, hi);
  for (std::size_t i = 0; i < N; ++i) left[i] += right[i];
  return left;
}

}  // namespace detail

/// Globally adaptive Gauss-Kronrod 7-15 quadrature of a vector-valued
/// integrand over the union of panels delimited by `boundaries` (sorted,
/// strictly increasing). All components share one panel tree; refinement
/// always bisects the current worst panel. Fully deterministic: identical
/// inputs produce an identical panel tree and bitwise-identical sums.
template <std::size_t N, class F>
QuadratureResult<N> integrate_adaptive(F&& f, std::span<const double> boundaries,
                                       const QuadratureOptions& opt) {
  using detail::Panel;
  QuadratureResult<N> result;
  if (boundaries.size() < 2) {
    throw std::invalid_argument("integrate_adaptive: need >= 2 boundaries");
  }

  std::array<double, N> total{};
  std::array<double, N> total_err{};
  const auto abs_target = [&](std::size_t slot) {
    return slot < opt.abs_target.size() ? opt.abs_target[slot] : 0.0;
  };
  const auto target_for = [&](std::size_t slot, std::size_t comp) {
    return std::max(opt.rel_tol * std::abs(total[comp]), abs_target(slot));
  };
  const auto priority_of = [&](const Panel<N>& p) {
    double worst = 0.0;
    for (std::size_t slot = 0; slot < opt.control.size(); ++slot) {
      const std::size_t comp = opt.control[slot];
      const double t = target_for(slot, comp);
      worst = std::max(worst, t > 0.0 ? p.error[comp] / t : p.error[comp]);
    }
    return worst;
  };

  std::priority_queue<Panel<N>, std::vector<Panel<N>>, detail::PanelWorse<N>>
      queue;
  const auto push = [&](Panel<N> p) {
    for (std::size_t i = 0; i < N; ++i) {
      total[i] += p.integral[i];
      total_err[i] += p.error[i];
    }
    p.priority = priority_of(p);
    queue.push(std::move(p));
  };

  for (std::size_t k = 0; k + 1 < boundaries.size(); ++k) {
    push(detail::evaluate_panel<N>(f, boundaries[k], boundaries[k + 1],
                                   result.evaluations));
  }

  const double span_width = boundaries.back() - boundaries.front();
  const auto converged = [&] {
    for (std::size_t slot = 0; slot < opt.control.size(); ++slot) {
      const std::size_t comp = opt.control[slot];
      if (total_err[comp] > target_for(slot, comp)) return false;
    }
    return true;
  };

  while (!converged() && queue.size() < opt.max_panels) {
    Panel<N> worst = queue.top();
    queue.pop();
    if (worst.b - worst.a <= 1e-14 * span_width) {
      // Unsplittable; its error stays in the budget. If the worst panel is
      // already at width floor, nothing further can improve.
      queue.push(worst);
      break;
    }
    for (std::size_t i = 0; i < N; ++i) {
      total[i] -= worst.integral[i];
      total_err[i] -= worst.error[i];
    }
    const double mid = 0.5 * (worst.a + worst.b);
    push(detail::evaluate_panel<N>(f, worst.a, mid, result.evaluations));
    push(detail::evaluate_panel<N>(f, mid, worst.b, result.evaluations));
  }
  result.converged = converged();

  // Re-sum panels in interval order so the result does not depend on the
  // refinement history round-off.
  std::vector<Panel<N>> panels;
  panels.reserve(queue.size());
  while (!queue.empty()) {
    panels.push_back(queue.top());
    queue.pop();
  }
  std::sort(panels.begin(), panels.end(),
            [](const Panel<N>& x, const Panel<N>& y) { return x.a < y.a; });
  std::vector<std::array<double, N>> integrals(panels.size());
  std::vector<std::array<double, N>> errors(panels.size());
  for (std::size_t k = 0; k < panels.size(); ++k) {
    integrals[k] = panels[k].integral;
    errors[k] = panels[k].error;
  }
  result.integral = detail::pairwise_sum<N>(integrals, 0, integrals.size());
  result.error = detail::pairwise_sum<N>(errors, 0, errors.size());
  result.panels = panels.size();
  return result;
}

}  // namespace optosqueeze
