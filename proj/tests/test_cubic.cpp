#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "optosqueeze/cubic.hpp"

using namespace optosqueeze;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

// Independent oracle: sign-change scan + bisection over a bracket that is
// known to contain all real roots.
std::vector<double> bisection_roots(double p, double q, double r, double lo,
                                    double hi, int scan = 40000) {
  const auto f = [&](double x) { return ((x + p) * x + q) * x + r; };
  std::vector<double> roots;
  double xa = lo;
  double fa = f(xa);
  for (int k = 1; k <= scan; ++k) {
    const double xb = lo + (hi - lo) * k / scan;
    const double fb = f(xb);
    if (fa == 0.0) roots.push_back(xa);
    if (fa * fb < 0.0) {
      double a = xa, b = xb;
      for (int it = 0; it < 200; ++it) {
        const double m = 0.5 * (a + b);
        if (f(a) * f(m) <= 0.0) b = m; else a = m;
      }
      roots.push_back(0.5 * (a + b));
    }
    xa = xb;
    fa = fb;
  }
  return roots;
}

}  // namespace

TEST_CASE("cubics built from known root triples", "[cubic]") {
  const double vals[] = {-1e3, -97.0, -1.0, 0.5, 1.0, 113.0, 1e3};
  for (double r1 : vals) {
    for (double r2 : vals) {
      for (double r3 : vals) {
        if (r1 == r2 || r2 == r3 || r1 == r3) continue;
        const double p = -(r1 + r2 + r3);
        const double q = r1 * r2 + r1 * r3 + r2 * r3;
        const double r = -r1 * r2 * r3;
        const CubicRoots got = solve_cubic(p, q, r);
        REQUIRE(got.count == 3);
        std::vector<double> want = {r1, r2, r3};
        std::sort(want.begin(), want.end());
        for (int k = 0; k < 3; ++k) {
          CHECK_THAT(got.roots[k],
                     WithinAbs(want[k], 1e-9 * (1.0 + std::abs(want[k]))));
        }
      }
    }
  }
}

TEST_CASE("single real root with a complex pair", "[cubic]") {
  // (x - 2)(x^2 + x + 5): real root 2 only.
  const CubicRoots got = solve_cubic(-1.0, 3.0, -10.0);
  REQUIRE(got.count == 1);
  CHECK_FALSE(got.degenerate);
  CHECK_THAT(got.roots[0], WithinRel(2.0, 1e-12));
}

TEST_CASE("double root is reported once with the degeneracy flag", "[cubic]") {
  // (x - 1)^2 (x - 2)
  const CubicRoots got = solve_cubic(-4.0, 5.0, -2.0);
  REQUIRE(got.count == 2);
  CHECK(got.degenerate);
  CHECK_THAT(got.roots[0], WithinRel(1.0, 1e-6));
  CHECK_THAT(got.roots[1], WithinRel(2.0, 1e-6));
}

TEST_CASE("triple root collapses to one entry", "[cubic]") {
  // (x - 1)^3
  const CubicRoots got = solve_cubic(-3.0, 3.0, -1.0);
  REQUIRE(got.count == 1);
  CHECK(got.degenerate);
  CHECK_THAT(got.roots[0], WithinRel(1.0, 1e-6));
}

TEST_CASE("steady-state-shaped cubics against the bisection oracle", "[cubic]") {
  // Delta^3 - D0 Delta^2 + k^2 Delta + (K - D0 k^2) with the physical
  // magnitudes: D0 ~ 1e6..1e7, k ~ 1e6, K ~ 1e17..1e20. All real roots lie
  // in [D0 - K/k^2, D0].
  std::mt19937 rng(12345);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int three_root_cases = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const double d0 = 1e6 * std::pow(10.0, u(rng));         // 1e6..1e7
    const double k = 5e5 * std::pow(4.0, u(rng));           // 5e5..2e6
    const double bigk = 1e17 * std::pow(10.0, 3.0 * u(rng)); // 1e17..1e20
    const double p = -d0;
    const double q = k * k;
    const double r = bigk - d0 * k * k;
    const CubicRoots got = solve_cubic(p, q, r);
    const double lo = d0 - bigk / (k * k) - 1.0;
    const double hi = d0 + 1.0;
    const std::vector<double> want = bisection_roots(p, q, r, lo, hi);
    if (got.degenerate) continue;  // oracle cannot resolve tangencies
    REQUIRE(got.count == static_cast<int>(want.size()));
    if (got.count == 3) ++three_root_cases;
    for (int j = 0; j < got.count; ++j) {
      CHECK_THAT(got.roots[j], WithinAbs(want[j], 1e-6 * (k + d0)));
    }
    // Residual scaled by the bracket magnitude cubed.
    const double scale = d0 + k;
    for (int j = 0; j < got.count; ++j) {
      const double x = got.roots[j];
      const double f = ((x + p) * x + q) * x + r;
      CHECK(std::abs(f) / (scale * scale * scale) < 1e-12);
    }
  }
  // The draw ranges are chosen to hit both branches of the fold.
  CHECK(three_root_cases > 10);
  CHECK(three_root_cases < 190);
}
