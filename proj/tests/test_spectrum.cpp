#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "optosqueeze/presets.hpp"
#include "optosqueeze/spectrum.hpp"

using namespace optosqueeze;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

using cplx = std::complex<double>;

DerivedParams reference_derived(double power, double squeeze_r,
                                double temperature) {
  SystemParams p = groeblacher_preset();
  p.laser_power_P = power;
  p.squeeze_r = squeeze_r;
  p.temperature_T = temperature;
  return derive_params(p);
}

// Independent route to the response denominator: the determinant of
// (-i w I - A) over the drift matrix.
cplx det_route_d(const DerivedParams& d, const SteadyBranch& b, double w) {
  const DriftMatrix m = build_drift_matrix(d, b);
  Eigen::Matrix4cd probe =
      cplx(0.0, -w) * Eigen::Matrix4cd::Identity() - m.entries.cast<cplx>();
  return probe.determinant();
}

// Second, independently written evaluation of the spectral coefficients,
// using the determinant route for every denominator.
cplx oracle_A(const DerivedParams& d, const SteadyBranch& b, double w,
              const CothModel& coth) {
  const double k = d.kappa, dl = b.Delta, n = b.photon_number;
  double numer = 8.0 * k * d.g * d.g * n *
                 ((d.N + 1.0) * (k * k + (dl + w) * (dl + w)) +
                  d.N * (k * k + (dl - w) * (dl - w)));
  const double lor = dl * dl + k * k - w * w;
  numer += 2.0 * (d.gamma_m / d.omega_m) *
           coth.thermal_kernel(w, d.temperature) *
           (lor * lor + 4.0 * k * k * w * w);
  return numer / (det_route_d(d, b, w) * det_route_d(d, b, -w));
}

cplx oracle_B(const DerivedParams& d, const SteadyBranch& b, double w) {
  const double k = d.kappa, dl = b.Delta, wm = d.omega_m;
  const cplx i(0.0, 1.0);
  const cplx bracket =
      (k - i * (dl + w)) * (k - i * (dl + 2.0 * wm - w));
  return 8.0 * k * d.g * d.g * std::conj(b.cs) * std::conj(b.cs) * d.M *
         bracket / (det_route_d(d, b, w) * det_route_d(d, b, 2.0 * wm - w));
}

cplx oracle_C(const DerivedParams& d, const SteadyBranch& b, double w) {
  const double k = d.kappa, dl = b.Delta, wm = d.omega_m;
  const cplx i(0.0, 1.0);
  const cplx bracket =
      (k + i * (dl - w)) * (k + i * (dl + 2.0 * wm + w));
  return 8.0 * k * d.g * d.g * b.cs * b.cs * std::conj(d.M) * bracket /
         (det_route_d(d, b, w) * det_route_d(d, b, -2.0 * wm - w));
}

}  // namespace

TEST_CASE("thermal kernel variants", "[spectrum]") {
  const double T = 1e-3;
  const double two_kt = 2.0 * k_boltzmann * T / k_hbar;

  const CothModel hi{CothModel::Variant::high_t_approx};
  CHECK(hi.thermal_kernel(0.0, T) == two_kt);
  CHECK_THAT(hi.thermal_kernel(5.0e6, T), WithinRel(5.0e6 + two_kt, 1e-15));

  const CothModel zero{CothModel::Variant::zero_t};
  CHECK(zero.thermal_kernel(3.0e6, T) == 6.0e6);
  CHECK(zero.thermal_kernel(-3.0e6, T) == 0.0);
  CHECK(zero.thermal_kernel(0.0, T) == 0.0);

  const CothModel exact{CothModel::Variant::exact};
  // Both sides of the small-argument series switch at |x| = 1e-6 agree with
  // the analytic expansion w + (2kT/hbar)(1 + x^2/3).
  const double w_switch = 1e-6 * two_kt;
  for (double s : {0.999, 1.001, -0.999, -1.001}) {
    const double w = s * w_switch;
    const double x = w / two_kt;
    const double analytic = w + two_kt * (1.0 + x * x / 3.0);
    CHECK_THAT(exact.thermal_kernel(w, T), WithinRel(analytic, 1e-10));
  }
  // Small argument: exact ~ high-T.
  CHECK_THAT(exact.thermal_kernel(1e-3 * two_kt, T),
             WithinRel(hi.thermal_kernel(1e-3 * two_kt, T), 1e-6));
  // Large argument: exact ~ zero-T on both sides.
  CHECK_THAT(exact.thermal_kernel(40.0 * two_kt, T),
             WithinRel(zero.thermal_kernel(40.0 * two_kt, T), 1e-12));
  CHECK(std::abs(exact.thermal_kernel(-40.0 * two_kt, T)) < 1e-30);
  // T = 0 falls back to the zero-T form.
  CHECK(exact.thermal_kernel(2.5e6, 0.0) == 5.0e6);
  // Detailed-balance positivity of the kernel.
  for (double w : {-9.0e6, -2.0e2, 3.0e2, 7.0e6}) {
    CHECK(exact.thermal_kernel(w, T) > 0.0);
  }

  CHECK(CothModel::for_temperature(0.0).variant == CothModel::Variant::zero_t);
  CHECK(CothModel::for_temperature(1e-3).variant ==
        CothModel::Variant::high_t_approx);
}

TEST_CASE("free mirror variance", "[spectrum]") {
  const double wm = 2.0 * std::numbers::pi * 947e3;
  CHECK(free_mirror_variance(wm, 0.0) == 1.0);
  CHECK_THAT(free_mirror_variance(wm, 1e-3),
             WithinRel(44.01310598297652, 1e-12));
  CHECK_THAT(free_mirror_variance(wm, 10e-3),
             WithinRel(440.0560718645276, 1e-12));
}

TEST_CASE("response denominator limits", "[spectrum]") {
  DerivedParams d = reference_derived(6.9e-3, 0.0, 1e-3);
  d.g = 0.0;
  const auto branches = solve_steady_state(d, 0.9 * d.omega_m);
  const SteadyBranch& b = branches[0];
  const double k = d.kappa, dl = b.Delta, wm = d.omega_m;

  const cplx at0 = d_of_omega(d, b, 0.0);
  CHECK_THAT(at0.real(), WithinRel(wm * wm * (k * k + dl * dl), 1e-14));
  CHECK(at0.imag() == 0.0);

  const cplx km(k, -wm);
  const cplx expected = -cplx(0.0, 1.0) * d.gamma_m * wm * (km * km + dl * dl);
  const cplx at_res = d_of_omega(d, b, wm);
  CHECK_THAT(at_res.real(), WithinRel(expected.real(), 1e-12));
  CHECK_THAT(at_res.imag(), WithinRel(expected.imag(), 1e-12));
}

TEST_CASE("response denominator equals the drift-matrix determinant",
          "[spectrum]") {
  const DerivedParams d = reference_derived(6.9e-3, 1.0, 1e-3);
  const auto branches = solve_steady_state(d, d.omega_m);
  const SteadyBranch& b = branches[0];
  for (double f : {-2.4, -1.0, -0.37, 0.0, 0.3, 1.0, 1.7, 2.9}) {
    const double w = f * d.omega_m;
    const cplx direct = d_of_omega(d, b, w);
    const cplx det = det_route_d(d, b, w);
    CHECK_THAT(std::abs(direct - det), WithinAbs(0.0, 1e-12 * std::abs(det)));
  }
  // Frozen value at the mechanical resonance.
  const cplx at_wm = d_of_omega(d, b, d.omega_m);
  CHECK_THAT(at_wm.real(), WithinRel(-1.221241635483666e26, 1e-10));
  CHECK_THAT(at_wm.imag(), WithinRel(9.064204533201631e21, 1e-6));
}

TEST_CASE("spectral coefficients against the independent route", "[spectrum]") {
  const DerivedParams d = reference_derived(6.9e-3, 1.0, 1e-3);
  const auto branches = solve_steady_state(d, d.omega_m);
  const SteadyBranch& b = branches[0];
  const CothModel coth = CothModel::for_temperature(d.temperature);
  for (double f : {-1.8, -1.0, -0.2, 0.45, 1.0, 1.55, 2.6}) {
    const double w = f * d.omega_m;
    const cplx a = coefficient_A(d, b, w, coth, d.N);
    const cplx bb = coefficient_B(d, b, w, d.M);
    const cplx cc = coefficient_C(d, b, w, d.M);
    CHECK_THAT(std::abs(a - oracle_A(d, b, w, coth)),
               WithinAbs(0.0, 1e-10 * std::abs(a)));
    CHECK_THAT(std::abs(bb - oracle_B(d, b, w)),
               WithinAbs(0.0, 1e-10 * std::abs(bb)));
    CHECK_THAT(std::abs(cc - oracle_C(d, b, w)),
               WithinAbs(0.0, 1e-10 * std::abs(cc)));
  }
}

TEST_CASE("frozen coefficient values at the mechanical resonance",
          "[spectrum]") {
  const DerivedParams d = reference_derived(6.9e-3, 1.0, 1e-3);
  const auto branches = solve_steady_state(d, d.omega_m);
  const SteadyBranch& b = branches[0];
  const CothModel coth = CothModel::for_temperature(d.temperature);
  const double w = d.omega_m;

  const cplx a = coefficient_A(d, b, w, coth, d.N);
  CHECK_THAT(a.real(), WithinRel(2.167136114853337e-19, 1e-10));
  CHECK(a.imag() == 0.0);  // d(w) d(-w) is real on the real axis

  const cplx bb = coefficient_B(d, b, w, d.M);
  CHECK_THAT(bb.real(), WithinRel(1.580803737056366e-19, 1e-10));
  CHECK_THAT(bb.imag(), WithinRel(-3.829576833432005e-20, 1e-10));

  const cplx cc = coefficient_C(d, b, w, d.M);
  CHECK_THAT(cc.real(), WithinRel(-2.037446318741551e-23, 1e-10));
  CHECK_THAT(cc.imag(), WithinRel(5.444021169413481e-23, 1e-10));
}

TEST_CASE("vacuum input at zero temperature keeps only the bare sidebands",
          "[spectrum]") {
  // N = 0, T = 0, w > 0: the (N+1)-weighted sideband plus the thermal term
  // with its factor-2 kernel are all that survive.
  const DerivedParams d = reference_derived(6.9e-3, 0.0, 0.0);
  const auto branches = solve_steady_state(d, d.omega_m);
  const SteadyBranch& b = branches[0];
  const CothModel zero{CothModel::Variant::zero_t};
  const double k = d.kappa, dl = b.Delta;
  for (double f : {0.4, 1.0, 1.9}) {
    const double w = f * d.omega_m;
    const cplx a = coefficient_A(d, b, w, zero, 0.0);
    const double lor = dl * dl + k * k - w * w;
    const double numer =
        8.0 * k * d.g * d.g * b.photon_number *
            (k * k + (dl + w) * (dl + w)) +
        2.0 * (d.gamma_m / d.omega_m) * (2.0 * w) *
            (lor * lor + 4.0 * k * k * w * w);
    const cplx expected = numer / (d_of_omega(d, b, w) * d_of_omega(d, b, -w));
    CHECK_THAT(a.real(), WithinRel(expected.real(), 1e-12));
  }
}

TEST_CASE("squeezing coefficients vanish without squeezing", "[spectrum]") {
  const DerivedParams d = reference_derived(6.9e-3, 0.0, 1e-3);
  const auto branches = solve_steady_state(d, d.omega_m);
  const SteadyBranch& b = branches[0];
  CHECK(coefficient_B(d, b, 0.7 * d.omega_m, d.M) == cplx(0.0, 0.0));
  CHECK(coefficient_C(d, b, 0.7 * d.omega_m, d.M) == cplx(0.0, 0.0));
}

TEST_CASE("conjugation relation C(w) = conj(B(-w))", "[spectrum]") {
  SystemParams p = groeblacher_preset();
  p.squeeze_r = 1.0;
  p.squeeze_phi = 0.7;  // must hold for any squeezing phase
  const DerivedParams d = derive_params(p);
  const auto branches = solve_steady_state(d, d.omega_m);
  const SteadyBranch& b = branches[0];
  for (double f : {-2.3, -1.0, -0.31, 0.0, 0.64, 1.0, 2.9}) {
    const double w = f * d.omega_m;
    const cplx lhs = coefficient_C(d, b, w, d.M);
    const cplx rhs = std::conj(coefficient_B(d, b, -w, d.M));
    CHECK_THAT(std::abs(lhs - rhs), WithinAbs(0.0, 1e-12 * std::abs(lhs)));
  }
}

TEST_CASE("decoupled coefficient A is the bare Brownian spectrum",
          "[spectrum]") {
  DerivedParams d = reference_derived(6.9e-3, 0.0, 1e-3);
  d.g = 0.0;
  const auto branches = solve_steady_state(d, 0.8 * d.omega_m);
  const SteadyBranch& b = branches[0];
  const CothModel coth{CothModel::Variant::high_t_approx};
  for (double f : {0.2, 0.96, 1.0, 1.04, 2.5}) {
    const double w = f * d.omega_m;
    const cplx a = coefficient_A(d, b, w, coth, d.N);
    // Thermal-only closed form: the cavity factors cancel between numerator
    // and |d|^2, leaving the mechanical susceptibility squared.
    const double wm = d.omega_m;
    const double denom = (wm * wm - w * w) * (wm * wm - w * w) +
                         d.gamma_m * d.gamma_m * w * w;
    const double expected = 2.0 * (d.gamma_m / wm) *
                            coth.thermal_kernel(w, d.temperature) / denom;
    CHECK_THAT(a.real(), WithinRel(expected, 1e-10));
  }
}

TEST_CASE("variance at the reference point on a fixed window", "[spectrum]") {
  // Composition of the public coefficient functions, integrated over exactly
  // [-w0, w0], w0 = omega_m + 50 kappa, cross-checked against an independent
  // adaptive integration of the same integrals (frozen).
  const DerivedParams d = reference_derived(6.9e-3, 1.0, 1e-3);
  const auto branches = solve_steady_state(d, d.omega_m);
  const SteadyBranch& b = branches[0];
  const CothModel coth = CothModel::for_temperature(d.temperature);
  const double wm = d.omega_m;
  const auto f = [&](double w) -> std::array<double, 4> {
    const cplx a = coefficient_A(d, b, w, coth, d.N);
    const cplx bb = coefficient_B(d, b, w, d.M);
    const cplx cc = coefficient_C(d, b, w, d.M);
    const cplx iq = wm * wm * (a + bb + cc);
    const cplx ip = w * w * a + w * (w - 2.0 * wm) * bb + w * (w + 2.0 * wm) * cc;
    return {iq.real(), iq.imag(), ip.real(), ip.imag()};
  };
  const double w0 = wm + 50.0 * d.kappa;
  std::vector<double> bounds = {-w0, -2.0 * wm, -b.Delta, -wm, 0.0,
                                wm, b.Delta, 2.0 * wm, w0};
  std::sort(bounds.begin(), bounds.end());
  QuadratureOptions opt;
  opt.rel_tol = 1e-9;
  opt.control = {0, 2};
  const auto r = integrate_adaptive<4>(f, bounds, opt);
  REQUIRE(r.converged);
  constexpr double two_pi = 2.0 * std::numbers::pi;
  CHECK_THAT(r.integral[0] / two_pi, WithinRel(7.76323555, 2e-7));
  CHECK_THAT(r.integral[2] / two_pi, WithinRel(0.35949907, 1e-6));
}

TEST_CASE("variance_QP at the reference point", "[spectrum]") {
  const DerivedParams d = reference_derived(6.9e-3, 1.0, 1e-3);
  const auto branches = solve_steady_state(d, d.omega_m);
  const SteadyBranch& b = branches[0];
  const CothModel coth = CothModel::for_temperature(d.temperature);

  const VarianceResult v = variance_QP(d, b, coth, 1e-7);
  CHECK_THAT(v.varQ, WithinRel(7.7632363, 1e-6));
  // Window-escalated momentum variance; the fixed-window value 0.359499
  // gains ~2.4e-4 of slowly decaying tail once the window converges.
  CHECK(v.varP > 0.3596);
  CHECK(v.varP < 0.3600);

  CHECK(v.imag_residual_Q < 1e-6 * v.varQ);
  CHECK(v.imag_residual_P < 1e-6 * v.varP);
  CHECK(v.quad_error_Q <= 1e-7 * v.varQ);
  CHECK(v.quad_error_P <= 1e-7 * v.varP);
  CHECK(v.varQ * v.varP >= 1.0 - 1e-6);
  CHECK(v.omega_max >= d.omega_m + 50.0 * d.kappa);
  CHECK(v.evaluations > 0);

  // Determinism.
  const VarianceResult w = variance_QP(d, b, coth, 1e-7);
  CHECK(v.varQ == w.varQ);
  CHECK(v.varP == w.varP);
}

TEST_CASE("tolerance halving stays within the reported error", "[spectrum]") {
  const DerivedParams d = reference_derived(6.9e-3, 1.0, 1e-3);
  const auto branches = solve_steady_state(d, d.omega_m);
  const SteadyBranch& b = branches[0];
  const CothModel coth = CothModel::for_temperature(d.temperature);
  const VarianceResult a = variance_QP(d, b, coth, 2e-7);
  const VarianceResult c = variance_QP(d, b, coth, 1e-7);
  CHECK(std::abs(a.varQ - c.varQ) <=
        a.quad_error_Q + c.quad_error_Q + a.trunc_error_Q + c.trunc_error_Q);
  CHECK(std::abs(a.varP - c.varP) <=
        a.quad_error_P + c.quad_error_P + a.trunc_error_P + c.trunc_error_P);
}

TEST_CASE("decoupled variance approaches the oscillator baseline at high T",
          "[spectrum]") {
  DerivedParams d = reference_derived(6.9e-3, 0.0, 1e-3);
  d.g = 0.0;
  const auto branches = solve_steady_state(d, d.omega_m);
  const CothModel coth{CothModel::Variant::high_t_approx};
  const VarianceResult v = variance_QP(d, branches[0], coth, 1e-7);
  // High-temperature kernel, so slightly below the exact 44.013 baseline.
  CHECK_THAT(v.varQ, WithinRel(44.013106, 1.5e-3));
  CHECK_THAT(v.varP, WithinRel(44.013106, 1.5e-3));
}

TEST_CASE("variance rejects unstable branches and bad tolerances",
          "[spectrum]") {
  const DerivedParams d = reference_derived(6.9e-3, 0.0, 1e-3);
  const auto blue = solve_steady_state(d, -0.5 * d.omega_m);
  REQUIRE_FALSE(blue[0].stable);
  const CothModel coth = CothModel::for_temperature(d.temperature);
  CHECK_THROWS_AS(variance_QP(d, blue[0], coth, 1e-7), UnstableBranchError);

  const auto red = solve_steady_state(d, d.omega_m);
  CHECK_THROWS_AS(variance_QP(d, red[0], coth, 1e-2), ValidationError);
  CHECK_THROWS_AS(variance_QP(d, red[0], coth, 1e-11), ValidationError);
}

TEST_CASE("heavily damped zero-T tail escalation gives up honestly",
          "[spectrum]") {
  // gamma_m / omega_m = 0.02 makes the logarithmic momentum tail large
  // enough (relative ~8e-3 per octave) that neither the truncation target
  // nor the slow-tail detector can accept it before the window cap.
  SystemParams p = groeblacher_preset();
  p.quality_Q = 50.0;
  p.temperature_T = 0.0;
  p.laser_power_P = 1e-6;
  const DerivedParams d = derive_params(p);
  const auto branches = solve_steady_state(d, d.omega_m);
  REQUIRE(branches[0].stable);
  const CothModel coth{CothModel::Variant::zero_t};
  CHECK_THROWS_AS(variance_QP(d, branches[0], coth, 1e-7),
                  TailNotConvergedError);
}
