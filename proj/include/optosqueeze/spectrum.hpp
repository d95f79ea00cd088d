#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <vector>

#include "optosqueeze/constants.hpp"
#include "optosqueeze/quadrature.hpp"
#include "optosqueeze/steady_state.hpp"

namespace optosqueeze {

/// Thermal-noise kernel model: the Brownian-force spectrum carries a factor
/// omega * (1 + coth(hbar omega / (2 kB T))).
///   exact         - full coth, series expansion below |x| = 1e-6
///   high_t_approx - 1 + coth -> 1 + 2 kB T / (hbar omega); the product with
///                   omega is evaluated analytically (removable singularity)
///   zero_t        - coth -> sign(omega): kernel 2*omega for omega > 0, else 0
struct CothModel {
  enum class Variant { exact, high_t_approx, zero_t };
  Variant variant = Variant::exact;

  /// Model used when none is requested: the high-temperature form for T > 0
  /// and the T = 0 limit otherwise.
  static CothModel for_temperature(double temperature) {
    return CothModel{temperature > 0.0 ? Variant::high_t_approx
                                       : Variant::zero_t};
  }

  /// omega * (1 + coth(hbar omega / (2 kB T))) under this model.
  double thermal_kernel(double omega, double temperature) const {
    if (variant == Variant::zero_t || temperature <= 0.0) {
      return omega > 0.0 ? 2.0 * omega : 0.0;
    }
    const double two_kt_over_hbar = 2.0 * k_boltzmann * temperature / k_hbar;
    if (variant == Variant::high_t_approx) {
      return omega + two_kt_over_hbar;
    }
    const double x = omega / two_kt_over_hbar;  // hbar omega / (2 kB T)
    if (std::abs(x) < 1e-6) {
      return omega + two_kt_over_hbar * (1.0 + x * x / 3.0);
    }
    const double ax = std::abs(x);
    const double coth = 1.0 + 2.0 / std::expm1(2.0 * ax);
    return omega * (1.0 + (x > 0.0 ? coth : -coth));
  }
};

/// Interaction-picture quadrature variances with their numerical error
/// budget. quad_error_* is the in-window adaptive estimate; trunc_error_* is
/// the estimated residual of truncating the frequency integral at omega_max.
struct VarianceResult {
  double varQ = 0.0;
  double varP = 0.0;
  double imag_residual_Q = 0.0;
  double imag_residual_P = 0.0;
  double quad_error_Q = 0.0;
  double quad_error_P = 0.0;
  double trunc_error_Q = 0.0;
  double trunc_error_P = 0.0;
  double omega_max = 0.0;
  std::size_t evaluations = 0;
};

/// Response denominator of the position-fluctuation transfer function:
/// d(w) = -4 omega_m Delta g^2 |cs|^2
///        + (omega_m^2 - w^2 - i gamma_m w) [(kappa - i w)^2 + Delta^2].
/// Equals det(-i w I - A) for the drift matrix A.
inline std::complex<double> d_of_omega(const DerivedParams& d,
                                       const SteadyBranch& b, double omega) {
  const std::complex<double> i(0.0, 1.0);
  const std::complex<double> km(d.kappa, -omega);
  return -4.0 * d.omega_m * b.Delta * d.g * d.g * b.photon_number +
         (d.omega_m * d.omega_m - omega * omega - i * d.gamma_m * omega) *
             (km * km + b.Delta * b.Delta);
}

namespace detail {

// Coefficient bodies with precomputed denominators, shared between the
// public per-coefficient functions and the fused integrand.

inline std::complex<double> coeff_a(const DerivedParams& d,
                                    const SteadyBranch& b, double omega,
                                    const CothModel& coth, double big_n,
                                    std::complex<double> dw,
                                    std::complex<double> dmw) {
  const double k = d.kappa;
  const double delta = b.Delta;
  const double plus = k * k + (delta + omega) * (delta + omega);
  const double minus = k * k + (delta - omega) * (delta - omega);
  const double radiation = 8.0 * k * d.g * d.g * b.photon_number *
                           ((big_n + 1.0) * plus + big_n * minus);
  const double lor = delta * delta + k * k - omega * omega;
  const double thermal = 2.0 * d.gamma_m / d.omega_m *
                         coth.thermal_kernel(omega, d.temperature) *
                         (lor * lor + 4.0 * k * k * omega * omega);
  return (radiation + thermal) / (dw * dmw);
}

inline std::complex<double> coeff_b(const DerivedParams& d,
                                    const SteadyBranch& b, double omega,
                                    std::complex<double> big_m,
                                    std::complex<double> dw,
                                    std::complex<double> dshift) {
  const std::complex<double> i(0.0, 1.0);
  const double k = d.kappa;
  const double delta = b.Delta;
  const std::complex<double> csc = std::conj(b.cs);
  return 8.0 * k * d.g * d.g * csc * csc * big_m / (dw * dshift) *
         (k - i * (delta + omega)) * (k - i * (delta + 2.0 * d.omega_m - omega));
}

inline std::complex<double> coeff_c(const DerivedParams& d,
                                    const SteadyBranch& b, double omega,
                                    std::complex<double> big_m,
                                    std::complex<double> dw,
                                    std::complex<double> dshift) {
  const std::complex<double> i(0.0, 1.0);
  const double k = d.kappa;
  const double delta = b.Delta;
  return 8.0 * k * d.g * d.g * b.cs * b.cs * std::conj(big_m) / (dw * dshift) *
         (k + i * (delta - omega)) * (k + i * (delta + 2.0 * d.omega_m + omega));
}

}  // namespace detail

/// Symmetric spectral coefficient: radiation-pressure sidebands weighted by
/// N and N+1 plus the Brownian term, over d(w) d(-w).
inline std::complex<double> coefficient_A(const DerivedParams& d,
                                          const SteadyBranch& b, double omega,
                                          const CothModel& coth, double big_n) {
  return detail::coeff_a(d, b, omega, coth, big_n, d_of_omega(d, b, omega),
                         d_of_omega(d, b, -omega));
}

/// Squeezing cross-correlation coefficient with the d(2 omega_m - w) shift.
inline std::complex<double> coefficient_B(const DerivedParams& d,
                                          const SteadyBranch& b, double omega,
                                          std::complex<double> big_m) {
  return detail::coeff_b(d, b, omega, big_m, d_of_omega(d, b, omega),
                         d_of_omega(d, b, 2.0 * d.omega_m - omega));
}

/// Conjugate partner of B with the d(-2 omega_m - w) shift; satisfies
/// C(w) = conj(B(-w)) on the real axis.
inline std::complex<double> coefficient_C(const DerivedParams& d,
                                          const SteadyBranch& b, double omega,
                                          std::complex<double> big_m) {
  return detail::coeff_c(d, b, omega, big_m, d_of_omega(d, b, omega),
                         d_of_omega(d, b, -2.0 * d.omega_m - omega));
}

/// Variance of the free mirror coupled only to its thermal environment:
/// 1 + 2 / (exp(hbar omega_m / (kB T)) - 1); exactly 1 at T = 0.
inline double free_mirror_variance(double omega_m, double temperature) {
  if (temperature <= 0.0) return 1.0;
  return 1.0 + 2.0 / std::expm1(k_hbar * omega_m /
                                (k_boltzmann * temperature));
}

namespace detail {

// Component layout of the shared-panel integrand vector.
enum : std::size_t { kReQ = 0, kImQ = 1, kReP = 2, kImP = 3 };

template <class F>
QuadratureResult<4> integrate_window(F& f, const std::vector<double>& bounds,
                                     double rel_tol,
                                     const std::array<double, 2>& abs_target) {
  QuadratureOptions opt;
  opt.rel_tol = rel_tol;
  opt.control = {kReQ, kReP};
  opt.abs_target = {abs_target[0], abs_target[1]};
  return integrate_adaptive<4>(f, std::span<const double>(bounds), opt);
}

}  // namespace detail

/// Interaction-picture variances <dQ~^2>, <dP~^2> by adaptive quadrature of
/// the spectral coefficients over a symmetric frequency window.
///
/// The window starts at omega_m + 50 kappa with forced panel boundaries at
/// {0, +-omega_m, +-Delta, +-2 omega_m} and doubles until the added outer
/// slabs change both variances by less than max(rel_tol, 1e-4) relative.
/// The momentum integrand's thermal term decays like w^-2 under the
/// high-temperature kernel but only like 1/w under the exact and zero-T
/// kernels (a logarithmic vacuum-noise tail with coefficient
/// ~ 2 gamma_m / (pi omega_m) per e-fold, ~1e-4 here). That regime is
/// detected by consecutive slab contributions that stop decaying geometrically
/// and is reported via trunc_error_P instead of escalating forever.
inline VarianceResult variance_QP(const DerivedParams& d, const SteadyBranch& b,
                                  const CothModel& coth, double rel_tol) {
  if (!b.stable) {
    throw UnstableBranchError(
        "variance_QP: branch is unstable; fluctuation integrals diverge");
  }
  if (!(rel_tol >= 1e-10 && rel_tol <= 1e-3)) {
    throw ValidationError("tol", "must lie in [1e-10, 1e-3]");
  }

  const double wm = d.omega_m;
  const auto integrand = [&](double w) -> std::array<double, 4> {
    const std::complex<double> dw = d_of_omega(d, b, w);
    const std::complex<double> a =
        detail::coeff_a(d, b, w, coth, d.N, dw, d_of_omega(d, b, -w));
    const std::complex<double> bb =
        detail::coeff_b(d, b, w, d.M, dw, d_of_omega(d, b, 2.0 * wm - w));
    const std::complex<double> cc =
        detail::coeff_c(d, b, w, d.M, dw, d_of_omega(d, b, -2.0 * wm - w));
    const std::complex<double> iq = wm * wm * (a + bb + cc);
    const std::complex<double> ip =
        w * w * a + w * (w - 2.0 * wm) * bb + w * (w + 2.0 * wm) * cc;
    return {iq.real(), iq.imag(), ip.real(), ip.imag()};
  };

  const double omega0 = wm + 50.0 * d.kappa;
  // Escalation cap: 2^10 omega_m in the resolved-sideband regime, with room
  // for at least three doublings when kappa dominates the initial window.
  const double omega_cap = std::max(1024.0 * wm, 8.0 * omega0);

  std::vector<double> bounds;
  for (double v : {-omega0, -2.0 * wm, -std::abs(b.Delta), -wm, 0.0, wm,
                   std::abs(b.Delta), 2.0 * wm, omega0}) {
    if (v >= -omega0 && v <= omega0) bounds.push_back(v);
  }
  std::sort(bounds.begin(), bounds.end());
  bounds.erase(std::unique(bounds.begin(), bounds.end(),
                           [&](double x, double y) {
                             return std::abs(x - y) < 1e-12 * omega0;
                           }),
               bounds.end());

  QuadratureResult<4> acc =
      detail::integrate_window(integrand, bounds, rel_tol, {0.0, 0.0});
  if (!acc.converged) {
    throw QuadratureError("variance_QP: panel refinement did not converge");
  }

  const double trunc_rel = std::max(rel_tol, 1e-4);
  std::array<double, 2> trunc{0.0, 0.0};
  std::array<double, 2> prev_delta{0.0, 0.0};
  bool have_prev = false;
  bool tail_done = false;
  double omega = omega0;

  while (!tail_done) {
    if (2.0 * omega > omega_cap) {
      throw TailNotConvergedError(
          "variance_QP: frequency window cap reached before tail converged");
    }
    const std::array<double, 2> slab_target = {
        0.25 * rel_tol * std::abs(acc.integral[detail::kReQ]),
        0.25 * rel_tol * std::abs(acc.integral[detail::kReP])};
    const std::vector<double> lo_bounds = {-2.0 * omega, -omega};
    const std::vector<double> hi_bounds = {omega, 2.0 * omega};
    QuadratureResult<4> lo =
        detail::integrate_window(integrand, lo_bounds, rel_tol, slab_target);
    QuadratureResult<4> hi =
        detail::integrate_window(integrand, hi_bounds, rel_tol, slab_target);
    std::array<double, 2> delta{};
    for (std::size_t i = 0; i < 4; ++i) {
      acc.integral[i] += lo.integral[i] + hi.integral[i];
      acc.error[i] += lo.error[i] + hi.error[i];
    }
    acc.evaluations += lo.evaluations + hi.evaluations;
    delta[0] = lo.integral[detail::kReQ] + hi.integral[detail::kReQ];
    delta[1] = lo.integral[detail::kReP] + hi.integral[detail::kReP];
    omega *= 2.0;

    const double ref_q = std::abs(acc.integral[detail::kReQ]);
    const double ref_p = std::abs(acc.integral[detail::kReP]);
    const bool q_ok = std::abs(delta[0]) <= trunc_rel * ref_q;
    const bool p_ok = std::abs(delta[1]) <= trunc_rel * ref_p;
    if (q_ok && p_ok) {
      trunc = {std::abs(delta[0]), std::abs(delta[1])};
      tail_done = true;
    } else if (have_prev) {
      // Slab contributions that stop decaying geometrically while staying
      // small signal the logarithmic tail; integrating further only walks
      // the log. Stop and report the ambiguity.
      const auto log_like = [](double now, double before) {
        return std::abs(now) >= 0.7 * std::abs(before) &&
               std::abs(now) <= 1.2 * std::abs(before);
      };
      const bool q_log = q_ok || log_like(delta[0], prev_delta[0]);
      const bool p_log = p_ok || log_like(delta[1], prev_delta[1]);
      const bool small = std::abs(delta[0]) <= 1e-3 * ref_q &&
                         std::abs(delta[1]) <= 1e-3 * ref_p;
      if (q_log && p_log && small) {
        trunc = {4.0 * std::abs(delta[0]), 4.0 * std::abs(delta[1])};
        tail_done = true;
      }
    }
    prev_delta = delta;
    have_prev = true;
  }

  constexpr double two_pi = 2.0 * std::numbers::pi;
  VarianceResult r;
  r.varQ = acc.integral[detail::kReQ] / two_pi;
  r.varP = acc.integral[detail::kReP] / two_pi;
  r.imag_residual_Q = std::abs(acc.integral[detail::kImQ]) / two_pi;
  r.imag_residual_P = std::abs(acc.integral[detail::kImP]) / two_pi;
  r.quad_error_Q = acc.error[detail::kReQ] / two_pi;
  r.quad_error_P = acc.error[detail::kReP] / two_pi;
  r.trunc_error_Q = trunc[0] / two_pi;
  r.trunc_error_P = trunc[1] / two_pi;
  r.omega_max = omega;
  r.evaluations = acc.evaluations;
  if (!(r.varQ > 0.0) || !(r.varP > 0.0)) {
    throw QuadratureError("variance_QP: non-positive variance");
  }
  return r;
}

}  // namespace optosqueeze
