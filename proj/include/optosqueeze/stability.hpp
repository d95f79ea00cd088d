#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>

#include <Eigen/Core>
#include <Eigen/Eigenvalues>

namespace optosqueeze {

/// Linearized drift matrix in the quadrature basis
/// (delta Q, delta P, delta x, delta y). Entries carry rad/s scale.
struct DriftMatrix {
  Eigen::Matrix4d entries;
};

/// Routh-Hurwitz verdict for the quartic characteristic polynomial of the
/// drift matrix. Margins are nondimensionalized (omega_m^6 and omega_m^3)
/// so they are O(1) and comparable across parameter sets.
struct StabilityVerdict {
  bool stable = false;
  bool marginal = false;   // a margin within 1e-10 of zero: reported unstable
  double rh_margin_1 = 0.0;
  double rh_margin_2 = 0.0;
  double max_eig_real = std::numeric_limits<double>::quiet_NaN();
};

/// Builds the drift matrix from the operating point. The off-diagonal
/// couplings are real combinations of the complex field amplitude; the
/// imaginary parts vanish identically and are checked before storing.
inline DriftMatrix build_drift_matrix(double omega_m, double gamma_m,
                                      double kappa, double delta, double g,
                                      std::complex<double> cs) {
  const std::complex<double> i(0.0, 1.0);
  const std::complex<double> sum = g * (cs + std::conj(cs));
  const std::complex<double> diff = -i * g * (cs - std::conj(cs));
  const double scale = g * (1.0 + std::abs(cs));
  if (std::abs(sum.imag()) > 1e-14 * scale ||
      std::abs(diff.imag()) > 1e-14 * scale) {
    throw std::invalid_argument(
        "drift-matrix couplings acquired imaginary parts");
  }
  const double gr = sum.real();   // g (cs + cs*)
  const double gi = diff.real();  // -i g (cs - cs*)
  DriftMatrix m;
  m.entries << 0.0, omega_m, 0.0, 0.0,
      -omega_m, -gamma_m, gr, gi,
      -gi, 0.0, -kappa, delta,
      gr, 0.0, -delta, -kappa;
  return m;
}

/// Evaluates the two Routh-Hurwitz inequalities for the characteristic
/// quartic s^4 + a1 s^3 + a2 s^2 + a3 s + a4 with
///   a1 = gamma_m + 2 kappa
///   a2 = S + omega_m^2 + 2 kappa gamma_m,          S = kappa^2 + delta^2
///   a3 = gamma_m S + 2 kappa omega_m^2
///   a4 = omega_m^2 S - 4 omega_m delta g^2 |cs|^2.
/// a1, a3 > 0 always for positive rates, so stability reduces to the
/// Hurwitz determinant a3 (a1 a2 - a3) - a1^2 a4 > 0 (margin 1, stored as
/// half the determinant so the leading term is kappa gamma_m S^2) and
/// a4 > 0 (margin 2, divided by omega_m).
inline StabilityVerdict routh_hurwitz(double omega_m, double gamma_m,
                                      double kappa, double delta,
                                      double g_sq_photon) {
  const double s = kappa * kappa + delta * delta;
  const double wm2 = omega_m * omega_m;
  const double m1 =
      kappa * gamma_m *
          (s * s + (2.0 * kappa * gamma_m + gamma_m * gamma_m - 2.0 * wm2) * s +
           wm2 * (4.0 * kappa * kappa + wm2 + 2.0 * kappa * gamma_m)) +
      2.0 * omega_m * delta * g_sq_photon *
          (2.0 * kappa + gamma_m) * (2.0 * kappa + gamma_m);
  const double m2 = omega_m * s - 4.0 * delta * g_sq_photon;

  StabilityVerdict v;
  v.rh_margin_1 = m1 / (wm2 * wm2 * wm2);
  v.rh_margin_2 = m2 / (wm2 * omega_m);
  constexpr double kMarginalBand = 1e-10;
  v.marginal = std::abs(v.rh_margin_1) <= kMarginalBand ||
               std::abs(v.rh_margin_2) <= kMarginalBand;
  v.stable = v.rh_margin_1 > kMarginalBand && v.rh_margin_2 > kMarginalBand;
  return v;
}

/// Largest real part over the four eigenvalues of the drift matrix.
inline double eigenvalue_check(const DriftMatrix& m) {
  if (!m.entries.allFinite()) {
    throw std::invalid_argument("drift matrix has non-finite entries");
  }
  Eigen::EigenSolver<Eigen::Matrix4d> solver(m.entries,
                                             /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("eigenvalue iteration failed to converge");
  }
  return solver.eigenvalues().real().maxCoeff();
}

}  // namespace optosqueeze
