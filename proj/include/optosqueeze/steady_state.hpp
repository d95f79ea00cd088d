#pragma once

#include <algorithm>
#include <complex>
#include <stdexcept>
#include <vector>

#include "optosqueeze/cubic.hpp"
#include "optosqueeze/params.hpp"
#include "optosqueeze/stability.hpp"

namespace optosqueeze {

enum class BranchPolicy {
  lowest_qs_stable,   // branch adiabatically connected to the undriven state
  highest_qs_stable,
  all,
};

/// One real solution of the steady-state equations: mean displacement Q_s,
/// effective detuning Delta = Delta0 - 2 g^2 |cs|^2 / omega_m, and field
/// amplitude cs = epsilon / (kappa + i Delta).
struct SteadyBranch {
  int index = 0;                      // position in ascending-Qs order
  double Qs = 0.0;                    // dimensionless displacement mean
  double Delta = 0.0;                 // effective detuning [rad/s]
  std::complex<double> cs{0.0, 0.0};  // steady cavity amplitude
  double photon_number = 0.0;         // |cs|^2
  double residual = 0.0;              // cubic residual / (|Delta0| + kappa)^3
  bool degenerate = false;
  bool stable = false;
  StabilityVerdict verdict;
};

/// All real branches at the given bare detuning, ascending in Q_s (so the
/// first entry is the one continuously connected to the undriven cavity).
/// The effective detuning solves the cubic
///   Delta^3 - Delta0 Delta^2 + kappa^2 Delta + (K - Delta0 kappa^2) = 0,
/// K = 2 g^2 epsilon^2 / omega_m, which is better conditioned than the
/// equivalent cubic in Q_s.
inline std::vector<SteadyBranch> solve_steady_state(const DerivedParams& d,
                                                    double delta0) {
  const double K = 2.0 * d.g * d.g * d.epsilon * d.epsilon / d.omega_m;
  const CubicRoots roots =
      solve_cubic(-delta0, d.kappa * d.kappa, K - delta0 * d.kappa * d.kappa);

  const double scale = std::abs(delta0) + d.kappa;
  std::vector<SteadyBranch> branches;
  branches.reserve(static_cast<std::size_t>(roots.count));
  for (int k = 0; k < roots.count; ++k) {
    const double delta = roots.roots[k];
    SteadyBranch b;
    b.Delta = delta;
    b.cs = d.epsilon / std::complex<double>(d.kappa, delta);
    b.photon_number = std::norm(b.cs);
    b.Qs = 2.0 * d.g * b.photon_number / d.omega_m;
    b.residual = detail::eval_cubic(-delta0, d.kappa * d.kappa,
                                    K - delta0 * d.kappa * d.kappa, delta) /
                 (scale * scale * scale);
    b.degenerate = roots.degenerate;
    b.verdict = routh_hurwitz(d.omega_m, d.gamma_m, d.kappa, delta,
                              d.g * d.g * b.photon_number);
    b.stable = b.verdict.stable;
    branches.push_back(b);
  }
  std::sort(branches.begin(), branches.end(),
            [](const SteadyBranch& a, const SteadyBranch& b) {
              return a.Qs < b.Qs;
            });
  for (std::size_t k = 0; k < branches.size(); ++k) {
    branches[k].index = static_cast<int>(k);
  }
  return branches;
}

/// Picks one branch under the given policy; throws NoStableBranchError when
/// every root fails the stability conditions. `all` is not a selection and
/// is rejected here.
inline const SteadyBranch& select_branch(
    const std::vector<SteadyBranch>& branches, BranchPolicy policy) {
  if (branches.empty()) {
    throw std::invalid_argument("select_branch: empty branch list");
  }
  if (policy == BranchPolicy::all) {
    throw std::invalid_argument(
        "select_branch: policy 'all' does not select a single branch");
  }
  if (policy == BranchPolicy::lowest_qs_stable) {
    for (const SteadyBranch& b : branches) {
      if (b.stable) return b;
    }
  } else {
    for (auto it = branches.rbegin(); it != branches.rend(); ++it) {
      if (it->stable) return *it;
    }
  }
  throw NoStableBranchError("no steady-state branch is stable");
}

inline DriftMatrix build_drift_matrix(const DerivedParams& d,
                                      const SteadyBranch& b) {
  return build_drift_matrix(d.omega_m, d.gamma_m, d.kappa, b.Delta, d.g, b.cs);
}

inline StabilityVerdict routh_hurwitz(const DerivedParams& d,
                                      const SteadyBranch& b) {
  return routh_hurwitz(d.omega_m, d.gamma_m, d.kappa, b.Delta,
                       d.g * d.g * b.photon_number);
}

}  // namespace optosqueeze
