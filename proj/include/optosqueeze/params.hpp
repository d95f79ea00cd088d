#pragma once

#include <cmath>
#include <complex>
#include <numbers>

#include "optosqueeze/constants.hpp"
#include "optosqueeze/errors.hpp"

namespace optosqueeze {

/// User-facing physical inputs, SI units throughout. All rates and
/// frequencies are angular (rad/s).
struct SystemParams {
  double wavelength_lambda = 0.0;  // laser wavelength [m]
  double cavity_length_L = 0.0;    // cavity length [m]
  double mass_m = 0.0;             // effective mirror mass [kg]
  double kappa = 0.0;              // cavity amplitude decay rate [rad/s]
  double omega_m = 0.0;            // mechanical frequency [rad/s]
  double quality_Q = 0.0;          // mechanical quality factor omega_m / gamma_m
  double laser_power_P = 0.0;      // drive power [W]
  double temperature_T = 0.0;      // environment temperature [K]
  double squeeze_r = 0.0;          // input-field squeezing magnitude
  double squeeze_phi = 0.0;        // input-field squeezing phase [rad]
  double detuning_Delta0 = 0.0;    // bare cavity-laser detuning [rad/s]
};

/// Quantities computed once from SystemParams and consumed everywhere else.
/// The cavity frequency never appears on its own: the coupling and drive
/// amplitude are evaluated at the laser frequency (the detuning correction
/// is ~1e-9 relative and ignored).
struct DerivedParams {
  double omega_L = 0.0;             // laser angular frequency [rad/s]
  double omega_m = 0.0;             // [rad/s]
  double kappa = 0.0;               // [rad/s]
  double gamma_m = 0.0;             // mechanical momentum decay rate [rad/s]
  double g = 0.0;                   // optomechanical coupling [1/s]
  double epsilon = 0.0;             // cavity drive amplitude [1/s]
  double N = 0.0;                   // squeezed-input occupation, sinh^2 r
  std::complex<double> M{0.0, 0.0}; // squeezed-input correlation, sinh r cosh r e^{i phi}
  double temperature = 0.0;         // [K]
};

/// Validates all SystemParams invariants; throws ValidationError naming the
/// first offending field.
inline void validate(const SystemParams& p) {
  const auto require = [](bool ok, const char* field, const char* what) {
    if (!ok) throw ValidationError(field, what);
  };
  const auto positive = [&](double v, const char* field) {
    require(std::isfinite(v) && v > 0.0, field, "must be finite and > 0");
  };
  positive(p.wavelength_lambda, "wavelength_lambda");
  positive(p.cavity_length_L, "cavity_length_L");
  positive(p.mass_m, "mass_m");
  positive(p.kappa, "kappa");
  positive(p.omega_m, "omega_m");
  positive(p.quality_Q, "quality_Q");
  positive(p.laser_power_P, "laser_power_P");
  require(std::isfinite(p.temperature_T) && p.temperature_T >= 0.0,
          "temperature_T", "must be finite and >= 0");
  require(std::isfinite(p.squeeze_r) && p.squeeze_r >= 0.0,
          "squeeze_r", "must be finite and >= 0");
  require(std::isfinite(p.squeeze_phi), "squeeze_phi", "must be finite");
  require(std::isfinite(p.detuning_Delta0), "detuning_Delta0", "must be finite");
  // Single-mode treatment requires the mechanical frequency to sit far below
  // the cavity free spectral range.
  const double fsr_scale = k_speed_of_light / (2.0 * p.cavity_length_L);
  require(p.omega_m < 0.01 * fsr_scale, "omega_m",
          "must satisfy omega_m < 0.01 * c / (2 L)");
}

/// Computes every derived quantity. Pure: identical inputs give bit-identical
/// outputs.
inline DerivedParams derive_params(const SystemParams& p) {
  validate(p);
  DerivedParams d;
  d.omega_L = 2.0 * std::numbers::pi * k_speed_of_light / p.wavelength_lambda;
  d.omega_m = p.omega_m;
  d.kappa = p.kappa;
  d.gamma_m = p.omega_m / p.quality_Q;
  d.g = (d.omega_L / p.cavity_length_L) *
        std::sqrt(k_hbar / (2.0 * p.mass_m * p.omega_m));
  d.epsilon = std::sqrt(2.0 * p.kappa * p.laser_power_P / (k_hbar * d.omega_L));
  const double sh = std::sinh(p.squeeze_r);
  const double ch = std::cosh(p.squeeze_r);
  d.N = sh * sh;
  d.M = sh * ch * std::exp(std::complex<double>(0.0, p.squeeze_phi));
  d.temperature = p.temperature_T;
  return d;
}

}  // namespace optosqueeze
