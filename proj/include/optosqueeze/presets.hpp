#pragma once

#include <numbers>
#include <vector>

#include "optosqueeze/params.hpp"

namespace optosqueeze {

/// Cavity and mechanics of the Groeblacher et al. nanomechanical
/// normal-mode-splitting experiment, the reference parameter set for this
/// library. Drive, environment and input-field values are defaults and are
/// meant to be overridden per run.
inline SystemParams groeblacher_preset() {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  SystemParams p;
  p.wavelength_lambda = 1064e-9;
  p.cavity_length_L = 25e-3;
  p.mass_m = 145e-12;
  p.kappa = two_pi * 215e3;
  p.omega_m = two_pi * 947e3;
  p.quality_Q = 6700.0;
  p.laser_power_P = 6.9e-3;
  p.temperature_T = 1e-3;
  p.squeeze_r = 0.0;
  p.squeeze_phi = 0.0;
  p.detuning_Delta0 = p.omega_m;
  return p;
}

/// One curve of a reference dataset: the detuning-sweep minimum of the
/// momentum variance at the stated input squeezing and temperature.
struct ReferenceCase {
  const char* label;
  double squeeze_r;
  double temperature;        // [K]
  double expected_min_varP;  // reference minimum
};

/// A reference figure dataset: fixed laser power, several curves.
struct ReferenceFigure {
  int figure;
  double power;  // [W]
  std::vector<ReferenceCase> cases;
};

inline constexpr double kReferenceRelTol = 0.03;
inline constexpr double kReferenceSweepLo = 0.2;  // x omega_m
inline constexpr double kReferenceSweepHi = 3.0;  // x omega_m
inline constexpr int kReferenceSweepPoints = 160;

inline const std::vector<ReferenceFigure>& reference_figures() {
  static const std::vector<ReferenceFigure> figures = {
      {2,
       6.9e-3,
       {{"r=0", 0.0, 1e-3, 1.071},
        {"r=0.5", 0.5, 1e-3, 0.467},
        {"r=1", 1.0, 1e-3, 0.319},
        {"r=1.5", 1.5, 1e-3, 0.468},
        {"r=2", 2.0, 1e-3, 1.078}}},
      {3,
       0.6e-3,
       {{"T=0", 1.0, 0.0, 0.252},
        {"T=1mK", 1.0, 1e-3, 0.611},
        {"T=5mK", 1.0, 5e-3, 2.082},
        {"T=10mK", 1.0, 10e-3, 3.919}}},
      {4,
       3.8e-3,
       {{"T=0", 1.0, 0.0, 0.261},
        {"T=1mK", 1.0, 1e-3, 0.330},
        {"T=10mK", 1.0, 10e-3, 0.968}}},
      {5,
       6.9e-3,
       {{"T=0", 1.0, 0.0, 0.275},
        {"T=1mK", 1.0, 1e-3, 0.319},
        {"T=10mK", 1.0, 10e-3, 0.731}}},
  };
  return figures;
}

}  // namespace optosqueeze
