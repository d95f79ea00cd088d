#pragma once

namespace optosqueeze {

// CODATA 2018, SI units.
inline constexpr double k_hbar = 1.054571817e-34;        // J s
inline constexpr double k_boltzmann = 1.380649e-23;      // J / K
inline constexpr double k_speed_of_light = 299792458.0;  // m / s

}  // namespace optosqueeze
