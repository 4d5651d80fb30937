#pragma once

namespace radcool::constants {

// 2019 SI exact values.
inline constexpr double planck = 6.62607015e-34;    // J s
inline constexpr double boltzmann = 1.380649e-23;   // J / K

inline constexpr double pi = 3.14159265358979323846;
inline constexpr double two_pi = 2.0 * pi;

// Occupancies below this clamp to zero (deep-cryogenic inputs otherwise
// produce subnormals).
inline constexpr double occupancy_underflow = 1e-300;

}  // namespace radcool::constants
