#pragma once

// Internal unit system: time in ps, energy in meV, hbar = 1.
// All rates and frequencies are expressed in 1/ps; public interfaces
// accept SI-flavored inputs (eV, nm, K, kg/m^3, m/s) and convert once.

namespace qdemit {

inline constexpr double kHbarMeVps = 0.6582119569;       // meV ps
inline constexpr double kBoltzmannMeVperK = 0.08617333262; // meV / K

// thermal frequency theta(T) = k_B T / hbar in 1/ps
inline double thermal_frequency(double temperature_K) {
  return kBoltzmannMeVperK * temperature_K / kHbarMeVps;
}

}  // namespace qdemit
