#pragma once

#include <cstdint>

namespace radcool {

// Single-sided resonator in a hot environment, radiatively coupled to the
// readout circuit. Coupling rates are stored as ordinary frequencies
// (kappa/2pi, Hz), the convention they are quoted in; spectral formulas are
// written so no angular conversion is ever needed on a Hz grid.
struct ResonatorParams {
  double f0_hz = 0.0;       // resonance frequency
  double kappa_i_hz = 0.0;  // intrinsic rate, into the physical environment
  double kappa_e_hz = 0.0;  // external rate, into the readout/bus circuit

  double kappa_hz() const { return kappa_i_hz + kappa_e_hz; }
  void validate() const;
};

// Lossy source-to-resonator transmission line in the beam-splitter picture:
// power transmission lambda, distributed loss at effective occupancy
// n_eff_link. The added-noise floor (1-lambda)*n_eff_link is what bounds the
// coldest reachable external bath.
struct LinkParams {
  double lambda = 1.0;
  double n_eff_link = 0.0;

  double noise_floor() const { return (1.0 - lambda) * n_eff_link; }
  void validate() const;
};

// A thermal bath given either by physical temperature or directly by mean
// photon occupancy. Conversion is frequency dependent, so both accessors
// take the frequency of interest.
class ThermalBath {
 public:
  ThermalBath() = default;
  static ThermalBath from_temperature(double kelvin);
  static ThermalBath from_occupancy(double n);

  bool has_temperature() const { return temperature_k_ >= 0.0; }
  bool is_set() const { return temperature_k_ >= 0.0 || occupancy_ >= 0.0; }

  double occupancy(double f_hz) const;
  double temperature(double f_hz) const;

 private:
  double temperature_k_ = -1.0;
  double occupancy_ = -1.0;
};

// Output line abstracted to a power gain and an input-referred added noise.
struct AmplifierChain {
  double gain = 1.0;    // power gain, linear
  double n_add = 0.0;   // quanta, referred to the chain input

  void validate() const;
};

// Detection settings plus the two instrument imperfections modeled:
// circulator leakage (Fano distortion of the lineshape) and the finite
// detuning used for the off-resonance reference.
struct MeasurementConfig {
  double resolution_bandwidth_hz = 10e3;
  std::uint64_t averages = 100000;  // averaged power estimates per point
  double leakage_amplitude = 0.0;   // field amplitude of circulator feed-through
  double leakage_phase_rad = 0.0;
  double detune_off_hz = 0.0;       // resonance shift for the off spectrum; 0 = auto (30 kappa)

  void validate() const;
};

}  // namespace radcool
