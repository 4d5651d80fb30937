#pragma once

#include <cstdint>
#include <optional>

#include "radcool/estimation.hpp"
#include "radcool/instrument.hpp"
#include "radcool/scenario.hpp"

namespace radcool {

// Output of the calibration phase: fitted resonator, the two gain
// calibrations and the deduced link, plus the synthetic measurements they
// came from (persisted by the CLI as data files).
struct CalibratedSetup {
  ResonatorFit fit;
  CalibrationResult g0;  // resonator-output plane
  CalibrationResult gs;  // source-output plane
  LinkCalibration link;
  ComplexSpectrum probe;
  std::vector<ThermometryPoint> env_sweep;
  std::vector<ThermometryPoint> src_sweep;
};

// One synthetic measurement turned into an occupancy estimate, next to the
// ground truth it was generated from.
struct ExperimentResult {
  CalibratedSetup setup;
  Spectrum on_raw;
  Spectrum off_raw;
  DeltaNEstimate delta_n;
  OccupancyEstimate estimate;
  double n_en_true = 0.0;
  double n_in_true = 0.0;
  double n_mode_true = 0.0;
  double t_source_k = 0.0;
};

// Probe fit plus the two noise-thermometry sweeps. The environment-sweep
// slope is G*T(0) and is referred to the resonator output by dividing out
// the fitted transmission peak; the resonator-plane added noise and the
// link floor are solved jointly by a short fixed-point iteration since each
// needs the other.
CalibratedSetup calibrate_setup(const Scenario& scenario, std::uint64_t seed);

// Measure on/off spectra at the given source point, convert to quanta with
// the calibrated gain, extract the occupancy difference and deduce the mode
// occupancy. The calibrated-gain relative error enters the estimate's
// uncertainty as a fully correlated term.
ExperimentResult measure_and_extract(const Scenario& scenario,
                                     const CalibratedSetup& setup,
                                     const ThermalBath& source_point,
                                     std::uint64_t seed);

// Full synthetic experiment at the scenario's operating point.
ExperimentResult run_synthetic_experiment(const Scenario& scenario,
                                          std::uint64_t seed);

}  // namespace radcool
