#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "radcool/types.hpp"

namespace radcool {

// Frequency window given either in absolute Hz or in linewidth multiples.
struct WindowSpec {
  double half_span_hz = 0.0;      // takes precedence when > 0
  double half_span_kappa = 0.0;
  std::size_t points = 0;

  double resolve_hz(double kappa_hz) const {
    return half_span_hz > 0.0 ? half_span_hz : half_span_kappa * kappa_hz;
  }
};

struct CalibrationSpec {
  std::vector<double> temperatures_k = {0.2, 0.4, 0.7, 1.0, 1.4};
  std::uint64_t averages = 40000;
};

// Full experimental configuration: resonator, the two baths, the lossy
// source link, the detection chain, and the windows used for simulation and
// for the coherent probe.
struct Scenario {
  ResonatorParams resonator;
  ThermalBath environment;
  ThermalBath source;
  std::vector<double> source_sweep_k;  // optional sweep of source temperatures
  LinkParams link;
  AmplifierChain amplifier{1e6, 8.0};
  MeasurementConfig measurement;
  WindowSpec grid{0.0, 15.0, 601};
  WindowSpec probe_window{0.0, 10.0, 201};
  double probe_noise_sigma = 0.004;
  CalibrationSpec calibration;
  std::uint64_t seed = 1;

  void validate() const;

  double n_en() const;
  double n_s() const;   // requires a source point
  double n_in() const;  // through the link
  bool has_source_point() const { return source.is_set(); }

  std::vector<double> detuning_grid() const;
  std::vector<double> probe_grid() const;
};

Scenario parse_scenario_text(const std::string& text, const std::string& name);
Scenario parse_scenario_file(const std::string& path);

// Stable full-precision echo of a scenario; parsing it back reproduces the
// scenario exactly. Basis for the digest and for run-record replay.
std::string canonical_scenario_text(const Scenario& s);

// FNV-1a 64-bit over the canonical text.
std::uint64_t scenario_digest(const Scenario& s);

}  // namespace radcool
