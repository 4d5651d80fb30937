#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "radcool/spectrum.hpp"
#include "radcool/types.hpp"

namespace radcool {

enum class Discretization {
  exact_ou,        // analytic decay + matched noise; stationary variance exact for any dt
  euler_maruyama,  // kept for convergence testing
};

struct TrajectoryConfig {
  ResonatorParams res;
  double n_en = 0.0;
  double n_in = 0.0;
  double dt_s = 0.0;
  double duration_s = 0.0;
  std::uint64_t seed = 0;
  bool rotating_frame = true;  // false reports PSDs on an absolute grid
  Discretization scheme = Discretization::exact_ou;
  bool keep_samples = true;

  void validate() const;  // dt*kappa <= 0.1, duration >= 100/kappa
};

// One realization of the mode driven by the hot environment and the cold
// external bath. `output` is the input-output field a_in - sqrt(kappa_e)*a
// sampled alongside the mode, so reflected-noise interference is preserved.
struct TrajectoryResult {
  std::vector<std::complex<double>> mode;
  std::vector<std::complex<double>> output;
  double dt_s = 0.0;
  std::size_t burn_in = 0;            // samples discarded (first 10/kappa)
  double occupancy = 0.0;             // mean |a|^2 - 1/2 after burn-in
  double occupancy_std_error = 0.0;   // batch-means standard error
};

TrajectoryResult simulate_trajectory(const TrajectoryConfig& cfg);

// Welch-averaged two-sided periodogram: Hann window, 50% overlap, at least
// 8 segments. Integrating the result over its Hz grid reproduces the
// time-domain variance (Parseval).
Spectrum estimate_psd(const std::vector<std::complex<double>>& samples,
                      double dt_s, std::size_t segment,
                      GridKind grid = GridKind::detuning_hz, double f0_hz = 0.0);

// Ensemble of independently seeded trajectories, merged by pure reduction.
// PSDs are Welch-averaged across segments and trajectories.
struct OracleRun {
  std::size_t trajectories = 0;
  double occupancy = 0.0;
  double occupancy_std_error = 0.0;
  Spectrum mode_psd;
  Spectrum output_psd;
};

OracleRun run_oracle_ensemble(const TrajectoryConfig& cfg,
                              std::size_t n_trajectories,
                              std::size_t psd_segment = 4096);

// Least-squares Lorentzian-on-baseline summary of an estimated PSD:
// value(f) = baseline + height / (1 + (2(f-center)/fwhm)^2).
struct LorentzianFit {
  double baseline = 0.0;
  double height = 0.0;
  double center_hz = 0.0;
  double fwhm_hz = 0.0;
  bool converged = false;
};

LorentzianFit fit_lorentzian(const Spectrum& psd);

}  // namespace radcool
