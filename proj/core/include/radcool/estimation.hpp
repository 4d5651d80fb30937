#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "radcool/spectrum.hpp"
#include "radcool/types.hpp"

namespace radcool {

// Generic nonlinear/linear fit summary. `covariance` is row-major p x p and
// symmetric positive semidefinite when converged.
struct FitReport {
  std::vector<std::string> parameter_names;
  std::vector<double> parameters;
  std::vector<double> covariance;
  double residual_norm = 0.0;  // root-mean-square residual
  int iterations = 0;
  bool converged = false;

  double cov(std::size_t i, std::size_t j) const {
    return covariance[i * parameters.size() + j];
  }
  double sigma(std::size_t i) const;
};

struct ResonatorFit {
  ResonatorParams params;
  FitReport report;

  double sigma_f0() const { return report.sigma(0); }
  double sigma_kappa_i() const { return report.sigma(1); }
  double sigma_kappa_e() const { return report.sigma(2); }
  double cov_kappa_ie() const { return report.cov(1, 2); }
};

// Detector power gain and added noise referred to a stated reference plane
// ("resonator-output" for the output-line calibration, "source-output" for
// the thermal-source calibration).
struct CalibrationResult {
  double gain = 0.0;
  double n_add = 0.0;
  double sigma_gain = 0.0;
  double sigma_n_add = 0.0;
  double cov_gain_n_add = 0.0;
  std::string reference_plane;
  double frequency_hz = 0.0;
};

// One noise-thermometry sweep point: known stage temperature against the
// raw detected PSD at the calibration frequency.
struct ThermometryPoint {
  double temperature_k = 0.0;
  double raw_psd = 0.0;
  double sigma = 0.0;  // 0 = unknown, regression falls back to uniform weights
};

// Source-to-resonator link deduced from paired gain calibrations. The
// noise-floor interval is asymmetric when the physical floor at zero
// truncates the lower side.
struct LinkCalibration {
  LinkParams link;
  double sigma_lambda = 0.0;
  double noise_floor = 0.0;  // (1-lambda)*n_eff_link
  double floor_sigma_up = 0.0;
  double floor_sigma_down = 0.0;
};

struct DeltaNEstimate {
  double value = 0.0;
  double sigma = 0.0;
};

struct KappaUncertainty {
  double sigma_kappa_i = 0.0;
  double sigma_kappa_e = 0.0;
  double cov_kappa_ie = 0.0;
};

// Deduced occupancy difference and mode occupancy with first-order
// propagated uncertainties, plus a record of the inputs used.
struct OccupancyEstimate {
  double delta_n = 0.0;
  double n_mode = 0.0;
  double sigma_delta_n = 0.0;
  double sigma_n_mode = 0.0;
  bool heating = false;           // delta_n < 0
  bool negative_central = false;  // n_mode < 0 (uncertainty permitting)
  struct {
    double kappa_i_hz = 0.0;
    double kappa_e_hz = 0.0;
    double n_en = 0.0;
  } inputs;
};

// Fits (f0, kappa_i, kappa_e) to a complex coherent-probe reflection trace.
// The probe must span at least five estimated linewidths with >= 30 points.
// Non-convergence is flagged in the report, not thrown.
ResonatorFit fit_reflection(const ComplexSpectrum& probe);

// Weighted linear regression of raw detected PSD against the bath occupancy
// at the sweep temperatures: raw = G*(n(T) + 1/2 + n_add). Needs >= 3
// distinct temperatures spanning a factor >= 2 in occupancy.
CalibrationResult fit_noise_thermometry(const std::vector<ThermometryPoint>& sweep,
                                        double f_hz,
                                        std::string reference_plane);

// lambda = G_source / G_resonator; the link noise floor follows from the
// beam-splitter algebra on the two added-noise values,
// (1-lambda)*n_eff_link = lambda*n_add_src - n_add_res - (1-lambda)/2,
// floored at zero.
LinkCalibration link_transmission(const CalibrationResult& g_source,
                                  const CalibrationResult& g_resonator);

// Occupancy difference from the integral of the on/off spectrum difference,
// scaled by kappa/(2 pi kappa_e kappa_i) and corrected for the finite
// window (and, when `off_detune_hz` is given, for the Lorentzian tail the
// detuned off-reference leaves in the window). Both spectra must be in
// quanta on the same grid spanning >= 10 linewidths.
DeltaNEstimate extract_delta_n(const Spectrum& s_out, const Spectrum& s_out_off,
                               const ResonatorParams& res,
                               std::optional<double> off_detune_hz = {});

// n_mode = n_en - (kappa_e/kappa) * delta_n with first-order uncertainty
// propagation. A negative central value is allowed and flagged.
OccupancyEstimate deduce_mode_occupancy(double n_en, double sigma_n_en,
                                        const DeltaNEstimate& delta_n,
                                        const ResonatorParams& res,
                                        const KappaUncertainty& kappa_u = {});

// Source temperature at which the external bath matches the environment
// occupancy (the cooling/heating transition): solves
// lambda*n_s + (1-lambda)*n_eff_link = n_en for T_s.
double transition_source_temperature(double n_en, const LinkParams& link,
                                     double f_hz);

}  // namespace radcool
