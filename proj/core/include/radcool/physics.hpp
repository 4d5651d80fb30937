#pragma once

#include <complex>
#include <vector>

#include "radcool/spectrum.hpp"
#include "radcool/types.hpp"

namespace radcool {

// Mean photon number of a bath at temperature T and frequency f,
// n = 1/(exp(hf/kT) - 1). Occupancies below 1e-300 return 0 exactly.
double bose_einstein_occupancy(double f_hz, double temperature_k);

// Inverse map: T = hf / (kB ln(1 + 1/n)). Round-trips with the above to
// better than 1e-12 relative.
double occupancy_to_temperature(double f_hz, double occupancy);

// Steady-state mode occupancy of a mode thermalizing to its environment
// (rate kappa_i, occupancy n_en) and to the external bath (rate kappa_e,
// occupancy n_in): the rate-weighted convex combination.
double mode_occupancy(const ResonatorParams& res, double n_en, double n_in);

// Effective external-bath occupancy behind a lossy link:
// lambda*n_s + (1-lambda)*n_eff_link.
double external_bath_occupancy(const LinkParams& link, double n_s);

// Power transmission from the environment through the resonator into the
// line: Lorentzian peaked at resonance with FWHM kappa, peak value
// 4*kappa_i*kappa_e/kappa^2.
double transmission_at(const ResonatorParams& res, double detuning_hz);

// Power reflection of the single-sided resonator, 1 - transmission.
double reflection_at(const ResonatorParams& res, double detuning_hz);

// Complex field reflection coefficient, |s11|^2 == reflection.
std::complex<double> reflection_s11_at(const ResonatorParams& res,
                                       double detuning_hz);

// Symmetrized output noise PSD in quanta: R*n_in + T*n_en + 1/2.
// Far off resonance it settles at the baseline n_in + 1/2; on resonance it
// shows a peak when n_en > n_in (radiative cooling) and a dip when
// n_en < n_in (radiative heating).
double output_noise_at(const ResonatorParams& res, double n_en, double n_in,
                       double detuning_hz);
double output_baseline(double n_in);

// Intracavity amplitude PSD in quanta/Hz, normalized so that integrating
// over the Hz grid yields the mode occupancy.
double intracavity_at(const ResonatorParams& res, double n_en, double n_in,
                      double detuning_hz);
double intracavity_peak(const ResonatorParams& res, double n_en, double n_in);

Spectrum transmission_spectrum(const ResonatorParams& res,
                               std::vector<double> detuning_hz);
Spectrum reflection_spectrum(const ResonatorParams& res,
                             std::vector<double> detuning_hz);
ComplexSpectrum reflection_s11(const ResonatorParams& res,
                               std::vector<double> detuning_hz);
Spectrum output_noise_psd(const ResonatorParams& res, double n_en,
                          double n_in, std::vector<double> detuning_hz);
Spectrum intracavity_psd(const ResonatorParams& res, double n_en, double n_in,
                         std::vector<double> detuning_hz);

// Fraction of a unit-area resonance Lorentzian of width kappa captured by
// the window [lo, hi] of detunings: (atan(2*hi/k) - atan(2*lo/k)) / pi.
double captured_fraction(double kappa_hz, double lo_hz, double hi_hz);

}  // namespace radcool
