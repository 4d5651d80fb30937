#pragma once

#include <cstdint>
#include <vector>

#include "radcool/estimation.hpp"
#include "radcool/spectrum.hpp"
#include "radcool/types.hpp"

namespace radcool {

// Detection through the amplifier chain: each point is drawn with mean
// G*(S + n_add) and standard deviation mean/sqrt(averages) (radiometer
// model); the sigma column is populated with that deviation. Deterministic
// for a fixed seed.
Spectrum measure_spectrum(const Spectrum& ideal, const AmplifierChain& amp,
                          const MeasurementConfig& cfg, std::uint64_t seed);

// Output PSD with circulator feed-through: the input noise reaches the
// detector both via reflection and via a direct leakage path of amplitude
// eps*exp(i*phi), so the coherent weight becomes |s11 + eps e^{i phi}|^2 and
// the lineshape turns into an asymmetric (Fano) resonance. Reduces exactly
// to output_noise_psd at zero leakage.
Spectrum apply_circulator_leakage(const ResonatorParams& res, double n_en,
                                  double n_in, const MeasurementConfig& cfg,
                                  std::vector<double> detuning_hz);

// The same model evaluated with the resonance parked detune_off away from
// the window (the off-resonance reference condition).
Spectrum off_resonance_ideal(const ResonatorParams& res, double n_en,
                             double n_in, const MeasurementConfig& cfg,
                             std::vector<double> detuning_hz);

// Detected off-resonance reference: flat baseline G*(n_in + 1/2 + n_add)
// plus averaging noise and the residual Lorentzian tail of the detuned
// resonance. Requires detune_off >= 30 kappa.
Spectrum off_resonance_spectrum(const ResonatorParams& res, double n_en,
                                double n_in, const AmplifierChain& amp,
                                const MeasurementConfig& cfg,
                                std::vector<double> detuning_hz,
                                std::uint64_t seed);

// Coherent-probe reflection trace with additive complex noise of the given
// per-quadrature sigma.
ComplexSpectrum synth_probe(const ResonatorParams& res,
                            std::vector<double> detuning_hz, double noise_sigma,
                            std::uint64_t seed);

// Noise-thermometry sweeps. The environment sweep reads the detected PSD at
// zero detuning while the stage temperature varies: the thermal signal
// reaches the line through the resonator transmission, so the regression
// slope is G * T(0). The source sweep is taken with the resonance detuned
// away (off-reference condition), so the slope is G * lambda (up to the
// leakage factor and the Lorentzian tail, both included here).
std::vector<ThermometryPoint> synth_environment_sweep(
    const ResonatorParams& res, double n_in, const AmplifierChain& amp,
    const MeasurementConfig& cfg, const std::vector<double>& temperatures_k,
    std::uint64_t averages, std::uint64_t seed);

std::vector<ThermometryPoint> synth_source_sweep(
    const ResonatorParams& res, const LinkParams& link, double n_en,
    const AmplifierChain& amp, const MeasurementConfig& cfg,
    const std::vector<double>& temperatures_k, std::uint64_t averages,
    std::uint64_t seed);

// Off-spectrum detuning actually used: cfg value, or 30 kappa when unset.
double effective_detune_off(const ResonatorParams& res,
                            const MeasurementConfig& cfg);

}  // namespace radcool
