#include "radcool/instrument.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>
#include <utility>

#include "radcool/physics.hpp"
#include "radcool/rng.hpp"

namespace radcool {

void AmplifierChain::validate() const {
  if (!(gain > 0.0)) throw std::domain_error("amplifier: gain must be positive");
  if (!(n_add >= 0.0)) throw std::domain_error("amplifier: n_add must be >= 0");
}

void MeasurementConfig::validate() const {
  if (averages < 1) throw std::domain_error("measurement: averages must be >= 1");
  if (!(resolution_bandwidth_hz > 0.0))
    throw std::domain_error("measurement: resolution bandwidth must be positive");
  if (!(leakage_amplitude >= 0.0 && leakage_amplitude < 1.0))
    throw std::domain_error("measurement: leakage amplitude must lie in [0, 1)");
  if (!(detune_off_hz >= 0.0))
    throw std::domain_error("measurement: detune_off must be >= 0");
}

double effective_detune_off(const ResonatorParams& res,
                            const MeasurementConfig& cfg) {
  return cfg.detune_off_hz > 0.0 ? cfg.detune_off_hz : 30.0 * res.kappa_hz();
}

Spectrum measure_spectrum(const Spectrum& ideal, const AmplifierChain& amp,
                          const MeasurementConfig& cfg, std::uint64_t seed) {
  ideal.validate();
  amp.validate();
  cfg.validate();

  GaussianRng rng(seed);
  Spectrum out = ideal;
  out.unit = "raw";
  out.sigma.resize(out.size());
  const double inv_sqrt_n = 1.0 / std::sqrt(static_cast<double>(cfg.averages));
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double mean = amp.gain * (ideal.value[i] + amp.n_add);
    const double sigma = mean * inv_sqrt_n;
    out.value[i] = mean + sigma * rng.standard_normal();
    out.sigma[i] = sigma;
  }
  return out;
}

Spectrum apply_circulator_leakage(const ResonatorParams& res, double n_en,
                                  double n_in, const MeasurementConfig& cfg,
                                  std::vector<double> detuning_hz) {
  cfg.validate();
  if (cfg.leakage_amplitude == 0.0)
    return output_noise_psd(res, n_en, n_in, std::move(detuning_hz));

  res.validate();
  const std::complex<double> leak =
      cfg.leakage_amplitude *
      std::complex<double>(std::cos(cfg.leakage_phase_rad),
                           std::sin(cfg.leakage_phase_rad));
  Spectrum s;
  s.grid = GridKind::detuning_hz;
  s.f0_hz = res.f0_hz;
  s.unit = "quanta";
  s.freq_hz = std::move(detuning_hz);
  s.value.resize(s.freq_hz.size());
  for (std::size_t i = 0; i < s.freq_hz.size(); ++i) {
    const double d = s.freq_hz[i];
    const double coherent = std::norm(reflection_s11_at(res, d) + leak);
    s.value[i] = coherent * (n_in + 0.5) + transmission_at(res, d) * (n_en + 0.5);
  }
  s.validate();
  return s;
}

Spectrum off_resonance_ideal(const ResonatorParams& res, double n_en,
                             double n_in, const MeasurementConfig& cfg,
                             std::vector<double> detuning_hz) {
  res.validate();
  const double d_off = effective_detune_off(res, cfg);
  if (d_off < 30.0 * res.kappa_hz())
    throw std::invalid_argument(
        "off_resonance: detune_off must be at least 30 linewidths");

  // Same lineshape model, with the resonance moved up by d_off while the
  // measurement window stays put.
  std::vector<double> shifted(detuning_hz.size());
  for (std::size_t i = 0; i < detuning_hz.size(); ++i)
    shifted[i] = detuning_hz[i] - d_off;
  Spectrum s = apply_circulator_leakage(res, n_en, n_in, cfg, std::move(shifted));
  s.freq_hz = std::move(detuning_hz);
  s.f0_hz = res.f0_hz;
  return s;
}

Spectrum off_resonance_spectrum(const ResonatorParams& res, double n_en,
                                double n_in, const AmplifierChain& amp,
                                const MeasurementConfig& cfg,
                                std::vector<double> detuning_hz,
                                std::uint64_t seed) {
  return measure_spectrum(
      off_resonance_ideal(res, n_en, n_in, cfg, std::move(detuning_hz)), amp,
      cfg, seed);
}

ComplexSpectrum synth_probe(const ResonatorParams& res,
                            std::vector<double> detuning_hz, double noise_sigma,
                            std::uint64_t seed) {
  if (!(noise_sigma >= 0.0))
    throw std::domain_error("synth_probe: noise sigma must be >= 0");
  ComplexSpectrum probe = reflection_s11(res, std::move(detuning_hz));
  if (noise_sigma > 0.0) {
    GaussianRng rng(seed);
    probe.sigma.assign(probe.size(), noise_sigma);
    for (auto& v : probe.value) {
      v += std::complex<double>(noise_sigma * rng.standard_normal(),
                                noise_sigma * rng.standard_normal());
    }
  }
  return probe;
}

namespace {

std::vector<ThermometryPoint> draw_sweep(const std::vector<double>& temps,
                                         const std::vector<double>& means,
                                         std::uint64_t averages,
                                         std::uint64_t seed) {
  GaussianRng rng(seed);
  const double inv_sqrt_n = 1.0 / std::sqrt(static_cast<double>(averages));
  std::vector<ThermometryPoint> sweep(temps.size());
  for (std::size_t i = 0; i < temps.size(); ++i) {
    const double sigma = means[i] * inv_sqrt_n;
    sweep[i] = {temps[i], means[i] + sigma * rng.standard_normal(), sigma};
  }
  return sweep;
}

}  // namespace

std::vector<ThermometryPoint> synth_environment_sweep(
    const ResonatorParams& res, double n_in, const AmplifierChain& amp,
    const MeasurementConfig& cfg, const std::vector<double>& temperatures_k,
    std::uint64_t averages, std::uint64_t seed) {
  res.validate();
  amp.validate();
  if (averages < 1)
    throw std::domain_error("thermometry sweep: averages must be >= 1");

  std::vector<double> means(temperatures_k.size());
  for (std::size_t i = 0; i < temperatures_k.size(); ++i) {
    const double n_en = bose_einstein_occupancy(res.f0_hz, temperatures_k[i]);
    const Spectrum point =
        apply_circulator_leakage(res, n_en, n_in, cfg, {0.0});
    means[i] = amp.gain * (point.value[0] + amp.n_add);
  }
  return draw_sweep(temperatures_k, means, averages, seed);
}

std::vector<ThermometryPoint> synth_source_sweep(
    const ResonatorParams& res, const LinkParams& link, double n_en,
    const AmplifierChain& amp, const MeasurementConfig& cfg,
    const std::vector<double>& temperatures_k, std::uint64_t averages,
    std::uint64_t seed) {
  res.validate();
  link.validate();
  amp.validate();
  if (averages < 1)
    throw std::domain_error("thermometry sweep: averages must be >= 1");

  std::vector<double> means(temperatures_k.size());
  for (std::size_t i = 0; i < temperatures_k.size(); ++i) {
    const double n_s = bose_einstein_occupancy(res.f0_hz, temperatures_k[i]);
    const double n_in = external_bath_occupancy(link, n_s);
    const Spectrum point = off_resonance_ideal(res, n_en, n_in, cfg, {0.0});
    means[i] = amp.gain * (point.value[0] + amp.n_add);
  }
  return draw_sweep(temperatures_k, means, averages, seed);
}

}  // namespace radcool
