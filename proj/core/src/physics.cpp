#include "radcool/physics.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

#include "radcool/constants.hpp"

namespace radcool {

using constants::boltzmann;
using constants::planck;
using constants::two_pi;

void ResonatorParams::validate() const {
  if (!(f0_hz > 0.0)) throw std::domain_error("resonator: f0 must be positive");
  if (!(kappa_i_hz >= 0.0)) throw std::domain_error("resonator: kappa_i must be >= 0");
  if (!(kappa_e_hz >= 0.0)) throw std::domain_error("resonator: kappa_e must be >= 0");
  if (!(kappa_hz() > 0.0)) throw std::domain_error("resonator: total kappa must be positive");
}

void LinkParams::validate() const {
  if (!(lambda >= 0.0 && lambda <= 1.0))
    throw std::domain_error("link: lambda must lie in [0, 1]");
  if (!(n_eff_link >= 0.0)) throw std::domain_error("link: n_eff_link must be >= 0");
}

ThermalBath ThermalBath::from_temperature(double kelvin) {
  if (!(kelvin > 0.0)) throw std::domain_error("bath: temperature must be positive");
  ThermalBath b;
  b.temperature_k_ = kelvin;
  return b;
}

ThermalBath ThermalBath::from_occupancy(double n) {
  if (!(n >= 0.0)) throw std::domain_error("bath: occupancy must be >= 0");
  ThermalBath b;
  b.occupancy_ = n;
  return b;
}

double ThermalBath::occupancy(double f_hz) const {
  if (temperature_k_ >= 0.0) return bose_einstein_occupancy(f_hz, temperature_k_);
  if (occupancy_ >= 0.0) return occupancy_;
  throw std::domain_error("bath: neither temperature nor occupancy set");
}

double ThermalBath::temperature(double f_hz) const {
  if (temperature_k_ >= 0.0) return temperature_k_;
  if (occupancy_ > 0.0) return occupancy_to_temperature(f_hz, occupancy_);
  throw std::domain_error("bath: temperature undefined for zero occupancy");
}

double bose_einstein_occupancy(double f_hz, double temperature_k) {
  if (!(f_hz > 0.0))
    throw std::domain_error("bose_einstein_occupancy: frequency must be positive");
  if (!(temperature_k > 0.0))
    throw std::domain_error("bose_einstein_occupancy: temperature must be positive");
  const double x = planck * f_hz / (boltzmann * temperature_k);
  const double n = 1.0 / std::expm1(x);
  return (n < constants::occupancy_underflow) ? 0.0 : n;
}

double occupancy_to_temperature(double f_hz, double occupancy) {
  if (!(f_hz > 0.0))
    throw std::domain_error("occupancy_to_temperature: frequency must be positive");
  if (!(occupancy > 0.0))
    throw std::domain_error("occupancy_to_temperature: occupancy must be positive");
  return planck * f_hz / (boltzmann * std::log1p(1.0 / occupancy));
}

double mode_occupancy(const ResonatorParams& res, double n_en, double n_in) {
  res.validate();
  if (!(n_en >= 0.0) || !(n_in >= 0.0))
    throw std::domain_error("mode_occupancy: occupancies must be >= 0");
  return (res.kappa_i_hz * n_en + res.kappa_e_hz * n_in) / res.kappa_hz();
}

double external_bath_occupancy(const LinkParams& link, double n_s) {
  link.validate();
  if (!(n_s >= 0.0))
    throw std::domain_error("external_bath_occupancy: occupancy must be >= 0");
  if (link.lambda == 1.0) return n_s;
  return link.lambda * n_s + (1.0 - link.lambda) * link.n_eff_link;
}

double transmission_at(const ResonatorParams& res, double detuning_hz) {
  const double half_kappa = 0.5 * res.kappa_hz();
  return res.kappa_i_hz * res.kappa_e_hz /
         (half_kappa * half_kappa + detuning_hz * detuning_hz);
}

double reflection_at(const ResonatorParams& res, double detuning_hz) {
  return 1.0 - transmission_at(res, detuning_hz);
}

std::complex<double> reflection_s11_at(const ResonatorParams& res,
                                       double detuning_hz) {
  const std::complex<double> den(0.5 * res.kappa_hz(), detuning_hz);
  return 1.0 - res.kappa_e_hz / den;
}

double output_noise_at(const ResonatorParams& res, double n_en, double n_in,
                       double detuning_hz) {
  const double t = transmission_at(res, detuning_hz);
  return (1.0 - t) * n_in + t * n_en + 0.5;
}

double output_baseline(double n_in) { return n_in + 0.5; }

double intracavity_at(const ResonatorParams& res, double n_en, double n_in,
                      double detuning_hz) {
  const double half_kappa = 0.5 * res.kappa_hz();
  return (res.kappa_i_hz * n_en + res.kappa_e_hz * n_in) /
         (two_pi * (half_kappa * half_kappa + detuning_hz * detuning_hz));
}

double intracavity_peak(const ResonatorParams& res, double n_en, double n_in) {
  return intracavity_at(res, n_en, n_in, 0.0);
}

namespace {

template <typename F>
Spectrum build_spectrum(const ResonatorParams& res, std::vector<double> grid,
                        std::string unit, F&& f) {
  res.validate();
  Spectrum s;
  s.grid = GridKind::detuning_hz;
  s.f0_hz = res.f0_hz;
  s.freq_hz = std::move(grid);
  s.unit = std::move(unit);
  s.value.resize(s.freq_hz.size());
  for (std::size_t i = 0; i < s.freq_hz.size(); ++i) s.value[i] = f(s.freq_hz[i]);
  s.validate();
  return s;
}

}  // namespace

Spectrum transmission_spectrum(const ResonatorParams& res,
                               std::vector<double> detuning_hz) {
  return build_spectrum(res, std::move(detuning_hz), "dimensionless",
                        [&](double d) { return transmission_at(res, d); });
}

Spectrum reflection_spectrum(const ResonatorParams& res,
                             std::vector<double> detuning_hz) {
  return build_spectrum(res, std::move(detuning_hz), "dimensionless",
                        [&](double d) { return reflection_at(res, d); });
}

ComplexSpectrum reflection_s11(const ResonatorParams& res,
                               std::vector<double> detuning_hz) {
  res.validate();
  ComplexSpectrum s;
  s.grid = GridKind::detuning_hz;
  s.f0_hz = res.f0_hz;
  s.freq_hz = std::move(detuning_hz);
  s.value.resize(s.freq_hz.size());
  for (std::size_t i = 0; i < s.freq_hz.size(); ++i)
    s.value[i] = reflection_s11_at(res, s.freq_hz[i]);
  s.validate();
  return s;
}

Spectrum output_noise_psd(const ResonatorParams& res, double n_en, double n_in,
                          std::vector<double> detuning_hz) {
  if (!(n_en >= 0.0) || !(n_in >= 0.0))
    throw std::domain_error("output_noise_psd: occupancies must be >= 0");
  return build_spectrum(res, std::move(detuning_hz), "quanta", [&](double d) {
    return output_noise_at(res, n_en, n_in, d);
  });
}

Spectrum intracavity_psd(const ResonatorParams& res, double n_en, double n_in,
                         std::vector<double> detuning_hz) {
  if (!(n_en >= 0.0) || !(n_in >= 0.0))
    throw std::domain_error("intracavity_psd: occupancies must be >= 0");
  return build_spectrum(res, std::move(detuning_hz), "quanta_per_hz",
                        [&](double d) { return intracavity_at(res, n_en, n_in, d); });
}

double captured_fraction(double kappa_hz, double lo_hz, double hi_hz) {
  if (!(kappa_hz > 0.0))
    throw std::domain_error("captured_fraction: kappa must be positive");
  if (!(lo_hz < hi_hz))
    throw std::invalid_argument("captured_fraction: empty window");
  return (std::atan(2.0 * hi_hz / kappa_hz) - std::atan(2.0 * lo_hz / kappa_hz)) /
         constants::pi;
}

}  // namespace radcool
