#pragma once

#include <complex>
#include <cstddef>
#include <string>
#include <vector>

namespace radcool {

enum class GridKind { detuning_hz, absolute_hz };

// Frequency grid with one PSD sample per point. Values are dimensionless
// quanta for output spectra, quanta/Hz for intracavity densities (so a plain
// trapezoid over the Hz grid gives an occupancy), and raw detector units
// after measurement; `unit` carries the label into file headers.
struct Spectrum {
  GridKind grid = GridKind::detuning_hz;
  double f0_hz = 0.0;           // reference frequency for detuning grids
  std::vector<double> freq_hz;  // strictly increasing
  std::vector<double> value;
  std::vector<double> sigma;    // empty, or one standard deviation per point
  std::string unit = "quanta";

  std::size_t size() const { return freq_hz.size(); }
  bool has_sigma() const { return !sigma.empty(); }
  double detuning_hz(std::size_t i) const;
  void validate() const;
};

// Complex field-amplitude response on a frequency grid (coherent-probe
// reflection). `sigma` is the per-quadrature standard deviation.
struct ComplexSpectrum {
  GridKind grid = GridKind::detuning_hz;
  double f0_hz = 0.0;
  std::vector<double> freq_hz;
  std::vector<std::complex<double>> value;
  std::vector<double> sigma;

  std::size_t size() const { return freq_hz.size(); }
  bool has_sigma() const { return !sigma.empty(); }
  double detuning_hz(std::size_t i) const;
  void validate() const;
};

std::vector<double> linspace(double lo, double hi, std::size_t n);

// Default simulation window: +-half_span_kappa linewidths around resonance,
// odd point count so the grid contains zero detuning exactly.
std::vector<double> default_detuning_grid(double kappa_hz,
                                          double half_span_kappa = 15.0,
                                          std::size_t points = 601);

double trapezoid(const std::vector<double>& x, const std::vector<double>& y);

// Quadrature weight of point i under the trapezoid rule.
double trapezoid_weight(const std::vector<double>& x, std::size_t i);

// True when both spectra live on the same grid (kind, reference frequency
// and points within 1e-6 Hz).
bool same_grid(const Spectrum& a, const Spectrum& b);

}  // namespace radcool
