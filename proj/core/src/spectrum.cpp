#include "radcool/spectrum.hpp"

#include <cmath>
#include <stdexcept>

namespace radcool {

namespace {

template <typename S>
void validate_grid(const S& s) {
  if (s.freq_hz.empty()) throw std::invalid_argument("spectrum: empty grid");
  if (s.value.size() != s.freq_hz.size())
    throw std::invalid_argument("spectrum: value/grid length mismatch");
  if (!s.sigma.empty() && s.sigma.size() != s.freq_hz.size())
    throw std::invalid_argument("spectrum: sigma/grid length mismatch");
  for (std::size_t i = 0; i + 1 < s.freq_hz.size(); ++i) {
    if (!(s.freq_hz[i] < s.freq_hz[i + 1]))
      throw std::invalid_argument("spectrum: grid not strictly increasing");
  }
  for (double f : s.freq_hz)
    if (!std::isfinite(f)) throw std::invalid_argument("spectrum: non-finite frequency");
  for (double sg : s.sigma)
    if (!(sg >= 0.0)) throw std::invalid_argument("spectrum: negative sigma");
}

}  // namespace

double Spectrum::detuning_hz(std::size_t i) const {
  return grid == GridKind::detuning_hz ? freq_hz[i] : freq_hz[i] - f0_hz;
}

void Spectrum::validate() const {
  validate_grid(*this);
  for (double v : value)
    if (!std::isfinite(v)) throw std::invalid_argument("spectrum: non-finite value");
}

double ComplexSpectrum::detuning_hz(std::size_t i) const {
  return grid == GridKind::detuning_hz ? freq_hz[i] : freq_hz[i] - f0_hz;
}

void ComplexSpectrum::validate() const {
  validate_grid(*this);
  for (const auto& v : value)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw std::invalid_argument("spectrum: non-finite value");
}

std::vector<double> linspace(double lo, double hi, std::size_t n) {
  if (n < 2) throw std::invalid_argument("linspace: need at least 2 points");
  if (!(lo < hi)) throw std::invalid_argument("linspace: lo must be < hi");
  std::vector<double> x(n);
  const double step = (hi - lo) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) x[i] = lo + step * static_cast<double>(i);
  x.back() = hi;
  return x;
}

std::vector<double> default_detuning_grid(double kappa_hz,
                                          double half_span_kappa,
                                          std::size_t points) {
  if (!(kappa_hz > 0.0)) throw std::invalid_argument("grid: kappa must be positive");
  if (!(half_span_kappa > 0.0)) throw std::invalid_argument("grid: span must be positive");
  if (points % 2 == 0) ++points;  // keep zero detuning on the grid
  const double w = half_span_kappa * kappa_hz;
  return linspace(-w, w, points);
}

double trapezoid(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw std::invalid_argument("trapezoid: length mismatch");
  if (x.size() < 2) return 0.0;
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < x.size(); ++i)
    acc += 0.5 * (x[i + 1] - x[i]) * (y[i] + y[i + 1]);
  return acc;
}

double trapezoid_weight(const std::vector<double>& x, std::size_t i) {
  const std::size_t n = x.size();
  if (n < 2) return 0.0;
  if (i == 0) return 0.5 * (x[1] - x[0]);
  if (i == n - 1) return 0.5 * (x[n - 1] - x[n - 2]);
  return 0.5 * (x[i + 1] - x[i - 1]);
}

bool same_grid(const Spectrum& a, const Spectrum& b) {
  if (a.grid != b.grid || a.size() != b.size()) return false;
  if (a.grid == GridKind::detuning_hz && std::abs(a.f0_hz - b.f0_hz) > 1e-6)
    return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (std::abs(a.freq_hz[i] - b.freq_hz[i]) > 1e-6) return false;
  return true;
}

}  // namespace radcool
