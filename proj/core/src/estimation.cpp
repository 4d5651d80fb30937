#include "radcool/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <set>
#include <stdexcept>

#include "radcool/constants.hpp"
#include "radcool/errors.hpp"
#include "radcool/levmar.hpp"
#include "radcool/physics.hpp"

namespace radcool {

using constants::two_pi;

double FitReport::sigma(std::size_t i) const {
  return std::sqrt(std::max(0.0, cov(i, i)));
}

namespace {

// Linewidth from the half-maximum crossings of 1 - |s11|^2 around the dip.
double estimate_linewidth(const ComplexSpectrum& probe, std::size_t i_min) {
  const std::size_t n = probe.size();
  std::vector<double> depth(n);
  for (std::size_t i = 0; i < n; ++i)
    depth[i] = 1.0 - std::norm(probe.value[i]);
  const double half = 0.5 * depth[i_min];
  if (!(half > 0.0)) return 0.0;

  double left = probe.freq_hz.front(), right = probe.freq_hz.back();
  bool found_left = false, found_right = false;
  for (std::size_t i = i_min; i > 0; --i) {
    if (depth[i - 1] <= half && depth[i] > half) {
      const double t = (half - depth[i - 1]) / (depth[i] - depth[i - 1]);
      left = probe.freq_hz[i - 1] + t * (probe.freq_hz[i] - probe.freq_hz[i - 1]);
      found_left = true;
      break;
    }
  }
  for (std::size_t i = i_min; i + 1 < n; ++i) {
    if (depth[i + 1] <= half && depth[i] > half) {
      const double t = (half - depth[i]) / (depth[i + 1] - depth[i]);
      right = probe.freq_hz[i] + t * (probe.freq_hz[i + 1] - probe.freq_hz[i]);
      found_right = true;
      break;
    }
  }
  if (!found_left || !found_right) return 0.0;
  return right - left;
}

}  // namespace

ResonatorFit fit_reflection(const ComplexSpectrum& probe) {
  probe.validate();
  const std::size_t n = probe.size();
  if (n < 30)
    throw std::invalid_argument("fit_reflection: need at least 30 probe points");

  std::size_t i_min = 0;
  for (std::size_t i = 1; i < n; ++i)
    if (std::abs(probe.value[i]) < std::abs(probe.value[i_min])) i_min = i;

  const double kappa_est = estimate_linewidth(probe, i_min);
  const double span = probe.freq_hz.back() - probe.freq_hz.front();
  if (kappa_est <= 0.0 || span < 5.0 * kappa_est)
    throw std::invalid_argument(
        "fit_reflection: probe window narrower than five estimated linewidths");

  // Coupling split from the dip depth; the sign of Re(s11) at the dip picks
  // the over/undercoupled branch.
  const double depth = std::clamp(1.0 - std::norm(probe.value[i_min]), 0.0, 1.0);
  const double s = std::sqrt(std::max(0.0, 1.0 - depth));
  double kappa_e0 = (probe.value[i_min].real() <= 0.0)
                        ? 0.5 * kappa_est * (1.0 + s)
                        : 0.5 * kappa_est * (1.0 - s);
  kappa_e0 = std::max(kappa_e0, 1e-3 * kappa_est);
  const double kappa_i0 = std::max(kappa_est - kappa_e0, 1e-3 * kappa_est);

  const double x_ref = probe.freq_hz[i_min];
  std::vector<double> u(n);
  for (std::size_t i = 0; i < n; ++i) u[i] = probe.freq_hz[i] - x_ref;

  std::vector<double> w(n, 1.0);
  const bool weighted = probe.has_sigma();
  if (weighted)
    for (std::size_t i = 0; i < n; ++i)
      w[i] = probe.sigma[i] > 0.0 ? 1.0 / probe.sigma[i] : 1.0;

  // Parameters: frequency offset from the dip sample, kappa_i, kappa_e.
  auto model = [&](const std::vector<double>& x, std::size_t i) {
    const std::complex<double> den(0.5 * (x[1] + x[2]), u[i] - x[0]);
    return 1.0 - x[2] / den;
  };
  auto residual = [&](const std::vector<double>& x, std::vector<double>& r) {
    for (std::size_t i = 0; i < n; ++i) {
      const std::complex<double> d = model(x, i) - probe.value[i];
      r[2 * i] = d.real() * w[i];
      r[2 * i + 1] = d.imag() * w[i];
    }
  };
  auto jacobian = [&](const std::vector<double>& x, std::vector<double>& jac) {
    for (std::size_t i = 0; i < n; ++i) {
      const std::complex<double> den(0.5 * (x[1] + x[2]), u[i] - x[0]);
      const std::complex<double> inv = 1.0 / den;
      const std::complex<double> inv2 = inv * inv;
      const std::complex<double> d_u0(0.0, -x[2]);
      const std::complex<double> cols[3] = {
          d_u0 * inv2,                     // d/d offset
          0.5 * x[2] * inv2,               // d/d kappa_i
          -inv + 0.5 * x[2] * inv2,        // d/d kappa_e
      };
      for (int c = 0; c < 3; ++c) {
        jac[(2 * i) * 3 + c] = cols[c].real() * w[i];
        jac[(2 * i + 1) * 3 + c] = cols[c].imag() * w[i];
      }
    }
  };

  LevmarResult lm = levmar_fit(2 * n, residual, jacobian, {0.0, kappa_i0, kappa_e0});

  ResonatorFit fit;
  fit.report.parameter_names = {"f0_hz", "kappa_i_hz", "kappa_e_hz"};
  fit.report.parameters = {x_ref + lm.parameters[0], lm.parameters[1],
                           lm.parameters[2]};
  if (probe.grid == GridKind::detuning_hz)
    fit.report.parameters[0] += probe.f0_hz;
  fit.report.covariance = lm.covariance;
  if (!weighted && 2 * n > 3) {
    const double scale = lm.chi2 / static_cast<double>(2 * n - 3);
    for (double& c : fit.report.covariance) c *= scale;
  }
  fit.report.residual_norm = std::sqrt(lm.chi2 / static_cast<double>(2 * n));
  fit.report.iterations = lm.iterations;
  fit.report.converged =
      lm.converged && lm.parameters[1] >= 0.0 && lm.parameters[2] >= 0.0;

  fit.params.f0_hz = fit.report.parameters[0];
  fit.params.kappa_i_hz = std::max(0.0, lm.parameters[1]);
  fit.params.kappa_e_hz = std::max(0.0, lm.parameters[2]);
  return fit;
}

CalibrationResult fit_noise_thermometry(const std::vector<ThermometryPoint>& sweep,
                                        double f_hz,
                                        std::string reference_plane) {
  std::set<double> temps;
  for (const auto& p : sweep) temps.insert(p.temperature_k);
  if (temps.size() < 3)
    throw std::invalid_argument(
        "fit_noise_thermometry: need at least 3 distinct temperatures");

  const std::size_t n = sweep.size();
  std::vector<double> x(n), y(n);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = bose_einstein_occupancy(f_hz, sweep[i].temperature_k);
    y[i] = sweep[i].raw_psd;
  }
  const auto [xmin, xmax] = std::minmax_element(x.begin(), x.end());
  if (!(*xmin > 0.0) || *xmax / *xmin < 2.0)
    throw std::invalid_argument(
        "fit_noise_thermometry: sweep spans less than a factor 2 in occupancy");

  bool weighted = true;
  for (const auto& p : sweep) weighted = weighted && p.sigma > 0.0;

  double sw = 0, swx = 0, swy = 0, swxx = 0, swxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double wi = weighted ? 1.0 / (sweep[i].sigma * sweep[i].sigma) : 1.0;
    sw += wi;
    swx += wi * x[i];
    swy += wi * y[i];
    swxx += wi * x[i] * x[i];
    swxy += wi * x[i] * y[i];
  }
  const double det = sw * swxx - swx * swx;
  if (!(det > 0.0))
    throw std::invalid_argument("fit_noise_thermometry: degenerate sweep");

  const double slope = (sw * swxy - swx * swy) / det;
  const double intercept = (swxx * swy - swx * swxy) / det;
  double var_slope = sw / det;
  double var_intercept = swxx / det;
  double cov_si = -swx / det;
  if (!weighted) {
    double chi2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double r = y[i] - intercept - slope * x[i];
      chi2 += r * r;
    }
    const double s2 = n > 2 ? chi2 / static_cast<double>(n - 2) : 0.0;
    var_slope *= s2;
    var_intercept *= s2;
    cov_si *= s2;
  }

  if (!(slope > 0.0))
    throw data_error("fit_noise_thermometry: non-positive fitted gain");

  CalibrationResult cal;
  cal.gain = slope;
  cal.sigma_gain = std::sqrt(std::max(0.0, var_slope));
  cal.n_add = std::max(0.0, intercept / slope - 0.5);
  // Delta method on n_add = intercept/slope - 1/2.
  const double da = 1.0 / slope;
  const double db = -intercept / (slope * slope);
  cal.sigma_n_add = std::sqrt(std::max(
      0.0, da * da * var_intercept + db * db * var_slope + 2.0 * da * db * cov_si));
  cal.cov_gain_n_add = db * var_slope + da * cov_si;
  cal.reference_plane = std::move(reference_plane);
  cal.frequency_hz = f_hz;
  return cal;
}

LinkCalibration link_transmission(const CalibrationResult& g_source,
                                  const CalibrationResult& g_resonator) {
  if (g_source.reference_plane != "source-output" ||
      g_resonator.reference_plane != "resonator-output")
    throw data_error(
        "link_transmission: expected source-output and resonator-output planes");
  if (!(g_source.gain > 0.0) || !(g_resonator.gain > 0.0))
    throw data_error("link_transmission: non-positive gain");

  const double gs = g_source.gain, g0 = g_resonator.gain;
  const double lambda = gs / g0;
  const double sigma_lambda =
      lambda * std::hypot(g_source.sigma_gain / gs, g_resonator.sigma_gain / g0);
  // Inconsistent gain ordering: above unity by more than the combined
  // 3-sigma band (1 sigma would false-alarm on an honestly lossless link).
  if (lambda > 1.0 + 3.0 * sigma_lambda)
    throw data_error(
        "link_transmission: transmission above unity beyond combined uncertainty");

  // floor = (gs/g0)(n_add_s + 1/2) - n_add_0 - 1/2; block covariances from
  // the two independent calibrations.
  const double ns = g_source.n_add, n0 = g_resonator.n_add;
  const double central = lambda * (ns + 0.5) - n0 - 0.5;
  const double d_gs = (ns + 0.5) / g0;
  const double d_ns = lambda;
  const double d_g0 = -lambda * (ns + 0.5) / g0;
  const double d_n0 = -1.0;
  const double var_src = d_gs * d_gs * g_source.sigma_gain * g_source.sigma_gain +
                         d_ns * d_ns * g_source.sigma_n_add * g_source.sigma_n_add +
                         2.0 * d_gs * d_ns * g_source.cov_gain_n_add;
  const double var_res =
      d_g0 * d_g0 * g_resonator.sigma_gain * g_resonator.sigma_gain +
      d_n0 * d_n0 * g_resonator.sigma_n_add * g_resonator.sigma_n_add +
      2.0 * d_g0 * d_n0 * g_resonator.cov_gain_n_add;
  const double sigma_floor = std::sqrt(std::max(0.0, var_src + var_res));

  LinkCalibration out;
  out.link.lambda = std::min(lambda, 1.0);
  out.sigma_lambda = sigma_lambda;
  out.noise_floor = std::max(0.0, central);
  out.floor_sigma_up = sigma_floor;
  out.floor_sigma_down = std::min(sigma_floor, out.noise_floor);
  out.link.n_eff_link =
      out.link.lambda < 1.0 ? out.noise_floor / (1.0 - out.link.lambda) : 0.0;
  return out;
}

DeltaNEstimate extract_delta_n(const Spectrum& s_out, const Spectrum& s_out_off,
                               const ResonatorParams& res,
                               std::optional<double> off_detune_hz) {
  s_out.validate();
  s_out_off.validate();
  res.validate();
  if (!same_grid(s_out, s_out_off))
    throw data_error("extract_delta_n: spectra on different grids");
  if (s_out.unit != s_out_off.unit)
    throw data_error("extract_delta_n: spectra in different units");

  const std::size_t n = s_out.size();
  std::vector<double> det(n);
  for (std::size_t i = 0; i < n; ++i) {
    det[i] = s_out.grid == GridKind::detuning_hz ? s_out.freq_hz[i]
                                                 : s_out.freq_hz[i] - res.f0_hz;
  }
  const double kappa = res.kappa_hz();
  if (det.back() - det.front() < 10.0 * kappa)
    throw std::invalid_argument(
        "extract_delta_n: grid spans less than 10 linewidths");

  std::vector<double> diff(n);
  for (std::size_t i = 0; i < n; ++i) diff[i] = s_out.value[i] - s_out_off.value[i];
  const double integral = trapezoid(det, diff);

  double capture = captured_fraction(kappa, det.front(), det.back());
  if (off_detune_hz) {
    const double d = *off_detune_hz;
    capture -= captured_fraction(kappa, det.front() - d, det.back() - d);
  }
  if (!(capture > 0.1))
    throw data_error("extract_delta_n: window captures too little of the line");

  const double prefactor =
      kappa / (two_pi * res.kappa_e_hz * res.kappa_i_hz);

  DeltaNEstimate est;
  est.value = prefactor * integral / capture;

  if (s_out.has_sigma() || s_out_off.has_sigma()) {
    double var = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double so = s_out.has_sigma() ? s_out.sigma[i] : 0.0;
      const double sf = s_out_off.has_sigma() ? s_out_off.sigma[i] : 0.0;
      const double wi = trapezoid_weight(det, i) * std::hypot(so, sf);
      var += wi * wi;
    }
    est.sigma = prefactor * std::sqrt(var) / capture;
  }
  return est;
}

OccupancyEstimate deduce_mode_occupancy(double n_en, double sigma_n_en,
                                        const DeltaNEstimate& delta_n,
                                        const ResonatorParams& res,
                                        const KappaUncertainty& kappa_u) {
  res.validate();
  if (!(n_en >= 0.0))
    throw std::domain_error("deduce_mode_occupancy: n_en must be >= 0");

  const double kappa = res.kappa_hz();
  const double ratio = res.kappa_e_hz / kappa;

  OccupancyEstimate est;
  est.delta_n = delta_n.value;
  est.sigma_delta_n = delta_n.sigma;
  est.n_mode = n_en - ratio * delta_n.value;

  const double dr_dke = res.kappa_i_hz / (kappa * kappa);
  const double dr_dki = -res.kappa_e_hz / (kappa * kappa);
  const double var_ratio =
      dr_dke * dr_dke * kappa_u.sigma_kappa_e * kappa_u.sigma_kappa_e +
      dr_dki * dr_dki * kappa_u.sigma_kappa_i * kappa_u.sigma_kappa_i +
      2.0 * dr_dke * dr_dki * kappa_u.cov_kappa_ie;
  est.sigma_n_mode = std::sqrt(
      sigma_n_en * sigma_n_en + ratio * ratio * delta_n.sigma * delta_n.sigma +
      delta_n.value * delta_n.value * std::max(0.0, var_ratio));

  est.heating = delta_n.value < 0.0;
  est.negative_central = est.n_mode < 0.0;
  est.inputs.kappa_i_hz = res.kappa_i_hz;
  est.inputs.kappa_e_hz = res.kappa_e_hz;
  est.inputs.n_en = n_en;
  return est;
}

double transition_source_temperature(double n_en, const LinkParams& link,
                                     double f_hz) {
  link.validate();
  if (!(link.lambda > 0.0))
    throw std::domain_error(
        "transition_source_temperature: opaque link has no transition");
  const double n_s = (n_en - link.noise_floor()) / link.lambda;
  if (!(n_s > 0.0))
    throw std::domain_error(
        "transition_source_temperature: environment occupancy below the link floor");
  return occupancy_to_temperature(f_hz, n_s);
}

}  // namespace radcool
