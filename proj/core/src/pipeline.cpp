#include "radcool/pipeline.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

#include "radcool/errors.hpp"
#include "radcool/physics.hpp"
#include "radcool/rng.hpp"

namespace radcool {

namespace {

// Seed streams per pipeline stage.
enum Stream : std::uint64_t {
  probe_stream = 0x70726f6265,
  env_sweep_stream = 0x656e76,
  source_sweep_stream = 0x737263,
  on_stream = 0x6f6e,
  off_stream = 0x6f6666,
};

double calibration_base_n_in(const Scenario& scn) {
  double t_base;
  if (scn.has_source_point() && scn.source.has_temperature())
    t_base = scn.source.temperature(scn.resonator.f0_hz);
  else if (!scn.source_sweep_k.empty())
    t_base = scn.source_sweep_k.front();
  else if (scn.has_source_point())
    return scn.n_in();
  else
    return scn.link.noise_floor();
  return external_bath_occupancy(
      scn.link, bose_einstein_occupancy(scn.resonator.f0_hz, t_base));
}

}  // namespace

CalibratedSetup calibrate_setup(const Scenario& scenario, std::uint64_t seed) {
  scenario.validate();
  const ResonatorParams& res = scenario.resonator;
  const double f0 = res.f0_hz;
  const double n_en = scenario.n_en();
  const double n_in_base = calibration_base_n_in(scenario);

  CalibratedSetup setup;

  // Step 1: coherent-probe reflection fit.
  setup.probe = synth_probe(res, scenario.probe_grid(), scenario.probe_noise_sigma,
                            derive_seed(seed, probe_stream));
  setup.fit = fit_reflection(setup.probe);
  if (!setup.fit.report.converged)
    throw convergence_error("pipeline: reflection fit did not converge");
  const ResonatorParams& rf = setup.fit.params;
  const double t0_fit = 4.0 * rf.kappa_i_hz * rf.kappa_e_hz /
                        (rf.kappa_hz() * rf.kappa_hz());

  // Step 2 slope calibrations.
  setup.env_sweep = synth_environment_sweep(
      res, n_in_base, scenario.amplifier, scenario.measurement,
      scenario.calibration.temperatures_k, scenario.calibration.averages,
      derive_seed(seed, env_sweep_stream));
  const CalibrationResult env_raw =
      fit_noise_thermometry(setup.env_sweep, f0, "resonator-output");

  setup.src_sweep = synth_source_sweep(
      res, scenario.link, n_en, scenario.amplifier, scenario.measurement,
      scenario.calibration.temperatures_k, scenario.calibration.averages,
      derive_seed(seed, source_sweep_stream));
  setup.gs = fit_noise_thermometry(setup.src_sweep, f0, "source-output");

  // Refer the environment-sweep slope G*T(0) to the resonator output.
  const double kf = rf.kappa_hz();
  const double dt_dki = t0_fit * (1.0 / rf.kappa_i_hz - 2.0 / kf);
  const double dt_dke = t0_fit * (1.0 / rf.kappa_e_hz - 2.0 / kf);
  const double var_t0 =
      dt_dki * dt_dki * setup.fit.sigma_kappa_i() * setup.fit.sigma_kappa_i() +
      dt_dke * dt_dke * setup.fit.sigma_kappa_e() * setup.fit.sigma_kappa_e() +
      2.0 * dt_dki * dt_dke * setup.fit.cov_kappa_ie();

  setup.g0 = env_raw;
  setup.g0.gain = env_raw.gain / t0_fit;
  setup.g0.sigma_gain =
      setup.g0.gain * std::hypot(env_raw.sigma_gain / env_raw.gain,
                                 std::sqrt(std::max(0.0, var_t0)) / t0_fit);
  // cov(G0, n_add0) = cov(slope/T0, T0*n'_gen) = cov(slope, n'_gen).
  setup.g0.cov_gain_n_add = env_raw.cov_gain_n_add;

  // The generic regression absorbs the reflected input noise into its
  // intercept; the resonator-plane added noise and the link floor each need
  // the other, so iterate the pair to its fixed point (contraction ratio
  // R(0) ~ 0.2).
  const std::complex<double> leak =
      scenario.measurement.leakage_amplitude *
      std::complex<double>(std::cos(scenario.measurement.leakage_phase_rad),
                           std::sin(scenario.measurement.leakage_phase_rad));
  const double r0_eff = std::norm(reflection_s11_at(rf, 0.0) + leak);
  const double n_s_base =
      scenario.has_source_point()
          ? scenario.n_s()
          : (scenario.source_sweep_k.empty()
                 ? 0.0
                 : bose_einstein_occupancy(f0, scenario.source_sweep_k.front()));

  // Intercept bookkeeping: the generic fit reads the env sweep as
  // G'(n + 1/2 + n'), G' = G*T(0), so the resonator-plane added noise is
  // n_add0 = T(0)*n' - R(0)*(n_in + 1/2).
  double floor_est = 0.0;
  for (int pass = 0; pass < 4; ++pass) {
    const double lambda_est = std::min(setup.gs.gain / setup.g0.gain, 1.0);
    const double n_in_est = lambda_est * n_s_base + floor_est;
    setup.g0.n_add =
        std::max(0.0, t0_fit * env_raw.n_add - r0_eff * (n_in_est + 0.5));
    setup.g0.sigma_n_add = t0_fit * env_raw.sigma_n_add;
    setup.link = link_transmission(setup.gs, setup.g0);
    floor_est = setup.link.noise_floor;
  }
  return setup;
}

ExperimentResult measure_and_extract(const Scenario& scenario,
                                     const CalibratedSetup& setup,
                                     const ThermalBath& source_point,
                                     std::uint64_t seed) {
  scenario.validate();
  const ResonatorParams& res = scenario.resonator;

  ExperimentResult out;
  out.setup = setup;
  out.n_en_true = scenario.n_en();
  const double n_s = source_point.occupancy(res.f0_hz);
  out.t_source_k =
      n_s > 0.0 ? source_point.temperature(res.f0_hz) : 0.0;
  out.n_in_true = external_bath_occupancy(scenario.link, n_s);
  out.n_mode_true = mode_occupancy(res, out.n_en_true, out.n_in_true);

  const auto grid = scenario.detuning_grid();
  const Spectrum ideal_on = apply_circulator_leakage(
      res, out.n_en_true, out.n_in_true, scenario.measurement, grid);
  const Spectrum ideal_off = off_resonance_ideal(
      res, out.n_en_true, out.n_in_true, scenario.measurement, grid);
  out.on_raw = measure_spectrum(ideal_on, scenario.amplifier,
                                scenario.measurement, derive_seed(seed, on_stream));
  out.off_raw =
      measure_spectrum(ideal_off, scenario.amplifier, scenario.measurement,
                       derive_seed(seed, off_stream));

  // Raw detector units -> quanta at the resonator output.
  const double g0 = setup.g0.gain;
  auto to_quanta = [&](const Spectrum& raw) {
    Spectrum q = raw;
    q.unit = "quanta";
    for (std::size_t i = 0; i < q.size(); ++i) {
      q.value[i] = raw.value[i] / g0 - setup.g0.n_add;
      q.sigma[i] = raw.sigma[i] / g0;
    }
    return q;
  };
  const Spectrum on_q = to_quanta(out.on_raw);
  const Spectrum off_q = to_quanta(out.off_raw);

  const double d_off = effective_detune_off(res, scenario.measurement);
  out.delta_n = extract_delta_n(on_q, off_q, setup.fit.params, d_off);
  // Common-mode gain error is fully correlated across the spectrum.
  out.delta_n.sigma = std::hypot(
      out.delta_n.sigma, out.delta_n.value * setup.g0.sigma_gain / setup.g0.gain);

  KappaUncertainty ku;
  ku.sigma_kappa_i = setup.fit.sigma_kappa_i();
  ku.sigma_kappa_e = setup.fit.sigma_kappa_e();
  ku.cov_kappa_ie = setup.fit.cov_kappa_ie();
  out.estimate =
      deduce_mode_occupancy(out.n_en_true, 0.0, out.delta_n, setup.fit.params, ku);
  return out;
}

ExperimentResult run_synthetic_experiment(const Scenario& scenario,
                                          std::uint64_t seed) {
  if (!scenario.has_source_point())
    throw config_error("pipeline: scenario needs a source temperature");
  const CalibratedSetup setup = calibrate_setup(scenario, seed);
  return measure_and_extract(scenario, setup, scenario.source,
                             derive_seed(seed, 0x6d656173));
}

}  // namespace radcool
