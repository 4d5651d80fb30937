// radcool: forward-model thermal noise spectra of a radiatively cooled
// superconducting resonator and run the occupancy calibration pipeline on
// synthetic measurements.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "radcool/errors.hpp"
#include "radcool/estimation.hpp"
#include "radcool/instrument.hpp"
#include "radcool/io.hpp"
#include "radcool/langevin.hpp"
#include "radcool/physics.hpp"
#include "radcool/pipeline.hpp"
#include "radcool/rng.hpp"
#include "radcool/scenario.hpp"
#include "radcool/version.hpp"

namespace {

using nlohmann::ordered_json;
using namespace radcool;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitConvergence = 2;
constexpr int kExitData = 3;

struct CommonOpts {
  std::string scenario_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  std::string format = "csv";
};

std::string default_out_dir() {
  if (const char* env = std::getenv("RADCOOL_OUT")) return env;
  return ".";
}

void add_common(CLI::App* cmd, CommonOpts& opts, bool scenario_required) {
  auto* sc = cmd->add_option("--scenario", opts.scenario_path,
                             "Scenario configuration file");
  if (scenario_required) sc->required();
  cmd->add_option("--out", opts.out_dir, "Output directory")
      ->default_val(default_out_dir());
  cmd->add_option("--seed", opts.seed, "Override the scenario seed");
  cmd->add_option("--format", opts.format, "Output data format")
      ->default_val("csv");
}

Scenario load_scenario(const CommonOpts& opts) {
  if (opts.format != "csv")
    throw config_error("unsupported output format: " + opts.format);
  Scenario s = parse_scenario_file(opts.scenario_path);
  if (opts.seed) s.seed = *opts.seed;
  return s;
}

std::string out_path(const CommonOpts& opts, const std::string& name) {
  std::filesystem::create_directories(opts.out_dir);
  return (std::filesystem::path(opts.out_dir) / name).string();
}

std::string digest_hex(const Scenario& s) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(scenario_digest(s)));
  return buf;
}

struct RecordBuilder {
  ordered_json record;
  ordered_json outputs = ordered_json::array();

  RecordBuilder(const std::string& command, const Scenario& scn) {
    record["tool"] = "radcool";
    record["version"] = project_version;
    record["command"] = command;
    record["timestamp_utc"] = iso8601_timestamp();
    record["seed"] = scn.seed;
    record["scenario_digest"] = digest_hex(scn);
  }

  void add_output(const std::string& file, const std::string& role) {
    outputs.push_back({{"file", file}, {"role", role}});
  }

  void finish(const CommonOpts& opts, const Scenario& scn, ordered_json results) {
    record["outputs"] = outputs;
    record["results"] = std::move(results);
    record["scenario_echo"] = canonical_scenario_text(scn);
    std::ofstream out(out_path(opts, "run_record.json"));
    if (!out) throw std::runtime_error("cannot write run record");
    out << record.dump(2) << '\n';
  }
};

ordered_json estimate_json(const OccupancyEstimate& est) {
  ordered_json j;
  j["delta_n"] = est.delta_n;
  j["sigma_delta_n"] = est.sigma_delta_n;
  j["n_mode"] = est.n_mode;
  j["sigma_n_mode"] = est.sigma_n_mode;
  j["heating"] = est.heating;
  j["negative_central"] = est.negative_central;
  j["inputs"] = {{"kappa_i_hz", est.inputs.kappa_i_hz},
                 {"kappa_e_hz", est.inputs.kappa_e_hz},
                 {"n_en", est.inputs.n_en}};
  return j;
}

ordered_json calibration_json(const CalibrationResult& c) {
  ordered_json j;
  j["gain"] = c.gain;
  j["sigma_gain"] = c.sigma_gain;
  j["n_add"] = c.n_add;
  j["sigma_n_add"] = c.sigma_n_add;
  j["reference_plane"] = c.reference_plane;
  j["frequency_hz"] = c.frequency_hz;
  return j;
}

CalibrationResult calibration_from_json(const ordered_json& j) {
  CalibrationResult c;
  c.gain = j.at("gain").get<double>();
  c.sigma_gain = j.at("sigma_gain").get<double>();
  c.n_add = j.at("n_add").get<double>();
  c.sigma_n_add = j.at("sigma_n_add").get<double>();
  c.reference_plane = j.at("reference_plane").get<std::string>();
  c.frequency_hz = j.at("frequency_hz").get<double>();
  return c;
}

ordered_json link_json(const LinkCalibration& l) {
  ordered_json j;
  j["lambda"] = l.link.lambda;
  j["sigma_lambda"] = l.sigma_lambda;
  j["noise_floor"] = l.noise_floor;
  j["floor_sigma_up"] = l.floor_sigma_up;
  j["floor_sigma_down"] = l.floor_sigma_down;
  j["n_eff_link"] = l.link.n_eff_link;
  return j;
}

// ---------------------------------------------------------------------------
// simulate: ideal spectra for one source point or a sweep of them.

int cmd_simulate(const CommonOpts& opts) {
  Scenario scn = load_scenario(opts);

  std::vector<ThermalBath> points;
  if (!scn.source_sweep_k.empty()) {
    for (double t : scn.source_sweep_k)
      points.push_back(ThermalBath::from_temperature(t));
  } else if (scn.has_source_point()) {
    points.push_back(scn.source);
  } else {
    throw config_error("simulate: scenario has no source point or sweep");
  }

  const double n_en = scn.n_en();
  const auto grid = scn.detuning_grid();
  const std::string digest = digest_hex(scn);
  RecordBuilder rec("simulate", scn);
  ordered_json summary = ordered_json::array();

  for (std::size_t i = 0; i < points.size(); ++i) {
    const double n_s = points[i].occupancy(scn.resonator.f0_hz);
    const double n_in = external_bath_occupancy(scn.link, n_s);
    const double delta_n = n_en - n_in;

    Spectrum s_out = apply_circulator_leakage(scn.resonator, n_en, n_in,
                                              scn.measurement, grid);
    Spectrum s_out_off =
        off_resonance_ideal(scn.resonator, n_en, n_in, scn.measurement, grid);
    Spectrum s_aa = intracavity_psd(scn.resonator, n_en, n_in, grid);

    char tag[32];
    std::snprintf(tag, sizeof(tag), "point%03zu", i);
    const std::string out_name = std::string("s_out_") + tag + ".csv";
    const std::string off_name = std::string("s_out_off_") + tag + ".csv";
    const std::string aa_name = std::string("s_aa_") + tag + ".csv";
    const std::string combined_name = std::string("simulate_") + tag + ".csv";

    MetaList meta{{"scenario_digest", digest},
                  {"n_en", format_double(n_en)},
                  {"n_in", format_double(n_in)}};
    write_spectrum_csv(out_path(opts, out_name), s_out, meta);
    write_spectrum_csv(out_path(opts, off_name), s_out_off, meta);
    write_spectrum_csv(out_path(opts, aa_name), s_aa, meta);

    std::vector<double> s_in_col(grid.size(), output_baseline(n_in));
    std::vector<double> s_en_col(grid.size(), output_baseline(n_en));
    write_table_csv(out_path(opts, combined_name),
                    {"detuning_hz", "s_aa_quanta_per_hz", "s_out_quanta",
                     "s_in_quanta", "s_en_quanta"},
                    {grid, s_aa.value, s_out.value, s_in_col, s_en_col}, meta);

    rec.add_output(out_name, "output-spectrum");
    rec.add_output(off_name, "off-reference-spectrum");
    rec.add_output(aa_name, "intracavity-spectrum");
    rec.add_output(combined_name, "labeled-columns");

    const double peak_excess =
        transmission_at(scn.resonator, 0.0) * delta_n;
    const char* regime = std::abs(delta_n) < 1e-12 ? "flat"
                         : delta_n > 0.0           ? "peak"
                                                   : "dip";
    ordered_json entry;
    if (points[i].has_temperature())
      entry["t_source_k"] = points[i].temperature(scn.resonator.f0_hz);
    entry["n_s"] = n_s;
    entry["n_in"] = n_in;
    entry["delta_n"] = delta_n;
    entry["peak_excess_quanta"] = peak_excess;
    entry["regime"] = regime;
    entry["n_mode"] = mode_occupancy(scn.resonator, n_en, n_in);
    summary.push_back(entry);
    std::printf("simulate %s: regime=%s delta_n=%.6g peak_excess=%.6g\n", tag,
                regime, delta_n, peak_excess);
  }

  ordered_json results;
  results["n_en"] = n_en;
  results["points"] = summary;
  rec.finish(opts, scn, results);
  return kExitOk;
}

// ---------------------------------------------------------------------------
// calibrate: fit gain/added noise from sweep files; pair them into a link.

int cmd_calibrate(const CommonOpts& opts, const std::vector<std::string>& sweeps) {
  Scenario scn = load_scenario(opts);
  if (sweeps.empty() || sweeps.size() > 2)
    throw config_error("calibrate: give one or two --sweep files");

  std::optional<CalibrationResult> g0, gs;
  const double t0 = transmission_at(scn.resonator, 0.0);
  const std::complex<double> leak =
      scn.measurement.leakage_amplitude *
      std::complex<double>(std::cos(scn.measurement.leakage_phase_rad),
                           std::sin(scn.measurement.leakage_phase_rad));
  const double r0 = std::norm(reflection_s11_at(scn.resonator, 0.0) + leak);

  for (const auto& path : sweeps) {
    SweepFile sweep = read_sweep_csv(path);
    CalibrationResult cal =
        fit_noise_thermometry(sweep.points, sweep.frequency_hz, sweep.reference_plane);
    if (sweep.reference_plane == "resonator-output") {
      // The environment signal passes the resonator: slope is G*T(0), and
      // the resonator-plane added noise is T(0)*n' - R(0)*(n_in + 1/2).
      const double n_in =
          scn.has_source_point() ? scn.n_in() : scn.link.noise_floor();
      cal.gain /= t0;
      cal.sigma_gain /= t0;
      cal.n_add = std::max(0.0, t0 * cal.n_add - r0 * (n_in + 0.5));
      cal.sigma_n_add *= t0;
      if (g0) throw data_error("calibrate: two resonator-output sweeps");
      g0 = cal;
    } else if (sweep.reference_plane == "source-output") {
      if (gs) throw data_error("calibrate: two source-output sweeps");
      gs = cal;
    } else {
      throw data_error("calibrate: unknown reference plane '" +
                       sweep.reference_plane + "' in " + path);
    }
  }

  RecordBuilder rec("calibrate", scn);
  ordered_json results;
  if (g0) results["g0"] = calibration_json(*g0);
  if (gs) results["gs"] = calibration_json(*gs);
  if (g0 && gs) {
    LinkCalibration link = link_transmission(*gs, *g0);
    results["link"] = link_json(link);
    std::printf("calibrate: lambda=%.4f +- %.4f, floor=%.4g (+%.2g/-%.2g)\n",
                link.link.lambda, link.sigma_lambda, link.noise_floor,
                link.floor_sigma_up, link.floor_sigma_down);
  }

  std::ofstream out(out_path(opts, "calibration.json"));
  out << results.dump(2) << '\n';
  rec.add_output("calibration.json", "calibration-result");
  rec.finish(opts, scn, results);
  return kExitOk;
}

// ---------------------------------------------------------------------------
// extract: on/off spectra -> delta_n and mode occupancy.

int cmd_extract(const CommonOpts& opts, const std::string& on_path,
                const std::string& off_path,
                const std::string& calibration_path) {
  Scenario scn = load_scenario(opts);
  Spectrum on = read_spectrum_csv(on_path);
  Spectrum off = read_spectrum_csv(off_path);

  std::optional<CalibrationResult> g0;
  if (!calibration_path.empty()) {
    std::ifstream in(calibration_path);
    if (!in) throw data_error("cannot open calibration file: " + calibration_path);
    ordered_json j = ordered_json::parse(in);
    if (!j.contains("g0"))
      throw data_error("calibration file has no resonator-output entry");
    g0 = calibration_from_json(j["g0"]);
  }

  auto to_quanta = [&](Spectrum& s) {
    if (s.unit == "quanta") return;
    if (s.unit != "raw")
      throw data_error("extract: spectra must be in quanta or raw units");
    if (!g0)
      throw data_error("extract: raw spectra need --calibration");
    for (std::size_t i = 0; i < s.size(); ++i) {
      s.value[i] = s.value[i] / g0->gain - g0->n_add;
      if (s.has_sigma()) s.sigma[i] /= g0->gain;
    }
    s.unit = "quanta";
  };
  to_quanta(on);
  to_quanta(off);

  const double d_off = effective_detune_off(scn.resonator, scn.measurement);
  DeltaNEstimate dn = extract_delta_n(on, off, scn.resonator, d_off);
  if (g0)
    dn.sigma = std::hypot(dn.sigma, dn.value * g0->sigma_gain / g0->gain);

  OccupancyEstimate est =
      deduce_mode_occupancy(scn.n_en(), 0.0, dn, scn.resonator);

  RecordBuilder rec("extract", scn);
  ordered_json results = estimate_json(est);
  results["on_file"] = on_path;
  results["off_file"] = off_path;
  std::ofstream out(out_path(opts, "occupancy.json"));
  out << results.dump(2) << '\n';
  rec.add_output("occupancy.json", "occupancy-estimate");
  rec.finish(opts, scn, results);

  std::printf("extract: delta_n=%.4f +- %.4f, n_mode=%.4f +- %.4f%s\n", dn.value,
              dn.sigma, est.n_mode, est.sigma_n_mode,
              est.heating ? " (heating)" : "");
  return kExitOk;
}

// ---------------------------------------------------------------------------
// sweep: full synthetic-measure-then-estimate loop across source temperatures.

int cmd_sweep(const CommonOpts& opts) {
  Scenario scn = load_scenario(opts);
  if (scn.source_sweep_k.empty())
    throw config_error("sweep: scenario needs source.temperature_sweep");

  const CalibratedSetup setup = calibrate_setup(scn, scn.seed);
  const std::string digest = digest_hex(scn);
  RecordBuilder rec("sweep", scn);

  // Persist the calibration inputs so the calibrate/extract verbs can be
  // replayed on files.
  write_complex_spectrum_csv(out_path(opts, "probe.csv"), setup.probe,
                             {{"scenario_digest", digest}});
  rec.add_output("probe.csv", "reflection-probe");
  SweepFile envf{setup.env_sweep, "resonator-output", scn.resonator.f0_hz};
  SweepFile srcf{setup.src_sweep, "source-output", scn.resonator.f0_hz};
  write_sweep_csv(out_path(opts, "cal_env.csv"), envf, {{"scenario_digest", digest}});
  write_sweep_csv(out_path(opts, "cal_source.csv"), srcf, {{"scenario_digest", digest}});
  rec.add_output("cal_env.csv", "environment-thermometry");
  rec.add_output("cal_source.csv", "source-thermometry");

  {
    ordered_json cal;
    cal["g0"] = calibration_json(setup.g0);
    cal["gs"] = calibration_json(setup.gs);
    cal["link"] = link_json(setup.link);
    cal["resonator_fit"] = {{"f0_hz", setup.fit.params.f0_hz},
                            {"kappa_i_hz", setup.fit.params.kappa_i_hz},
                            {"kappa_e_hz", setup.fit.params.kappa_e_hz},
                            {"sigma_kappa_i_hz", setup.fit.sigma_kappa_i()},
                            {"sigma_kappa_e_hz", setup.fit.sigma_kappa_e()},
                            {"converged", setup.fit.report.converged}};
    std::ofstream out(out_path(opts, "calibration.json"));
    out << cal.dump(2) << '\n';
    rec.add_output("calibration.json", "calibration-result");
  }

  const double n_en = scn.n_en();

  // Sweep points are independent (per-point derived seeds); compute them
  // concurrently, then write files in order.
  const std::size_t n_points = scn.source_sweep_k.size();
  std::vector<std::future<ExperimentResult>> futures;
  futures.reserve(n_points);
  for (std::size_t i = 0; i < n_points; ++i) {
    futures.push_back(std::async(std::launch::async, [&scn, &setup, i] {
      return measure_and_extract(
          scn, setup, ThermalBath::from_temperature(scn.source_sweep_k[i]),
          derive_seed(scn.seed, 1000 + i));
    }));
  }

  std::vector<double> col_t, col_est, col_sigma, col_theory, col_true;
  for (std::size_t i = 0; i < n_points; ++i) {
    const double t_s = scn.source_sweep_k[i];
    ExperimentResult r = futures[i].get();
    char tag[32];
    std::snprintf(tag, sizeof(tag), "point%03zu", i);
    const std::string on_name = std::string("spectrum_") + tag + "_on.csv";
    const std::string off_name = std::string("spectrum_") + tag + "_off.csv";
    MetaList meta{{"scenario_digest", digest},
                  {"t_source_k", format_double(t_s)}};
    write_spectrum_csv(out_path(opts, on_name), r.on_raw, meta);
    write_spectrum_csv(out_path(opts, off_name), r.off_raw, meta);
    rec.add_output(on_name, "detected-spectrum-on");
    rec.add_output(off_name, "detected-spectrum-off");

    col_t.push_back(t_s);
    col_est.push_back(r.estimate.n_mode);
    col_sigma.push_back(r.estimate.sigma_n_mode);
    // Theory from the calibrated link and fitted resonator.
    const double n_s = bose_einstein_occupancy(scn.resonator.f0_hz, t_s);
    col_theory.push_back(mode_occupancy(
        setup.fit.params, n_en,
        external_bath_occupancy(setup.link.link, n_s)));
    col_true.push_back(r.n_mode_true);
  }

  double transition_k = 0.0;
  bool has_transition = false;
  try {
    transition_k =
        transition_source_temperature(n_en, setup.link.link, scn.resonator.f0_hz);
    has_transition = true;
  } catch (const std::domain_error&) {
    // Environment sits below the link floor: cooling never turns to heating.
  }

  MetaList table_meta{{"scenario_digest", digest},
                      {"n_en", format_double(n_en)}};
  if (has_transition)
    table_meta.emplace_back("transition_t_source_k", format_double(transition_k));
  write_table_csv(out_path(opts, "sweep_table.csv"),
                  {"t_source_k", "n_mode_est", "sigma_n_mode", "n_mode_theory",
                   "n_mode_true"},
                  {col_t, col_est, col_sigma, col_theory, col_true}, table_meta);
  rec.add_output("sweep_table.csv", "sweep-table");

  ordered_json results;
  results["n_en"] = n_en;
  results["lambda"] = setup.link.link.lambda;
  results["noise_floor"] = setup.link.noise_floor;
  if (has_transition) results["transition_t_source_k"] = transition_k;
  results["points"] = col_t.size();
  rec.finish(opts, scn, results);

  std::printf("sweep: %zu points, lambda=%.3f", col_t.size(),
              setup.link.link.lambda);
  if (has_transition) std::printf(", transition at T_s=%.4f K", transition_k);
  std::printf("\n");
  return kExitOk;
}

// ---------------------------------------------------------------------------
// oracle: stochastic time-domain check of the closed forms.

int cmd_oracle(const CommonOpts& opts, std::size_t trajectories) {
  Scenario scn = load_scenario(opts);
  if (!scn.has_source_point())
    throw config_error("oracle: scenario needs a source point");

  const double n_en = scn.n_en();
  const double n_in = scn.n_in();
  const double kappa = scn.resonator.kappa_hz();

  TrajectoryConfig cfg;
  cfg.res = scn.resonator;
  cfg.n_en = n_en;
  cfg.n_in = n_in;
  // PSD fidelity needs a fine step: the sampled input-output interference
  // is distorted at O(kappa*dt).
  cfg.dt_s = 0.002 / kappa;
  cfg.duration_s = 2000.0 / kappa;
  cfg.seed = scn.seed;

  OracleRun run = run_oracle_ensemble(cfg, trajectories, 16384);

  const double n_mode_closed = mode_occupancy(scn.resonator, n_en, n_in);
  const double occ_dev = run.occupancy - n_mode_closed;
  const bool occ_flag = std::abs(occ_dev) > 3.0 * run.occupancy_std_error;

  LorentzianFit out_fit = fit_lorentzian(run.output_psd);
  const double height_expected = transmission_at(scn.resonator, 0.0) * (n_en - n_in);
  const double baseline_expected = output_baseline(n_in);

  auto rel_dev = [](double got, double want) {
    return want != 0.0 ? (got - want) / want : got;
  };
  const double fwhm_dev = rel_dev(out_fit.fwhm_hz, kappa);
  const double height_dev = rel_dev(out_fit.height, height_expected);
  const double baseline_dev = rel_dev(out_fit.baseline, baseline_expected);

  LorentzianFit mode_fit = fit_lorentzian(run.mode_psd);
  const double vacuum_peak = 0.5 * 2.0 / (3.14159265358979323846 * kappa);
  const double intracavity_expected = intracavity_peak(scn.resonator, n_en, n_in);
  const double mode_peak_dev =
      rel_dev(mode_fit.height - vacuum_peak, intracavity_expected);

  RecordBuilder rec("oracle", scn);
  write_spectrum_csv(out_path(opts, "oracle_mode_psd.csv"), run.mode_psd,
                     {{"scenario_digest", digest_hex(scn)}});
  write_spectrum_csv(out_path(opts, "oracle_output_psd.csv"), run.output_psd,
                     {{"scenario_digest", digest_hex(scn)}});
  rec.add_output("oracle_mode_psd.csv", "oracle-mode-psd");
  rec.add_output("oracle_output_psd.csv", "oracle-output-psd");

  ordered_json results;
  results["trajectories"] = run.trajectories;
  results["occupancy"] = run.occupancy;
  results["occupancy_std_error"] = run.occupancy_std_error;
  results["occupancy_closed_form"] = n_mode_closed;
  results["occupancy_flag_3sigma"] = occ_flag;
  results["output_psd"] = {{"fwhm_hz", out_fit.fwhm_hz},
                           {"fwhm_rel_dev", fwhm_dev},
                           {"height", out_fit.height},
                           {"height_rel_dev", height_dev},
                           {"baseline", out_fit.baseline},
                           {"baseline_rel_dev", baseline_dev},
                           {"flag_10pct", std::abs(fwhm_dev) > 0.10 ||
                                              std::abs(height_dev) > 0.10}};
  results["mode_psd"] = {{"fwhm_hz", mode_fit.fwhm_hz},
                         {"peak_minus_vacuum", mode_fit.height - vacuum_peak},
                         {"intracavity_expected", intracavity_expected},
                         {"peak_rel_dev", mode_peak_dev},
                         {"flag_10pct", std::abs(mode_peak_dev) > 0.10}};

  std::ofstream out(out_path(opts, "oracle_report.json"));
  out << results.dump(2) << '\n';
  rec.add_output("oracle_report.json", "oracle-report");
  rec.finish(opts, scn, results);

  std::printf("oracle: occupancy %.4f +- %.4f (closed form %.4f)%s\n",
              run.occupancy, run.occupancy_std_error, n_mode_closed,
              occ_flag ? " FLAG >3sigma" : "");
  std::printf("oracle: output psd fwhm dev %+.2f%%, height dev %+.2f%%\n",
              100.0 * fwhm_dev, 100.0 * height_dev);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "radcool: thermal-noise simulator and occupancy-calibration pipeline "
      "for a radiatively cooled superconducting resonator"};
  app.require_subcommand(1);
  app.set_version_flag("--version", project_version);

  CommonOpts sim_opts, cal_opts, ext_opts, sweep_opts, oracle_opts;
  std::vector<std::string> sweep_files;
  std::string on_path, off_path, calibration_path;
  std::size_t trajectories = 8;

  auto* sim = app.add_subcommand("simulate", "Emit ideal spectra for a scenario");
  add_common(sim, sim_opts, true);

  auto* cal = app.add_subcommand("calibrate",
                                 "Fit gain and added noise from thermometry sweeps");
  add_common(cal, cal_opts, true);
  cal->add_option("--sweep", sweep_files, "Thermometry sweep file (repeatable)")
      ->required();

  auto* ext = app.add_subcommand("extract",
                                 "Extract delta-n and mode occupancy from "
                                 "on/off spectra");
  add_common(ext, ext_opts, true);
  ext->add_option("--on", on_path, "On-resonance spectrum file")->required();
  ext->add_option("--off", off_path, "Off-resonance spectrum file")->required();
  ext->add_option("--calibration", calibration_path,
                  "calibration.json for raw-unit spectra");

  auto* swp = app.add_subcommand(
      "sweep", "Synthetic measure-then-estimate loop over source temperatures");
  add_common(swp, sweep_opts, true);

  auto* orc = app.add_subcommand("oracle",
                                 "Stochastic time-domain check of the closed forms");
  add_common(orc, oracle_opts, true);
  orc->add_option("--trajectories", trajectories, "Ensemble size")
      ->default_val(8);

  CLI11_PARSE(app, argc, argv);

  try {
    if (sim->parsed()) return cmd_simulate(sim_opts);
    if (cal->parsed()) return cmd_calibrate(cal_opts, sweep_files);
    if (ext->parsed())
      return cmd_extract(ext_opts, on_path, off_path, calibration_path);
    if (swp->parsed()) return cmd_sweep(sweep_opts);
    if (orc->parsed()) return cmd_oracle(oracle_opts, trajectories);
  } catch (const config_error& e) {
    std::cerr << "radcool: config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const convergence_error& e) {
    std::cerr << "radcool: did not converge: " << e.what() << '\n';
    return kExitConvergence;
  } catch (const data_error& e) {
    std::cerr << "radcool: data inconsistency: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "radcool: " << e.what() << '\n';
    return kExitConfig;
  }
  return kExitOk;
}
