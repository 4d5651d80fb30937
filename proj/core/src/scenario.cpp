#include "radcool/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#include "radcool/constants.hpp"
#include "radcool/errors.hpp"
#include "radcool/io.hpp"
#include "radcool/physics.hpp"

namespace radcool {

void Scenario::validate() const {
  resonator.validate();
  if (!environment.is_set())
    throw config_error("scenario: environment temperature or occupancy required");
  link.validate();
  amplifier.validate();
  measurement.validate();
  if (grid.points < 16) throw config_error("scenario: grid.points must be >= 16");
  if (probe_window.points < 30)
    throw config_error("scenario: probe.points must be >= 30");
  if (!(grid.resolve_hz(resonator.kappa_hz()) > 0.0))
    throw config_error("scenario: grid.half_span must be positive");
  if (!std::is_sorted(source_sweep_k.begin(), source_sweep_k.end()))
    throw config_error("scenario: source.temperature_sweep must be sorted");
  if (calibration.temperatures_k.size() < 3)
    throw config_error("scenario: calibration.temperatures needs >= 3 entries");
}

double Scenario::n_en() const { return environment.occupancy(resonator.f0_hz); }

double Scenario::n_s() const {
  if (!source.is_set()) throw config_error("scenario: no source point configured");
  return source.occupancy(resonator.f0_hz);
}

double Scenario::n_in() const { return external_bath_occupancy(link, n_s()); }

std::vector<double> Scenario::detuning_grid() const {
  const double w = grid.resolve_hz(resonator.kappa_hz());
  std::size_t pts = grid.points;
  if (pts % 2 == 0) ++pts;
  return linspace(-w, w, pts);
}

std::vector<double> Scenario::probe_grid() const {
  const double w = probe_window.resolve_hz(resonator.kappa_hz());
  std::size_t pts = probe_window.points;
  if (pts % 2 == 0) ++pts;
  return linspace(-w, w, pts);
}

namespace {

enum class Dimension { frequency, temperature, angle, dimensionless, count, gain };

struct RawEntry {
  std::string key;
  std::string value;
  int line = 0;
};

struct ParsedValue {
  double number = 0.0;
  std::string unit;
};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

ParsedValue split_value(const std::string& text, const RawEntry& entry,
                        const std::string& name) {
  std::istringstream in(trim(text));
  ParsedValue v;
  if (!(in >> v.number))
    throw config_error(name + ":" + std::to_string(entry.line) +
                       ": malformed number in key '" + entry.key + "'");
  in >> v.unit;
  std::string extra;
  if (in >> extra)
    throw config_error(name + ":" + std::to_string(entry.line) +
                       ": trailing garbage in key '" + entry.key + "'");
  return v;
}

// Converts a value+unit to base units (Hz, K, rad, linear gain). The
// "kappa" unit marks linewidth multiples and is resolved by the caller.
double to_base(const ParsedValue& v, Dimension dim, bool* is_kappa_multiple,
               const RawEntry& entry, const std::string& name) {
  auto fail = [&](const std::string& msg) -> double {
    throw config_error(name + ":" + std::to_string(entry.line) + ": " + msg +
                       " in key '" + entry.key + "'");
  };
  if (is_kappa_multiple) *is_kappa_multiple = false;
  const std::string& u = v.unit;
  switch (dim) {
    case Dimension::frequency: {
      if (u == "Hz") return v.number;
      if (u == "kHz") return v.number * 1e3;
      if (u == "MHz") return v.number * 1e6;
      if (u == "GHz") return v.number * 1e9;
      if (u == "kappa" && is_kappa_multiple) {
        *is_kappa_multiple = true;
        return v.number;
      }
      return fail(u.empty() ? "missing frequency unit" : "unknown frequency unit '" + u + "'");
    }
    case Dimension::temperature: {
      if (u == "K") return v.number;
      if (u == "mK") return v.number * 1e-3;
      if (u == "uK") return v.number * 1e-6;
      return fail(u.empty() ? "missing temperature unit" : "unknown temperature unit '" + u + "'");
    }
    case Dimension::angle: {
      if (u.empty() || u == "rad") return v.number;
      if (u == "deg") return v.number * constants::pi / 180.0;
      if (u == "pi") return v.number * constants::pi;
      return fail("unknown angle unit '" + u + "'");
    }
    case Dimension::gain: {
      if (u.empty()) return v.number;
      if (u == "dB") return std::pow(10.0, v.number / 10.0);
      return fail("unknown gain unit '" + u + "'");
    }
    case Dimension::count:
    case Dimension::dimensionless: {
      if (!u.empty()) return fail("unexpected unit '" + u + "'");
      return v.number;
    }
  }
  return fail("unhandled dimension");
}

std::vector<ParsedValue> split_list(const std::string& text, const RawEntry& entry,
                                    const std::string& name) {
  // Either "a unit, b unit, ..." or the compact range "start:stop:count unit".
  const std::string t = trim(text);
  if (t.empty())
    throw config_error(name + ":" + std::to_string(entry.line) +
                       ": empty list in key '" + entry.key + "'");
  std::vector<ParsedValue> out;
  if (t.find(':') != std::string::npos) {
    std::istringstream in(t);
    double start = 0, stop = 0;
    long count = 0;
    char c1 = 0, c2 = 0;
    std::string unit;
    if (!(in >> start >> c1 >> stop >> c2 >> count) || c1 != ':' || c2 != ':' ||
        count < 1)
      throw config_error(name + ":" + std::to_string(entry.line) +
                         ": malformed range in key '" + entry.key + "'");
    in >> unit;
    for (long i = 0; i < count; ++i) {
      const double x =
          count == 1 ? start
                     : start + (stop - start) * static_cast<double>(i) /
                           static_cast<double>(count - 1);
      out.push_back({x, unit});
    }
    return out;
  }
  std::istringstream in(t);
  std::string item;
  while (std::getline(in, item, ',')) out.push_back(split_value(item, entry, name));
  return out;
}

}  // namespace

Scenario parse_scenario_text(const std::string& text, const std::string& name) {
  std::vector<RawEntry> entries;
  {
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      const auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      line = trim(line);
      if (line.empty()) continue;
      const auto eq = line.find('=');
      if (eq == std::string::npos)
        throw config_error(name + ":" + std::to_string(lineno) +
                           ": expected 'key = value', got '" + line + "'");
      RawEntry e;
      e.key = trim(line.substr(0, eq));
      e.value = trim(line.substr(eq + 1));
      e.line = lineno;
      if (e.key.empty())
        throw config_error(name + ":" + std::to_string(lineno) + ": empty key");
      entries.push_back(std::move(e));
    }
  }

  Scenario s;
  std::map<std::string, int> seen;
  for (const auto& e : entries) {
    if (++seen[e.key] > 1)
      throw config_error(name + ":" + std::to_string(e.line) +
                         ": duplicate key '" + e.key + "'");
  }

  // Linewidth-multiple values are resolved after the resonator block.
  struct Pending {
    double* target;
    double multiple;
  };
  std::vector<Pending> pending;
  WindowSpec grid_in = s.grid, probe_in = s.probe_window;
  std::optional<double> link_floor;

  auto scalar = [&](const RawEntry& e, Dimension dim, bool allow_kappa,
                    double* kappa_target) {
    bool is_kappa = false;
    const double v = to_base(split_value(e.value, e, name), dim,
                             allow_kappa ? &is_kappa : nullptr, e, name);
    if (is_kappa) {
      pending.push_back({kappa_target, v});
      return std::optional<double>();
    }
    return std::optional<double>(v);
  };

  for (const auto& e : entries) {
    const std::string& k = e.key;
    if (k == "resonator.f0")
      s.resonator.f0_hz = *scalar(e, Dimension::frequency, false, nullptr);
    else if (k == "resonator.kappa_i")
      s.resonator.kappa_i_hz = *scalar(e, Dimension::frequency, false, nullptr);
    else if (k == "resonator.kappa_e")
      s.resonator.kappa_e_hz = *scalar(e, Dimension::frequency, false, nullptr);
    else if (k == "environment.temperature")
      s.environment = ThermalBath::from_temperature(
          *scalar(e, Dimension::temperature, false, nullptr));
    else if (k == "environment.occupancy")
      s.environment = ThermalBath::from_occupancy(
          *scalar(e, Dimension::dimensionless, false, nullptr));
    else if (k == "source.temperature")
      s.source = ThermalBath::from_temperature(
          *scalar(e, Dimension::temperature, false, nullptr));
    else if (k == "source.occupancy")
      s.source = ThermalBath::from_occupancy(
          *scalar(e, Dimension::dimensionless, false, nullptr));
    else if (k == "source.temperature_sweep") {
      for (const auto& v : split_list(e.value, e, name))
        s.source_sweep_k.push_back(
            to_base(v, Dimension::temperature, nullptr, e, name));
    } else if (k == "link.lambda")
      s.link.lambda = *scalar(e, Dimension::dimensionless, false, nullptr);
    else if (k == "link.n_eff_link")
      s.link.n_eff_link = *scalar(e, Dimension::dimensionless, false, nullptr);
    else if (k == "link.noise_floor")
      link_floor = *scalar(e, Dimension::dimensionless, false, nullptr);
    else if (k == "amplifier.gain")
      s.amplifier.gain = *scalar(e, Dimension::gain, false, nullptr);
    else if (k == "amplifier.n_add")
      s.amplifier.n_add = *scalar(e, Dimension::dimensionless, false, nullptr);
    else if (k == "measurement.resolution_bandwidth")
      s.measurement.resolution_bandwidth_hz =
          *scalar(e, Dimension::frequency, false, nullptr);
    else if (k == "measurement.averages")
      s.measurement.averages = static_cast<std::uint64_t>(
          *scalar(e, Dimension::count, false, nullptr));
    else if (k == "measurement.leakage_amplitude")
      s.measurement.leakage_amplitude =
          *scalar(e, Dimension::dimensionless, false, nullptr);
    else if (k == "measurement.leakage_phase")
      s.measurement.leakage_phase_rad = *scalar(e, Dimension::angle, false, nullptr);
    else if (k == "measurement.detune_off") {
      auto v = scalar(e, Dimension::frequency, true, &s.measurement.detune_off_hz);
      if (v) s.measurement.detune_off_hz = *v;
    } else if (k == "grid.half_span") {
      auto v = scalar(e, Dimension::frequency, true, &grid_in.half_span_hz);
      if (v) {
        grid_in.half_span_hz = *v;
        grid_in.half_span_kappa = 0.0;
      } else {
        grid_in.half_span_hz = 0.0;
        grid_in.half_span_kappa = pending.back().multiple;
        pending.pop_back();
      }
    } else if (k == "grid.points")
      grid_in.points =
          static_cast<std::size_t>(*scalar(e, Dimension::count, false, nullptr));
    else if (k == "probe.half_span") {
      auto v = scalar(e, Dimension::frequency, true, &probe_in.half_span_hz);
      if (v) {
        probe_in.half_span_hz = *v;
        probe_in.half_span_kappa = 0.0;
      } else {
        probe_in.half_span_hz = 0.0;
        probe_in.half_span_kappa = pending.back().multiple;
        pending.pop_back();
      }
    } else if (k == "probe.points")
      probe_in.points =
          static_cast<std::size_t>(*scalar(e, Dimension::count, false, nullptr));
    else if (k == "probe.noise_sigma")
      s.probe_noise_sigma = *scalar(e, Dimension::dimensionless, false, nullptr);
    else if (k == "calibration.temperatures") {
      s.calibration.temperatures_k.clear();
      for (const auto& v : split_list(e.value, e, name))
        s.calibration.temperatures_k.push_back(
            to_base(v, Dimension::temperature, nullptr, e, name));
    } else if (k == "calibration.averages")
      s.calibration.averages = static_cast<std::uint64_t>(
          *scalar(e, Dimension::count, false, nullptr));
    else if (k == "seed")
      s.seed = static_cast<std::uint64_t>(*scalar(e, Dimension::count, false, nullptr));
    else
      throw config_error(name + ":" + std::to_string(e.line) +
                         ": unknown key '" + k + "'");
  }

  s.grid = grid_in;
  s.probe_window = probe_in;

  // Resolve linewidth multiples now that the resonator is known.
  try {
    s.resonator.validate();
  } catch (const std::domain_error& e) {
    throw config_error(name + ": " + e.what());
  }
  const double kappa = s.resonator.kappa_hz();
  for (const auto& p : pending) *p.target = p.multiple * kappa;

  if (link_floor) {
    if (!(s.link.lambda < 1.0) && *link_floor > 0.0)
      throw config_error(name + ": link.noise_floor requires link.lambda < 1");
    s.link.n_eff_link =
        s.link.lambda < 1.0 ? *link_floor / (1.0 - s.link.lambda) : 0.0;
  }

  try {
    s.validate();
  } catch (const std::domain_error& e) {
    throw config_error(name + ": " + e.what());
  }
  return s;
}

Scenario parse_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open scenario file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario_text(buf.str(), path);
}

std::string canonical_scenario_text(const Scenario& s) {
  std::ostringstream out;
  auto emit = [&](const std::string& key, double v, const char* unit) {
    out << key << " = " << format_double(v);
    if (unit[0] != '\0') out << ' ' << unit;
    out << '\n';
  };
  emit("resonator.f0", s.resonator.f0_hz, "Hz");
  emit("resonator.kappa_i", s.resonator.kappa_i_hz, "Hz");
  emit("resonator.kappa_e", s.resonator.kappa_e_hz, "Hz");
  if (s.environment.has_temperature())
    emit("environment.temperature", s.environment.temperature(s.resonator.f0_hz), "K");
  else if (s.environment.is_set())
    emit("environment.occupancy", s.environment.occupancy(s.resonator.f0_hz), "");
  if (s.source.is_set()) {
    if (s.source.has_temperature())
      emit("source.temperature", s.source.temperature(s.resonator.f0_hz), "K");
    else
      emit("source.occupancy", s.source.occupancy(s.resonator.f0_hz), "");
  }
  if (!s.source_sweep_k.empty()) {
    out << "source.temperature_sweep = ";
    for (std::size_t i = 0; i < s.source_sweep_k.size(); ++i) {
      if (i) out << ", ";
      out << format_double(s.source_sweep_k[i]) << " K";
    }
    out << '\n';
  }
  emit("link.lambda", s.link.lambda, "");
  emit("link.n_eff_link", s.link.n_eff_link, "");
  emit("amplifier.gain", s.amplifier.gain, "");
  emit("amplifier.n_add", s.amplifier.n_add, "");
  emit("measurement.resolution_bandwidth", s.measurement.resolution_bandwidth_hz, "Hz");
  out << "measurement.averages = " << s.measurement.averages << '\n';
  emit("measurement.leakage_amplitude", s.measurement.leakage_amplitude, "");
  emit("measurement.leakage_phase", s.measurement.leakage_phase_rad, "rad");
  emit("measurement.detune_off", s.measurement.detune_off_hz, "Hz");
  emit("grid.half_span", s.grid.resolve_hz(s.resonator.kappa_hz()), "Hz");
  out << "grid.points = " << s.grid.points << '\n';
  emit("probe.half_span", s.probe_window.resolve_hz(s.resonator.kappa_hz()), "Hz");
  out << "probe.points = " << s.probe_window.points << '\n';
  emit("probe.noise_sigma", s.probe_noise_sigma, "");
  out << "calibration.temperatures = ";
  for (std::size_t i = 0; i < s.calibration.temperatures_k.size(); ++i) {
    if (i) out << ", ";
    out << format_double(s.calibration.temperatures_k[i]) << " K";
  }
  out << '\n';
  out << "calibration.averages = " << s.calibration.averages << '\n';
  out << "seed = " << s.seed << '\n';
  return out.str();
}

std::uint64_t scenario_digest(const Scenario& s) {
  const std::string text = canonical_scenario_text(s);
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

}  // namespace radcool
