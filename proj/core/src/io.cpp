#include "radcool/io.hpp"

#include <charconv>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <map>
#include <sstream>

#include "radcool/errors.hpp"

namespace radcool {

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string iso8601_timestamp() {
  std::time_t t = 0;
  if (const char* env = std::getenv("SOURCE_DATE_EPOCH")) {
    t = static_cast<std::time_t>(std::strtoll(env, nullptr, 10));
  } else {
    t = std::time(nullptr);
  }
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

namespace {

constexpr const char* kSpectrumMagic = "radcool spectrum";
constexpr const char* kSweepMagic = "radcool thermometry sweep";
constexpr const char* kTableMagic = "radcool table";

struct HeaderBlock {
  std::map<std::string, std::string> keys;
  std::vector<std::string> columns;
  std::string magic;
};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

void write_header(std::ostream& out, const char* magic, const MetaList& meta,
                  const std::vector<std::string>& columns) {
  out << "# " << magic << "\n";
  for (const auto& [k, v] : meta) out << "# " << k << ": " << v << "\n";
  out << "# columns: ";
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (i) out << ",";
    out << columns[i];
  }
  out << "\n";
}

double parse_number(const std::string& tok, const std::string& path, int line) {
  const std::string t = trim(tok);
  double v = 0.0;
  const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
  if (res.ec != std::errc() || res.ptr != t.data() + t.size())
    throw data_error(path + ":" + std::to_string(line) + ": malformed number '" +
                     t + "'");
  return v;
}

// Reads the comment header and the numeric rows of a radcool CSV file.
HeaderBlock read_csv(const std::string& path,
                     std::vector<std::vector<double>>& rows) {
  std::ifstream in(path);
  if (!in) throw data_error("cannot open data file: " + path);
  HeaderBlock hdr;
  std::string line;
  int lineno = 0;
  bool first_comment = true;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty()) continue;
    if (t[0] == '#') {
      std::string body = trim(t.substr(1));
      if (first_comment) {
        hdr.magic = body;
        first_comment = false;
        continue;
      }
      const auto colon = body.find(':');
      if (colon == std::string::npos) continue;
      const std::string key = trim(body.substr(0, colon));
      const std::string value = trim(body.substr(colon + 1));
      if (key == "columns") {
        std::istringstream cs(value);
        std::string col;
        while (std::getline(cs, col, ',')) hdr.columns.push_back(trim(col));
      } else {
        hdr.keys[key] = value;
      }
      continue;
    }
    std::vector<double> row;
    std::istringstream rs(t);
    std::string tok;
    while (std::getline(rs, tok, ',')) row.push_back(parse_number(tok, path, lineno));
    if (!hdr.columns.empty() && row.size() != hdr.columns.size())
      throw data_error(path + ":" + std::to_string(lineno) +
                       ": row width does not match declared columns");
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw data_error(path + ": no data rows");
  return hdr;
}

}  // namespace

void write_spectrum_csv(const std::string& path, const Spectrum& s,
                        const MetaList& meta) {
  s.validate();
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write file: " + path);

  MetaList full;
  full.emplace_back("grid", s.grid == GridKind::detuning_hz ? "detuning_hz"
                                                            : "absolute_hz");
  full.emplace_back("f0_hz", format_double(s.f0_hz));
  full.emplace_back("unit", s.unit);
  for (const auto& m : meta) full.push_back(m);

  std::vector<std::string> cols = {"freq_hz", "value"};
  if (s.has_sigma()) cols.push_back("sigma");
  write_header(out, kSpectrumMagic, full, cols);
  for (std::size_t i = 0; i < s.size(); ++i) {
    out << format_double(s.freq_hz[i]) << ',' << format_double(s.value[i]);
    if (s.has_sigma()) out << ',' << format_double(s.sigma[i]);
    out << '\n';
  }
}

Spectrum read_spectrum_csv(const std::string& path) {
  std::vector<std::vector<double>> rows;
  const HeaderBlock hdr = read_csv(path, rows);
  if (hdr.magic != kSpectrumMagic)
    throw data_error(path + ": not a spectrum file");
  if (const auto cx = hdr.keys.find("complex");
      cx != hdr.keys.end() && cx->second == "true")
    throw data_error(path + ": complex spectrum, use read_complex_spectrum_csv");

  Spectrum s;
  const auto grid_it = hdr.keys.find("grid");
  if (grid_it != hdr.keys.end() && grid_it->second == "absolute_hz")
    s.grid = GridKind::absolute_hz;
  if (const auto it = hdr.keys.find("f0_hz"); it != hdr.keys.end())
    s.f0_hz = parse_number(it->second, path, 0);
  if (const auto it = hdr.keys.find("unit"); it != hdr.keys.end())
    s.unit = it->second;

  const bool with_sigma = hdr.columns.size() >= 3;
  for (const auto& row : rows) {
    if (row.size() < 2) throw data_error(path + ": spectrum rows need >= 2 columns");
    s.freq_hz.push_back(row[0]);
    s.value.push_back(row[1]);
    if (with_sigma) s.sigma.push_back(row[2]);
  }
  s.validate();
  return s;
}

void write_complex_spectrum_csv(const std::string& path,
                                const ComplexSpectrum& s, const MetaList& meta) {
  s.validate();
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write file: " + path);

  MetaList full;
  full.emplace_back("grid", s.grid == GridKind::detuning_hz ? "detuning_hz"
                                                            : "absolute_hz");
  full.emplace_back("f0_hz", format_double(s.f0_hz));
  full.emplace_back("complex", "true");
  for (const auto& m : meta) full.push_back(m);

  std::vector<std::string> cols = {"freq_hz", "re", "im"};
  if (s.has_sigma()) cols.push_back("sigma");
  write_header(out, kSpectrumMagic, full, cols);
  for (std::size_t i = 0; i < s.size(); ++i) {
    out << format_double(s.freq_hz[i]) << ',' << format_double(s.value[i].real())
        << ',' << format_double(s.value[i].imag());
    if (s.has_sigma()) out << ',' << format_double(s.sigma[i]);
    out << '\n';
  }
}

ComplexSpectrum read_complex_spectrum_csv(const std::string& path) {
  std::vector<std::vector<double>> rows;
  const HeaderBlock hdr = read_csv(path, rows);
  if (hdr.magic != kSpectrumMagic)
    throw data_error(path + ": not a spectrum file");
  const auto cx = hdr.keys.find("complex");
  if (cx == hdr.keys.end() || cx->second != "true")
    throw data_error(path + ": not a complex spectrum file");

  ComplexSpectrum s;
  if (const auto it = hdr.keys.find("grid");
      it != hdr.keys.end() && it->second == "absolute_hz")
    s.grid = GridKind::absolute_hz;
  if (const auto it = hdr.keys.find("f0_hz"); it != hdr.keys.end())
    s.f0_hz = parse_number(it->second, path, 0);

  const bool with_sigma = hdr.columns.size() >= 4;
  for (const auto& row : rows) {
    if (row.size() < 3)
      throw data_error(path + ": complex spectrum rows need >= 3 columns");
    s.freq_hz.push_back(row[0]);
    s.value.emplace_back(row[1], row[2]);
    if (with_sigma) s.sigma.push_back(row[3]);
  }
  s.validate();
  return s;
}

void write_sweep_csv(const std::string& path, const SweepFile& sweep,
                     const MetaList& meta) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  MetaList full;
  full.emplace_back("reference_plane", sweep.reference_plane);
  full.emplace_back("frequency_hz", format_double(sweep.frequency_hz));
  for (const auto& m : meta) full.push_back(m);
  write_header(out, kSweepMagic, full, {"temperature_k", "raw_psd", "sigma"});
  for (const auto& p : sweep.points)
    out << format_double(p.temperature_k) << ',' << format_double(p.raw_psd)
        << ',' << format_double(p.sigma) << '\n';
}

SweepFile read_sweep_csv(const std::string& path) {
  std::vector<std::vector<double>> rows;
  const HeaderBlock hdr = read_csv(path, rows);
  if (hdr.magic != kSweepMagic)
    throw data_error(path + ": not a thermometry sweep file");

  SweepFile sweep;
  if (const auto it = hdr.keys.find("reference_plane"); it != hdr.keys.end())
    sweep.reference_plane = it->second;
  if (const auto it = hdr.keys.find("frequency_hz"); it != hdr.keys.end())
    sweep.frequency_hz = parse_number(it->second, path, 0);
  if (sweep.reference_plane.empty() || !(sweep.frequency_hz > 0.0))
    throw data_error(path + ": sweep file missing reference_plane or frequency_hz");
  for (const auto& row : rows) {
    if (row.size() < 2) throw data_error(path + ": sweep rows need >= 2 columns");
    ThermometryPoint p;
    p.temperature_k = row[0];
    p.raw_psd = row[1];
    p.sigma = row.size() >= 3 ? row[2] : 0.0;
    sweep.points.push_back(p);
  }
  return sweep;
}

void write_table_csv(const std::string& path,
                     const std::vector<std::string>& column_names,
                     const std::vector<std::vector<double>>& columns,
                     const MetaList& meta) {
  if (column_names.size() != columns.size() || columns.empty())
    throw std::invalid_argument("write_table_csv: column mismatch");
  const std::size_t n = columns[0].size();
  for (const auto& c : columns)
    if (c.size() != n) throw std::invalid_argument("write_table_csv: ragged columns");

  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  write_header(out, kTableMagic, meta, column_names);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t c = 0; c < columns.size(); ++c) {
      if (c) out << ',';
      out << format_double(columns[c][i]);
    }
    out << '\n';
  }
}

}  // namespace radcool
