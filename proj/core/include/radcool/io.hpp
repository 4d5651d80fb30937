#pragma once

#include <string>
#include <utility>
#include <vector>

#include "radcool/estimation.hpp"
#include "radcool/spectrum.hpp"

namespace radcool {

// Shortest round-trip decimal representation (std::to_chars); the basis of
// byte-reproducible output files.
std::string format_double(double v);

// UTC timestamp; honors SOURCE_DATE_EPOCH so run records can be made
// byte-reproducible.
std::string iso8601_timestamp();

using MetaList = std::vector<std::pair<std::string, std::string>>;

// Spectrum files: a commented header block (key: value lines, a columns
// declaration) followed by comma-separated rows, one spectrum per file.
void write_spectrum_csv(const std::string& path, const Spectrum& s,
                        const MetaList& meta = {});
Spectrum read_spectrum_csv(const std::string& path);

void write_complex_spectrum_csv(const std::string& path,
                                const ComplexSpectrum& s,
                                const MetaList& meta = {});
ComplexSpectrum read_complex_spectrum_csv(const std::string& path);

struct SweepFile {
  std::vector<ThermometryPoint> points;
  std::string reference_plane;
  double frequency_hz = 0.0;
};

void write_sweep_csv(const std::string& path, const SweepFile& sweep,
                     const MetaList& meta = {});
SweepFile read_sweep_csv(const std::string& path);

// Generic plot-ready table with named columns.
void write_table_csv(const std::string& path,
                     const std::vector<std::string>& column_names,
                     const std::vector<std::vector<double>>& columns,
                     const MetaList& meta = {});

}  // namespace radcool
