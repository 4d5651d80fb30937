#include <doctest.h>

#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "radcool/io.hpp"
#include "radcool/physics.hpp"
#include "radcool/scenario.hpp"

// Drives the installed binary end to end: verbs, file formats, exit codes,
// run-record replay.

namespace fs = std::filesystem;
using namespace radcool;

namespace {

const char* tool_path() { return RADCOOL_CLI_PATH; }

int run_cli(const std::string& args) {
  const std::string cmd =
      std::string(tool_path()) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "radcool_cli_test" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream out(p);
  out << text;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const char* kHeadlineBase =
    "resonator.f0 = 10.53 GHz\n"
    "resonator.kappa_i = 113 kHz\n"
    "resonator.kappa_e = 298 kHz\n"
    "environment.temperature = 1.02 K\n"
    "source.temperature = 70 mK\n"
    "link.lambda = 0.91\n"
    "link.noise_floor = 0.02\n"
    "seed = 21\n";

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("simulate then extract composes to the identity on delta-n") {
  auto dir = fresh_dir("compose");
  write_file(dir / "s.cfg", kHeadlineBase);
  REQUIRE(run_cli("simulate --scenario " + (dir / "s.cfg").string() + " --out " +
                  (dir / "sim").string()) == 0);

  // Ideal spectra in quanta: extract without a calibration file.
  REQUIRE(run_cli("extract --scenario " + (dir / "s.cfg").string() + " --on " +
                  (dir / "sim" / "s_out_point000.csv").string() + " --off " +
                  (dir / "sim" / "s_out_off_point000.csv").string() + " --out " +
                  (dir / "ext").string()) == 0);

  std::ifstream in(dir / "ext" / "occupancy.json");
  auto j = nlohmann::json::parse(in);
  const double n_en = bose_einstein_occupancy(10.53e9, 1.02);
  const double n_in =
      0.91 * bose_einstein_occupancy(10.53e9, 0.07) + 0.02;
  CHECK(j["delta_n"].get<double>() ==
        doctest::Approx(n_en - n_in).epsilon(0.01));
  CHECK(j["n_mode"].get<double>() ==
        doctest::Approx(mode_occupancy({10.53e9, 113e3, 298e3}, n_en, n_in))
            .epsilon(0.01));

  // The forward peak excess lands at T(0)*delta_n.
  std::ifstream rec_in(dir / "sim" / "run_record.json");
  auto rec = nlohmann::json::parse(rec_in);
  CHECK(rec["results"]["points"][0]["peak_excess_quanta"].get<double>() ==
        doctest::Approx(1.227).epsilon(2e-3));
  CHECK(rec["results"]["points"][0]["regime"] == "peak");
}

TEST_CASE("sweep: monotone estimates crossing n_en near the transition") {
  auto dir = fresh_dir("sweep");
  write_file(dir / "s.cfg", std::string(kHeadlineBase) +
                                "source.temperature_sweep = 0.07:1.45:12 K\n"
                                "grid.points = 301\n");
  REQUIRE(run_cli("sweep --scenario " + (dir / "s.cfg").string() + " --out " +
                  (dir / "out").string()) == 0);

  // Theory column is strictly increasing; estimates cross n_en between the
  // neighbours of the transition temperature.
  auto table = slurp(dir / "out" / "sweep_table.csv");
  std::istringstream lines(table);
  std::string line;
  std::vector<double> t, est, theory;
  while (std::getline(lines, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream row(line);
    std::string tok;
    std::vector<double> vals;
    while (std::getline(row, tok, ',')) vals.push_back(std::stod(tok));
    t.push_back(vals[0]);
    est.push_back(vals[1]);
    theory.push_back(vals[3]);
  }
  REQUIRE(t.size() == 12);
  for (std::size_t i = 1; i < theory.size(); ++i) CHECK(theory[i] > theory[i - 1]);

  const double n_en = bose_einstein_occupancy(10.53e9, 1.02);
  std::ifstream rec_in(dir / "out" / "run_record.json");
  auto rec = nlohmann::json::parse(rec_in);
  const double transition = rec["results"]["transition_t_source_k"].get<double>();
  CHECK(transition == doctest::Approx(1.088).epsilon(0.05));
  for (std::size_t i = 0; i + 1 < t.size(); ++i) {
    if (t[i + 1] < transition) CHECK(est[i] < n_en + 0.15);
    if (t[i] > transition) CHECK(est[i + 1] > n_en - 0.15);
  }

  SUBCASE("single-point sweep emits a single row") {
    auto dir1 = fresh_dir("sweep1");
    write_file(dir1 / "s.cfg", std::string(kHeadlineBase) +
                                   "source.temperature_sweep = 70 mK\n"
                                   "grid.points = 301\n");
    REQUIRE(run_cli("sweep --scenario " + (dir1 / "s.cfg").string() + " --out " +
                    (dir1 / "out").string()) == 0);
    auto t1 = slurp(dir1 / "out" / "sweep_table.csv");
    int rows = 0;
    std::istringstream ls(t1);
    std::string l;
    while (std::getline(ls, l))
      if (!l.empty() && l[0] != '#') ++rows;
    CHECK(rows == 1);
  }
}

TEST_CASE("perfect link sweeps cross exactly at the environment temperature") {
  auto dir = fresh_dir("perfect");
  write_file(dir / "s.cfg",
             "resonator.f0 = 10.53 GHz\n"
             "resonator.kappa_i = 113 kHz\n"
             "resonator.kappa_e = 298 kHz\n"
             "environment.temperature = 1.02 K\n"
             "source.temperature = 70 mK\n"
             "source.temperature_sweep = 0.9:1.2:4 K\n"
             "grid.points = 301\n"
             "seed = 4\n");
  REQUIRE(run_cli("sweep --scenario " + (dir / "s.cfg").string() + " --out " +
                  (dir / "out").string()) == 0);
  std::ifstream rec_in(dir / "out" / "run_record.json");
  auto rec = nlohmann::json::parse(rec_in);
  // Calibrated lambda fluctuates around 1 and is clamped; the transition
  // estimate sits at T_en within the calibration uncertainty.
  CHECK(rec["results"]["transition_t_source_k"].get<double>() ==
        doctest::Approx(1.02).epsilon(0.05));
}

TEST_CASE("oracle command writes a report keyed to the closed forms") {
  auto dir = fresh_dir("oracle");
  write_file(dir / "s.cfg", kHeadlineBase);
  REQUIRE(run_cli("oracle --scenario " + (dir / "s.cfg").string() +
                  " --trajectories 2 --out " + (dir / "out").string()) == 0);
  std::ifstream rec_in(dir / "out" / "oracle_report.json");
  auto rep = nlohmann::json::parse(rec_in);
  const double closed = rep["occupancy_closed_form"].get<double>();
  CHECK(closed == doctest::Approx(0.44375).epsilon(1e-4));
  CHECK(std::abs(rep["occupancy"].get<double>() - closed) / closed < 0.05);
  CHECK_FALSE(rep["occupancy_flag_3sigma"].get<bool>());
  CHECK(std::abs(rep["output_psd"]["fwhm_rel_dev"].get<double>()) < 0.10);

  SUBCASE("vacuum scenario sits at zero") {
    auto dirv = fresh_dir("oracle_vac");
    write_file(dirv / "s.cfg",
               "resonator.f0 = 10.53 GHz\n"
               "resonator.kappa_i = 113 kHz\n"
               "resonator.kappa_e = 298 kHz\n"
               "environment.occupancy = 0\n"
               "source.occupancy = 0\n"
               "seed = 9\n");
    REQUIRE(run_cli("oracle --scenario " + (dirv / "s.cfg").string() +
                    " --trajectories 2 --out " + (dirv / "out").string()) == 0);
    std::ifstream in(dirv / "out" / "oracle_report.json");
    auto r = nlohmann::json::parse(in);
    CHECK(std::abs(r["occupancy"].get<double>()) < 0.02);
    CHECK_FALSE(r["occupancy_flag_3sigma"].get<bool>());
  }
}

TEST_CASE("exit codes map the error taxonomy") {
  auto dir = fresh_dir("exitcodes");

  SUBCASE("malformed config is exit 1") {
    write_file(dir / "bad.cfg", std::string(kHeadlineBase) + "unknown.key = 1\n");
    CHECK(run_cli("simulate --scenario " + (dir / "bad.cfg").string() +
                  " --out " + (dir / "o").string()) == 1);
  }
  SUBCASE("missing scenario file is exit 1") {
    CHECK(run_cli("simulate --scenario /nonexistent.cfg --out " +
                  (dir / "o").string()) == 1);
  }
  SUBCASE("grid mismatch between spectra is exit 3") {
    write_file(dir / "a.cfg", kHeadlineBase);
    write_file(dir / "b.cfg", std::string(kHeadlineBase) + "grid.points = 301\n");
    REQUIRE(run_cli("simulate --scenario " + (dir / "a.cfg").string() +
                    " --out " + (dir / "sa").string()) == 0);
    REQUIRE(run_cli("simulate --scenario " + (dir / "b.cfg").string() +
                    " --out " + (dir / "sb").string()) == 0);
    CHECK(run_cli("extract --scenario " + (dir / "a.cfg").string() + " --on " +
                  (dir / "sa" / "s_out_point000.csv").string() + " --off " +
                  (dir / "sb" / "s_out_off_point000.csv").string() + " --out " +
                  (dir / "x").string()) == 3);
  }
  SUBCASE("unsorted sweep list is exit 1") {
    write_file(dir / "u.cfg", std::string(kHeadlineBase) +
                                  "source.temperature_sweep = 1 K, 0.5 K\n");
    CHECK(run_cli("sweep --scenario " + (dir / "u.cfg").string() + " --out " +
                  (dir / "o").string()) == 1);
  }
  SUBCASE("duplicated reference plane is exit 3") {
    write_file(dir / "s.cfg", std::string(kHeadlineBase) +
                                  "source.temperature_sweep = 0.07:1.45:3 K\n"
                                  "grid.points = 201\n");
    REQUIRE(run_cli("sweep --scenario " + (dir / "s.cfg").string() + " --out " +
                    (dir / "sw").string()) == 0);
    CHECK(run_cli("calibrate --scenario " + (dir / "s.cfg").string() +
                  " --sweep " + (dir / "sw" / "cal_env.csv").string() +
                  " --sweep " + (dir / "sw" / "cal_env.csv").string() +
                  " --out " + (dir / "c").string()) == 3);
  }
}

TEST_CASE("run records replay to byte-identical outputs") {
  auto dir = fresh_dir("replay");
  write_file(dir / "s.cfg", std::string(kHeadlineBase) + "grid.points = 201\n");
  REQUIRE(run_cli("simulate --scenario " + (dir / "s.cfg").string() + " --out " +
                  (dir / "first").string()) == 0);

  // Reconstruct the scenario from the record echo and rerun.
  std::ifstream rec_in(dir / "first" / "run_record.json");
  auto rec = nlohmann::json::parse(rec_in);
  write_file(dir / "echo.cfg", rec["scenario_echo"].get<std::string>());
  const std::uint64_t seed = rec["seed"].get<std::uint64_t>();
  REQUIRE(run_cli("simulate --scenario " + (dir / "echo.cfg").string() +
                  " --seed " + std::to_string(seed) + " --out " +
                  (dir / "second").string()) == 0);

  for (const auto& out : rec["outputs"]) {
    const std::string name = out["file"].get<std::string>();
    CHECK(slurp(dir / "first" / name) == slurp(dir / "second" / name));
  }
  // Digests must agree as well.
  std::ifstream rec2_in(dir / "second" / "run_record.json");
  auto rec2 = nlohmann::json::parse(rec2_in);
  CHECK(rec["scenario_digest"] == rec2["scenario_digest"]);
}

}  // TEST_SUITE
