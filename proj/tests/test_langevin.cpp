#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "radcool/langevin.hpp"
#include "radcool/physics.hpp"
#include "radcool/rng.hpp"

using namespace radcool;

namespace {

const ResonatorParams kHeadlineRes{10.53e9, 113e3, 298e3};

TrajectoryConfig headline_config(double n_en, double n_in, std::uint64_t seed) {
  TrajectoryConfig cfg;
  cfg.res = kHeadlineRes;
  cfg.n_en = n_en;
  cfg.n_in = n_in;
  const double kappa = cfg.res.kappa_hz();
  cfg.dt_s = 0.01 / kappa;
  cfg.duration_s = 2000.0 / kappa;
  cfg.seed = seed;
  return cfg;
}

}  // namespace

TEST_SUITE("langevin") {

TEST_CASE("vacuum baths leave the mode empty") {
  // Vacuum still drives half-quantum fluctuations in the symmetrized
  // convention; the estimate is a statistical zero.
  auto cfg = headline_config(0.0, 0.0, 5);
  cfg.duration_s = 500.0 / cfg.res.kappa_hz();
  auto tr = simulate_trajectory(cfg);
  CHECK(std::abs(tr.occupancy) <= 3.0 * tr.occupancy_std_error);
  CHECK(tr.occupancy == doctest::Approx(0.0).epsilon(1.0).scale(0.05));
}

TEST_CASE("equilibrium at unit occupancy") {
  auto cfg = headline_config(1.0, 1.0, 6);
  cfg.duration_s = 500.0 / cfg.res.kappa_hz();
  auto tr = simulate_trajectory(cfg);
  CHECK(std::abs(tr.occupancy - 1.0) <= 3.0 * tr.occupancy_std_error);
  CHECK(tr.occupancy == doctest::Approx(1.0).epsilon(0.15));
}

TEST_CASE("ensemble occupancy matches the two-bath steady state") {
  auto cfg = headline_config(1.56, 0.02, 7);
  auto run = run_oracle_ensemble(cfg, 8);
  const double expected = mode_occupancy(kHeadlineRes, 1.56, 0.02);
  CHECK(run.occupancy == doctest::Approx(expected).epsilon(0.05));
  CHECK(std::abs(run.occupancy - expected) <= 4.0 * run.occupancy_std_error);
}

TEST_CASE("exact update is unbiased even at the coarsest allowed step") {
  auto cfg = headline_config(2.0, 0.3, 8);
  cfg.dt_s = 0.099 / cfg.res.kappa_hz();
  cfg.duration_s = 4000.0 / cfg.res.kappa_hz();
  auto run = run_oracle_ensemble(cfg, 6, 512);
  const double expected = mode_occupancy(kHeadlineRes, 2.0, 0.3);
  CHECK(std::abs(run.occupancy - expected) <= 4.0 * run.occupancy_std_error);
  CHECK(run.occupancy == doctest::Approx(expected).epsilon(0.06));
}

TEST_CASE("euler scheme converges to the analytic occupancy at small dt") {
  auto cfg = headline_config(1.56, 0.02, 9);
  cfg.scheme = Discretization::euler_maruyama;
  cfg.dt_s = 0.005 / cfg.res.kappa_hz();
  auto run = run_oracle_ensemble(cfg, 6);
  const double expected = mode_occupancy(kHeadlineRes, 1.56, 0.02);
  CHECK(std::abs(run.occupancy - expected) <=
        4.0 * run.occupancy_std_error + 0.01 * expected);

  // At a coarser step the euler stationary variance is biased high by
  // ~kappa_a*dt/4; verify the sign and rough size of the bias.
  auto coarse = cfg;
  coarse.dt_s = 0.08 / cfg.res.kappa_hz();
  coarse.duration_s = 8000.0 / cfg.res.kappa_hz();
  auto runc = run_oracle_ensemble(coarse, 6, 512);
  const double kad = 2.0 * 3.14159265358979 * coarse.res.kappa_hz() * coarse.dt_s;
  const double predicted = (expected + 0.5) / (1.0 - kad / 4.0) - 0.5;
  CHECK(runc.occupancy == doctest::Approx(predicted).epsilon(0.05));
  CHECK(runc.occupancy > expected);
}

TEST_CASE("trajectories are deterministic per seed") {
  auto cfg = headline_config(1.0, 0.1, 123);
  cfg.duration_s = 150.0 / cfg.res.kappa_hz();
  auto a = simulate_trajectory(cfg);
  auto b = simulate_trajectory(cfg);
  REQUIRE(a.mode.size() == b.mode.size());
  for (std::size_t i = 0; i < a.mode.size(); ++i) {
    CHECK(a.mode[i] == b.mode[i]);
    CHECK(a.output[i] == b.output[i]);
  }
  cfg.seed = 124;
  auto c = simulate_trajectory(cfg);
  CHECK(a.mode[100] != c.mode[100]);
}

TEST_CASE("config preconditions") {
  auto cfg = headline_config(1.0, 0.1, 1);
  cfg.dt_s = 0.5 / cfg.res.kappa_hz();  // unstable step
  CHECK_THROWS_AS(simulate_trajectory(cfg), std::invalid_argument);
  auto short_run = headline_config(1.0, 0.1, 1);
  short_run.duration_s = 20.0 / short_run.res.kappa_hz();
  CHECK_THROWS_AS(simulate_trajectory(short_run), std::invalid_argument);
}

TEST_CASE("welch psd of white noise is flat and satisfies parseval") {
  const double dt = 1e-6;
  const double variance = 2.4;
  GaussianRng rng(31);
  std::vector<std::complex<double>> x(65536);
  for (auto& v : x) v = rng.complex_normal(variance);

  auto psd = estimate_psd(x, dt, 1024);
  // Flat at variance*dt (two-sided, total bandwidth 1/dt)
  const double expected_level = variance * dt;
  double mean_level = 0.0;
  for (double v : psd.value) mean_level += v;
  mean_level /= static_cast<double>(psd.size());
  CHECK(mean_level == doctest::Approx(expected_level).epsilon(0.03));

  // Parseval: integral over the Hz grid reproduces the variance
  double var_est = 0.0;
  for (const auto& v : x) var_est += std::norm(v);
  var_est /= static_cast<double>(x.size());
  const double integral = trapezoid(psd.freq_hz, psd.value) +
                          psd.value.front() * (psd.freq_hz[1] - psd.freq_hz[0]);
  CHECK(integral == doctest::Approx(var_est).epsilon(0.01));

  SUBCASE("too few segments is a precondition error") {
    std::vector<std::complex<double>> tiny(1024);
    CHECK_THROWS_AS(estimate_psd(tiny, dt, 1024), std::invalid_argument);
  }
}

TEST_CASE("mode psd is a lorentzian of width kappa with the right weight") {
  auto cfg = headline_config(1.56, 0.02, 11);
  auto run = run_oracle_ensemble(cfg, 8);
  auto fit = fit_lorentzian(run.mode_psd);
  REQUIRE(fit.converged);

  const double kappa = kHeadlineRes.kappa_hz();
  CHECK(fit.fwhm_hz == doctest::Approx(kappa).epsilon(0.10));

  // The symmetrized trace carries the vacuum half-quantum; subtracting its
  // Lorentzian peak leaves the intracavity density.
  const double vacuum_peak = 0.5 * 2.0 / (3.14159265358979 * kappa);
  const double intracavity = intracavity_peak(kHeadlineRes, 1.56, 0.02);
  CHECK(fit.height - vacuum_peak == doctest::Approx(intracavity).epsilon(0.10));

  // Integrated occupancy: total power minus the vacuum half
  const double total = trapezoid(run.mode_psd.freq_hz, run.mode_psd.value);
  CHECK(total - 0.5 ==
        doctest::Approx(mode_occupancy(kHeadlineRes, 1.56, 0.02)).epsilon(0.08));
}

TEST_CASE("output psd reproduces the input-output spectrum") {
  auto cfg = headline_config(1.56, 0.021, 13);
  cfg.dt_s = 0.004 / cfg.res.kappa_hz();  // interference is O(kappa*dt) exact
  auto run = run_oracle_ensemble(cfg, 8, 8192);
  auto fit = fit_lorentzian(run.output_psd);
  REQUIRE(fit.converged);

  CHECK(fit.baseline == doctest::Approx(output_baseline(0.021)).epsilon(0.05));
  CHECK(fit.fwhm_hz == doctest::Approx(kHeadlineRes.kappa_hz()).epsilon(0.10));
  const double expected_height =
      transmission_at(kHeadlineRes, 0.0) * (1.56 - 0.021);
  CHECK(fit.height == doctest::Approx(expected_height).epsilon(0.10));

  SUBCASE("heating flips the peak into a dip") {
    auto hot = headline_config(0.5, 2.0, 14);
    auto hot_run = run_oracle_ensemble(hot, 4);
    auto hot_fit = fit_lorentzian(hot_run.output_psd);
    REQUIRE(hot_fit.converged);
    CHECK(hot_fit.height < 0.0);
  }
}

TEST_CASE("occupancy standard error follows sqrt(duration) scaling") {
  const double kappa = kHeadlineRes.kappa_hz();
  double se_short = 0.0, se_long = 0.0;
  const int reps = 12;
  for (int i = 0; i < reps; ++i) {
    auto cfg = headline_config(1.56, 0.02, derive_seed(555, i));
    cfg.keep_samples = false;
    cfg.duration_s = 500.0 / kappa;
    se_short += simulate_trajectory(cfg).occupancy_std_error;
    cfg.duration_s = 2000.0 / kappa;
    se_long += simulate_trajectory(cfg).occupancy_std_error;
  }
  // Quadrupling the duration should halve the standard error.
  CHECK(se_long / se_short == doctest::Approx(0.5).epsilon(0.20));
}

}  // TEST_SUITE
