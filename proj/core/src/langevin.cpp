#include "radcool/langevin.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <future>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "radcool/constants.hpp"
#include "radcool/levmar.hpp"
#include "radcool/physics.hpp"
#include "radcool/rng.hpp"

namespace radcool {

using constants::two_pi;

void TrajectoryConfig::validate() const {
  res.validate();
  if (!(n_en >= 0.0) || !(n_in >= 0.0))
    throw std::domain_error("trajectory: occupancies must be >= 0");
  const double kappa = res.kappa_hz();
  if (!(dt_s > 0.0) || dt_s * kappa > 0.1)
    throw std::invalid_argument("trajectory: time step must satisfy dt*kappa <= 0.1");
  if (!(duration_s * kappa >= 100.0))
    throw std::invalid_argument("trajectory: duration must cover >= 100/kappa");
}

namespace {

// Standard error of the mean of a correlated series via batch means.
double batch_std_error(const std::vector<double>& v, std::size_t n_batches) {
  if (v.size() < 2 * n_batches) n_batches = std::max<std::size_t>(v.size() / 2, 1);
  if (n_batches < 2) return 0.0;
  const std::size_t len = v.size() / n_batches;
  std::vector<double> means(n_batches, 0.0);
  for (std::size_t b = 0; b < n_batches; ++b) {
    double acc = 0.0;
    for (std::size_t i = b * len; i < (b + 1) * len; ++i) acc += v[i];
    means[b] = acc / static_cast<double>(len);
  }
  double m = 0.0;
  for (double x : means) m += x;
  m /= static_cast<double>(n_batches);
  double var = 0.0;
  for (double x : means) var += (x - m) * (x - m);
  var /= static_cast<double>(n_batches - 1);
  return std::sqrt(var / static_cast<double>(n_batches));
}

}  // namespace

TrajectoryResult simulate_trajectory(const TrajectoryConfig& cfg) {
  cfg.validate();

  const double kappa = cfg.res.kappa_hz();
  const double ka = two_pi * kappa;                  // angular rates for dynamics
  const double ki_a = two_pi * cfg.res.kappa_i_hz;
  const double ke_a = two_pi * cfg.res.kappa_e_hz;
  const double dt = cfg.dt_s;
  const std::size_t n_steps =
      static_cast<std::size_t>(std::llround(cfg.duration_s / dt));
  const std::size_t burn_in =
      std::min<std::size_t>(static_cast<std::size_t>(std::ceil(10.0 / (kappa * dt))),
                            n_steps / 2);

  const double s_en = cfg.n_en + 0.5;  // symmetrized bath spectral weights
  const double s_in = cfg.n_in + 0.5;

  GaussianRng rng(cfg.seed);
  TrajectoryResult out;
  out.dt_s = dt;
  out.burn_in = burn_in;
  const std::size_t kept = n_steps - burn_in;
  if (cfg.keep_samples) {
    out.mode.reserve(kept);
    out.output.reserve(kept);
  }

  std::vector<double> intensity;
  intensity.reserve(kept);

  std::complex<double> a{0.0, 0.0};
  const double sqrt_ke = std::sqrt(ke_a);

  if (cfg.scheme == Discretization::exact_ou) {
    const double alpha = std::exp(-0.5 * ka * dt);
    const double relax = (1.0 - alpha * alpha) / ka;
    const double v_en = ki_a * s_en * relax;
    const double v_in = ke_a * s_in * relax;
    const double v_w = s_in * dt;
    // Cross-covariance between the raw external-bath increment and its
    // filtered contribution to the mode over one step.
    const double c = std::sqrt(ke_a) * s_in * (2.0 / ka) * (1.0 - alpha);
    const double gain_wi = v_w > 0.0 ? c / v_w : 0.0;
    const double v_cond = std::max(0.0, v_in - (v_w > 0.0 ? c * c / v_w : 0.0));

    for (std::size_t k = 0; k < n_steps; ++k) {
      const std::complex<double> dw_in = rng.complex_normal(v_w);
      const std::complex<double> xi_in = gain_wi * dw_in + rng.complex_normal(v_cond);
      const std::complex<double> xi_en = rng.complex_normal(v_en);
      if (k >= burn_in) {
        if (cfg.keep_samples) {
          out.mode.push_back(a);
          out.output.push_back(dw_in / dt - sqrt_ke * a);
        }
        intensity.push_back(std::norm(a));
      }
      a = alpha * a + xi_en + xi_in;
    }
  } else {
    const double decay = 1.0 - 0.5 * ka * dt;
    const double v_en = ki_a * s_en * dt;
    const double v_in = s_in * dt;  // raw increment; enters scaled by sqrt(ke)
    for (std::size_t k = 0; k < n_steps; ++k) {
      const std::complex<double> dw_in = rng.complex_normal(v_in);
      const std::complex<double> dw_en = rng.complex_normal(v_en);
      if (k >= burn_in) {
        if (cfg.keep_samples) {
          out.mode.push_back(a);
          out.output.push_back(dw_in / dt - sqrt_ke * a);
        }
        intensity.push_back(std::norm(a));
      }
      a = decay * a + dw_en + sqrt_ke * dw_in;
    }
  }

  double mean = 0.0;
  for (double v : intensity) mean += v;
  mean /= static_cast<double>(intensity.size());
  out.occupancy = mean - 0.5;
  out.occupancy_std_error = batch_std_error(intensity, 32);
  return out;
}

namespace {

std::mutex fftw_planner_mutex;

// In-place forward transforms of each `seg`-long row in `data`.
class SegmentFft {
 public:
  explicit SegmentFft(std::size_t n) : n_(n), buf_(n) {
    std::lock_guard<std::mutex> lock(fftw_planner_mutex);
    plan_ = fftw_plan_dft_1d(static_cast<int>(n),
                             reinterpret_cast<fftw_complex*>(buf_.data()),
                             reinterpret_cast<fftw_complex*>(buf_.data()),
                             FFTW_FORWARD, FFTW_ESTIMATE);
  }
  ~SegmentFft() {
    std::lock_guard<std::mutex> lock(fftw_planner_mutex);
    fftw_destroy_plan(plan_);
  }
  SegmentFft(const SegmentFft&) = delete;
  SegmentFft& operator=(const SegmentFft&) = delete;

  std::vector<std::complex<double>>& buffer() { return buf_; }
  void execute() { fftw_execute(plan_); }

 private:
  std::size_t n_;
  std::vector<std::complex<double>> buf_;
  fftw_plan plan_;
};

}  // namespace

Spectrum estimate_psd(const std::vector<std::complex<double>>& samples,
                      double dt_s, std::size_t segment, GridKind grid,
                      double f0_hz) {
  if (!(dt_s > 0.0)) throw std::invalid_argument("estimate_psd: dt must be positive");
  if (segment < 8) throw std::invalid_argument("estimate_psd: segment too short");
  const std::size_t hop = segment / 2;
  if (samples.size() < segment)
    throw std::invalid_argument("estimate_psd: fewer samples than one segment");
  const std::size_t n_seg = (samples.size() - segment) / hop + 1;
  if (n_seg < 8)
    throw std::invalid_argument("estimate_psd: need at least 8 Welch segments");

  // Periodic Hann window.
  std::vector<double> window(segment);
  double wsum2 = 0.0;
  for (std::size_t i = 0; i < segment; ++i) {
    window[i] = 0.5 * (1.0 - std::cos(two_pi * static_cast<double>(i) /
                                      static_cast<double>(segment)));
    wsum2 += window[i] * window[i];
  }

  // No per-segment demeaning: the fields are zero-mean by construction and
  // the resonance sits at DC in the rotating frame, so subtracting segment
  // means would notch out the center of the line.
  SegmentFft fft(segment);
  std::vector<double> acc(segment, 0.0);
  for (std::size_t s = 0; s < n_seg; ++s) {
    auto& buf = fft.buffer();
    const std::size_t off = s * hop;
    for (std::size_t i = 0; i < segment; ++i)
      buf[i] = samples[off + i] * window[i];
    fft.execute();
    for (std::size_t i = 0; i < segment; ++i) acc[i] += std::norm(buf[i]);
  }

  const double norm = dt_s / (wsum2 * static_cast<double>(n_seg));
  const double df = 1.0 / (static_cast<double>(segment) * dt_s);

  // Reorder to an ascending frequency axis centered on zero.
  Spectrum psd;
  psd.grid = grid;
  psd.f0_hz = f0_hz;
  psd.unit = "quanta";
  psd.freq_hz.resize(segment);
  psd.value.resize(segment);
  const std::size_t half = segment / 2;
  for (std::size_t i = 0; i < segment; ++i) {
    const std::size_t src = (i + half) % segment;  // fft bin for this axis point
    const double f = (static_cast<double>(i) - static_cast<double>(half)) * df;
    psd.freq_hz[i] = grid == GridKind::absolute_hz ? f0_hz + f : f;
    psd.value[i] = acc[src] * norm;
  }
  return psd;
}

OracleRun run_oracle_ensemble(const TrajectoryConfig& cfg,
                              std::size_t n_trajectories,
                              std::size_t psd_segment) {
  if (n_trajectories == 0)
    throw std::invalid_argument("oracle: need at least one trajectory");

  struct Piece {
    double occupancy;
    double std_error;
    Spectrum mode_psd;
    Spectrum output_psd;
  };

  auto run_one = [&](std::size_t idx) {
    TrajectoryConfig c = cfg;
    c.seed = derive_seed(cfg.seed, idx);
    c.keep_samples = true;
    TrajectoryResult tr = simulate_trajectory(c);
    Piece p;
    p.occupancy = tr.occupancy;
    p.std_error = tr.occupancy_std_error;
    const double f0 = cfg.rotating_frame ? 0.0 : cfg.res.f0_hz;
    const GridKind kind =
        cfg.rotating_frame ? GridKind::detuning_hz : GridKind::absolute_hz;
    p.mode_psd = estimate_psd(tr.mode, tr.dt_s, psd_segment, kind, f0);
    p.mode_psd.unit = "quanta_per_hz";
    p.output_psd = estimate_psd(tr.output, tr.dt_s, psd_segment, kind, f0);
    return p;
  };

  const std::size_t workers = std::max<std::size_t>(
      1, std::min<std::size_t>(n_trajectories, std::thread::hardware_concurrency()));
  std::vector<Piece> pieces(n_trajectories);
  if (workers > 1) {
    std::vector<std::future<Piece>> futures;
    futures.reserve(n_trajectories);
    for (std::size_t t = 0; t < n_trajectories; ++t)
      futures.push_back(std::async(std::launch::async, run_one, t));
    for (std::size_t t = 0; t < n_trajectories; ++t) pieces[t] = futures[t].get();
  } else {
    for (std::size_t t = 0; t < n_trajectories; ++t) pieces[t] = run_one(t);
  }

  OracleRun merged;
  merged.trajectories = n_trajectories;
  merged.mode_psd = pieces[0].mode_psd;
  merged.output_psd = pieces[0].output_psd;
  double occ = pieces[0].occupancy;
  double var = pieces[0].std_error * pieces[0].std_error;
  for (std::size_t t = 1; t < n_trajectories; ++t) {
    occ += pieces[t].occupancy;
    var += pieces[t].std_error * pieces[t].std_error;
    for (std::size_t i = 0; i < merged.mode_psd.size(); ++i) {
      merged.mode_psd.value[i] += pieces[t].mode_psd.value[i];
      merged.output_psd.value[i] += pieces[t].output_psd.value[i];
    }
  }
  const double inv = 1.0 / static_cast<double>(n_trajectories);
  merged.occupancy = occ * inv;
  merged.occupancy_std_error = std::sqrt(var) * inv;
  for (auto& v : merged.mode_psd.value) v *= inv;
  for (auto& v : merged.output_psd.value) v *= inv;
  return merged;
}

LorentzianFit fit_lorentzian(const Spectrum& psd) {
  psd.validate();
  const std::size_t n = psd.size();
  if (n < 8) throw std::invalid_argument("fit_lorentzian: too few points");

  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = psd.detuning_hz(i);

  // Initial guesses from the extremum against the edge median.
  std::vector<double> edges;
  for (std::size_t i = 0; i < n / 8; ++i) {
    edges.push_back(psd.value[i]);
    edges.push_back(psd.value[n - 1 - i]);
  }
  std::nth_element(edges.begin(), edges.begin() + edges.size() / 2, edges.end());
  const double base0 = edges[edges.size() / 2];
  std::size_t i_ext = 0;
  for (std::size_t i = 1; i < n; ++i)
    if (std::abs(psd.value[i] - base0) > std::abs(psd.value[i_ext] - base0))
      i_ext = i;
  const double height0 = psd.value[i_ext] - base0;
  const double span = x.back() - x.front();
  double fwhm0 = span / 20.0;
  for (std::size_t i = i_ext; i < n; ++i) {
    if (std::abs(psd.value[i] - base0) < 0.5 * std::abs(height0)) {
      fwhm0 = 2.0 * std::abs(x[i] - x[i_ext]);
      break;
    }
  }

  auto model = [&](const std::vector<double>& p, double xi) {
    const double u = 2.0 * (xi - p[2]) / p[3];
    return p[0] + p[1] / (1.0 + u * u);
  };
  auto residual = [&](const std::vector<double>& p, std::vector<double>& r) {
    for (std::size_t i = 0; i < n; ++i) r[i] = model(p, x[i]) - psd.value[i];
  };
  auto jacobian = [&](const std::vector<double>& p, std::vector<double>& jac) {
    for (std::size_t i = 0; i < n; ++i) {
      const double u = 2.0 * (x[i] - p[2]) / p[3];
      const double den = 1.0 + u * u;
      const double lor = 1.0 / den;
      jac[i * 4 + 0] = 1.0;
      jac[i * 4 + 1] = lor;
      jac[i * 4 + 2] = p[1] * lor * lor * 2.0 * u * (2.0 / p[3]);
      jac[i * 4 + 3] = p[1] * lor * lor * 2.0 * u * u / p[3];
    }
  };

  LevmarResult lm = levmar_fit(n, residual, jacobian,
                               {base0, height0, x[i_ext], std::abs(fwhm0)});
  LorentzianFit fit;
  fit.baseline = lm.parameters[0];
  fit.height = lm.parameters[1];
  fit.center_hz = lm.parameters[2];
  fit.fwhm_hz = std::abs(lm.parameters[3]);
  fit.converged = lm.converged;
  return fit;
}

}  // namespace radcool
