#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace radcool {

struct LevmarOptions {
  int max_iterations = 200;
  double gradient_tol = 1e-12;   // on the infinity norm of J^T r
  double step_tol = 1e-13;       // relative parameter step
  double damping_init = 1e-3;
};

// Damped (Marquardt-scaled) least squares on caller-weighted residuals.
// `covariance` is (J^T J)^-1 at the solution, row-major p x p; callers with
// unit-weighted residuals scale it by chi2/dof themselves.
struct LevmarResult {
  std::vector<double> parameters;
  std::vector<double> covariance;
  double chi2 = 0.0;
  int iterations = 0;
  bool converged = false;

  double cov(std::size_t i, std::size_t j) const {
    return covariance[i * parameters.size() + j];
  }
};

// residual(x, r): fills r (size fixed by n_residuals).
// jacobian(x, jac): fills row-major n_residuals x n_parameters.
using ResidualFn =
    std::function<void(const std::vector<double>&, std::vector<double>&)>;
using JacobianFn =
    std::function<void(const std::vector<double>&, std::vector<double>&)>;

LevmarResult levmar_fit(std::size_t n_residuals, const ResidualFn& residual,
                        const JacobianFn& jacobian, std::vector<double> x0,
                        const LevmarOptions& options = {});

}  // namespace radcool
