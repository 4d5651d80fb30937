#include "radcool/levmar.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>

namespace radcool {

LevmarResult levmar_fit(std::size_t n_residuals, const ResidualFn& residual,
                        const JacobianFn& jacobian, std::vector<double> x0,
                        const LevmarOptions& options) {
  const std::size_t p = x0.size();
  if (p == 0) throw std::invalid_argument("levmar: no parameters");
  if (n_residuals < p) throw std::invalid_argument("levmar: underdetermined problem");

  Eigen::VectorXd x = Eigen::Map<Eigen::VectorXd>(x0.data(), p);
  Eigen::VectorXd r(n_residuals);
  Eigen::MatrixXd jac(n_residuals, p);
  std::vector<double> rbuf(n_residuals), jbuf(n_residuals * p);

  auto eval_residual = [&](const Eigen::VectorXd& xv, Eigen::VectorXd& out) {
    std::vector<double> xs(xv.data(), xv.data() + p);
    residual(xs, rbuf);
    out = Eigen::Map<Eigen::VectorXd>(rbuf.data(), n_residuals);
  };
  auto eval_jacobian = [&](const Eigen::VectorXd& xv) {
    std::vector<double> xs(xv.data(), xv.data() + p);
    jacobian(xs, jbuf);
    jac = Eigen::Map<
        Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
        jbuf.data(), n_residuals, p);
  };

  eval_residual(x, r);
  double chi2 = r.squaredNorm();
  double damping = options.damping_init;

  LevmarResult result;
  result.iterations = 0;
  bool converged = false;

  for (int iter = 0; iter < options.max_iterations && !converged; ++iter) {
    result.iterations = iter + 1;
    eval_jacobian(x);
    Eigen::MatrixXd hess = jac.transpose() * jac;
    Eigen::VectorXd grad = jac.transpose() * r;

    if (grad.lpNorm<Eigen::Infinity>() < options.gradient_tol) {
      converged = true;
      break;
    }

    bool stepped = false;
    for (int attempt = 0; attempt < 25; ++attempt) {
      Eigen::MatrixXd damped = hess;
      for (std::size_t k = 0; k < p; ++k) {
        const double d = hess(k, k);
        damped(k, k) = d + damping * (d > 0.0 ? d : 1.0);
      }
      Eigen::VectorXd step = damped.ldlt().solve(-grad);
      if (!step.allFinite()) {
        damping *= 10.0;
        continue;
      }
      Eigen::VectorXd x_try = x + step;
      Eigen::VectorXd r_try(n_residuals);
      eval_residual(x_try, r_try);
      const double chi2_try = r_try.squaredNorm();
      if (std::isfinite(chi2_try) && chi2_try <= chi2) {
        const double rel_step =
            step.norm() / (x.norm() + options.step_tol);
        x = x_try;
        r = r_try;
        const double improvement = chi2 - chi2_try;
        chi2 = chi2_try;
        damping = std::max(damping / 3.0, 1e-12);
        stepped = true;
        if (rel_step < options.step_tol ||
            improvement < options.gradient_tol * (1.0 + chi2))
          converged = true;
        break;
      }
      damping *= 10.0;
    }
    if (!stepped) {
      // Damping exhausted without an acceptable step: local minimum.
      converged = grad.lpNorm<Eigen::Infinity>() < 1e-6 * (1.0 + chi2);
      break;
    }
  }

  eval_jacobian(x);
  Eigen::MatrixXd hess = jac.transpose() * jac;
  Eigen::MatrixXd cov = hess.ldlt().solve(Eigen::MatrixXd::Identity(p, p));

  result.parameters.assign(x.data(), x.data() + p);
  result.covariance.assign(p * p, 0.0);
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = 0; j < p; ++j) result.covariance[i * p + j] = cov(i, j);
  result.chi2 = chi2;
  result.converged = converged;
  return result;
}

}  // namespace radcool
