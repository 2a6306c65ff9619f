#pragma once

#include <Eigen/Dense>
#include <utility>

#include "fastmtgp/cubature_types.hpp"
#include "fastmtgp/gp_core.hpp"

// Closed-form Bayesian cubature over [0,1)^d for the periodic product
// kernels, whose base kernels integrate to zero (so int K(x, .) = gamma).

namespace fastmtgp {

// L = 1: mu = mean(y), sigma^2 = gamma - gamma^2 * n / (1^T Ktilde_{:,0}).
std::pair<double, double> single_task_cubature(GpModel& model);

// mu = tau + gamma R (E^T c), Sigma = gamma R - gamma^2 R Pi R.
CubatureResult multitask_cubature(GpModel& model);

// Task weights minimizing E(omega^T I_hat - chi^T I)^2:
// omega = (chi^T mu) (Sigma + mu mu^T)^{-1} mu, with minimum
// (chi^T mu)^2 (1 - mu^T (Sigma + mu mu^T)^{-1} mu).
std::pair<Eigen::VectorXd, double> optimal_weights(const Eigen::VectorXd& mu,
                                                   const Eigen::MatrixXd& Sigma,
                                                   const Eigen::VectorXd& chi);

// omega^T Sigma omega + (omega^T mu - chi^T mu)^2.
double weights_mse(const Eigen::VectorXd& omega, const Eigen::VectorXd& mu,
                   const Eigen::MatrixXd& Sigma, const Eigen::VectorXd& chi);

}  // namespace fastmtgp
