#pragma once

#include <Eigen/Dense>

#include "offload/sim/rng.hpp"

namespace offload::agent {

/// Multivariate normal parameterised by its mean and a lower-triangular
/// factor L with positive diagonal (covariance L L^T).
struct GaussianPolicy {
  Eigen::VectorXd mu;
  Eigen::MatrixXd L;

  int dim() const { return static_cast<int>(mu.size()); }
  Eigen::MatrixXd covariance() const { return L * L.transpose(); }
};

/// Number of raw network outputs for a d-dimensional action: d means plus
/// d(d+1)/2 factor entries.
int gaussian_output_size(int d);

double softplus(double x);
double sigmoid(double x);

/// Raw outputs -> (mu, L). Factor entries are read row by row over the
/// lower triangle; diagonal entries pass through softplus, with raw values
/// below -5 held at -5 so the factor stays invertible.
GaussianPolicy gaussian_from_raw(const Eigen::VectorXd& raw, int d);

/// zeta = mu + L y with y standard normal.
Eigen::VectorXd sample_gaussian(const GaussianPolicy& g, sim::RngStream& rng);
Eigen::VectorXd sample_gaussian(const GaussianPolicy& g, const Eigen::VectorXd& y);

/// ln F(x) including the normalising constant.
double log_density(const GaussianPolicy& g, const Eigen::VectorXd& x);

/// Score with respect to mu: Sigma^{-1} (x - mu).
Eigen::VectorXd score_mu(const GaussianPolicy& g, const Eigen::VectorXd& x);

/// Score with respect to Sigma: (Sigma^{-1} r r^T Sigma^{-1} - Sigma^{-1}) / 2.
Eigen::MatrixXd score_sigma(const GaussianPolicy& g, const Eigen::VectorXd& x);

/// Gradient of ln F(x) with respect to the raw outputs that produced `g`.
Eigen::VectorXd score_raw(const Eigen::VectorXd& raw, int d, const Eigen::VectorXd& x);

}  // namespace offload::agent
