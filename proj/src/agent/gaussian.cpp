#include "offload/agent/gaussian.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace offload::agent {

namespace {

// Raw diagonal outputs below this are held there, which keeps every factor
// diagonal at least softplus(-5) ~ 0.0067 and Sigma^{-1} finite.
constexpr double kMinRawDiag = -5.0;

}  // namespace

int gaussian_output_size(int d) { return d + d * (d + 1) / 2; }

double softplus(double x) {
  // Stable for large |x|.
  return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  double e = std::exp(x);
  return e / (1.0 + e);
}

GaussianPolicy gaussian_from_raw(const Eigen::VectorXd& raw, int d) {
  if (raw.size() != gaussian_output_size(d)) throw std::invalid_argument("raw output size mismatch");
  GaussianPolicy g;
  g.mu = raw.head(d);
  g.L = Eigen::MatrixXd::Zero(d, d);
  Eigen::Index k = d;
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j <= i; ++j) {
      g.L(i, j) = i == j ? softplus(std::max(raw[k], kMinRawDiag)) : raw[k];
      ++k;
    }
  }
  return g;
}

Eigen::VectorXd sample_gaussian(const GaussianPolicy& g, const Eigen::VectorXd& y) {
  return g.mu + g.L.triangularView<Eigen::Lower>() * y;
}

Eigen::VectorXd sample_gaussian(const GaussianPolicy& g, sim::RngStream& rng) {
  Eigen::VectorXd y(g.dim());
  for (int i = 0; i < g.dim(); ++i) y[i] = rng.normal();
  return sample_gaussian(g, y);
}

double log_density(const GaussianPolicy& g, const Eigen::VectorXd& x) {
  const int d = g.dim();
  Eigen::VectorXd z = g.L.triangularView<Eigen::Lower>().solve(x - g.mu);
  double log_det = 0.0;
  for (int i = 0; i < d; ++i) log_det += 2.0 * std::log(g.L(i, i));
  return -0.5 * (d * std::log(2.0 * std::numbers::pi) + log_det + z.squaredNorm());
}

namespace {

Eigen::MatrixXd sigma_inverse(const GaussianPolicy& g) {
  Eigen::MatrixXd linv = g.L.triangularView<Eigen::Lower>().solve(Eigen::MatrixXd::Identity(g.dim(), g.dim()));
  return linv.transpose() * linv;
}

}  // namespace

Eigen::VectorXd score_mu(const GaussianPolicy& g, const Eigen::VectorXd& x) {
  return sigma_inverse(g) * (x - g.mu);
}

Eigen::MatrixXd score_sigma(const GaussianPolicy& g, const Eigen::VectorXd& x) {
  Eigen::MatrixXd si = sigma_inverse(g);
  Eigen::VectorXd s = si * (x - g.mu);
  return 0.5 * (s * s.transpose() - si);
}

Eigen::VectorXd score_raw(const Eigen::VectorXd& raw, int d, const Eigen::VectorXd& x) {
  GaussianPolicy g = gaussian_from_raw(raw, d);
  Eigen::VectorXd out(raw.size());
  out.head(d) = score_mu(g, x);
  // Sigma = L L^T, so d lnF / dL = (G + G^T) L = 2 G L for symmetric G.
  Eigen::MatrixXd dl = 2.0 * score_sigma(g, x) * g.L;
  Eigen::Index k = d;
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j <= i; ++j) {
      if (i != j) out[k] = dl(i, j);
      else out[k] = raw[k] < kMinRawDiag ? 0.0 : dl(i, j) * sigmoid(raw[k]);
      ++k;
    }
  }
  return out;
}

}  // namespace offload::agent
