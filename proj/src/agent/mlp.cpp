#include "offload/agent/mlp.hpp"

#include <cmath>
#include <stdexcept>

namespace offload::agent {

Mlp::Mlp(std::vector<int> sizes) : sizes_(std::move(sizes)) {
  if (sizes_.size() < 2) throw std::invalid_argument("network needs an input and an output size");
  for (int s : sizes_)
    if (s <= 0) throw std::invalid_argument("layer sizes must be positive");
  std::size_t total = 0;
  for (std::size_t l = 0; l + 1 < sizes_.size(); ++l) {
    offsets_.push_back(total);
    total += static_cast<std::size_t>(sizes_[l + 1]) * (sizes_[l] + 1);
  }
  params_ = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(total));
}

void Mlp::init(sim::RngStream& rng, double output_scale) {
  for (std::size_t l = 0; l + 1 < sizes_.size(); ++l) {
    const int in = sizes_[l];
    const int out = sizes_[l + 1];
    double limit = std::sqrt(6.0 / (in + out));
    if (l + 2 == sizes_.size()) limit *= output_scale;
    std::size_t off = offsets_[l];
    for (int i = 0; i < out * in; ++i) params_[static_cast<Eigen::Index>(off + i)] = rng.uniform(-limit, limit);
    for (int i = 0; i < out; ++i) params_[static_cast<Eigen::Index>(off + out * in + i)] = 0.0;
  }
}

Eigen::VectorXd Mlp::forward(const Eigen::VectorXd& x) const {
  Cache c;
  return forward(x, c);
}

Eigen::VectorXd Mlp::forward(const Eigen::VectorXd& x, Cache& cache) const {
  if (x.size() != sizes_.front()) throw std::invalid_argument("network input has the wrong size");
  cache.activations.clear();
  cache.activations.push_back(x);
  Eigen::VectorXd h = x;
  const std::size_t layers = sizes_.size() - 1;
  for (std::size_t l = 0; l < layers; ++l) {
    const int in = sizes_[l];
    const int out = sizes_[l + 1];
    const double* base = params_.data() + offsets_[l];
    Eigen::Map<const Eigen::MatrixXd> w(base, out, in);
    Eigen::Map<const Eigen::VectorXd> b(base + out * in, out);
    Eigen::VectorXd z = w * h + b;
    if (l + 1 < layers) {
      h = z.array().tanh().matrix();
      cache.activations.push_back(h);
    } else {
      h = std::move(z);
    }
  }
  cache.output = h;
  return h;
}

Eigen::VectorXd Mlp::backward(const Cache& cache, const Eigen::VectorXd& d_out) const {
  Eigen::VectorXd grad;
  backward(cache, d_out, grad);
  return grad;
}

void Mlp::backward(const Cache& cache, const Eigen::VectorXd& d_out, Eigen::VectorXd& grad) const {
  if (d_out.size() != sizes_.back()) throw std::invalid_argument("output gradient has the wrong size");
  grad.resize(params_.size());
  Eigen::VectorXd delta = d_out;
  const std::size_t layers = sizes_.size() - 1;
  for (std::size_t l = layers; l-- > 0;) {
    const int in = sizes_[l];
    const int out = sizes_[l + 1];
    const Eigen::VectorXd& h_in = cache.activations[l];
    double* g = grad.data() + offsets_[l];
    Eigen::Map<Eigen::MatrixXd> gw(g, out, in);
    Eigen::Map<Eigen::VectorXd> gb(g + out * in, out);
    gw.noalias() = delta * h_in.transpose();
    gb = delta;
    if (l > 0) {
      Eigen::Map<const Eigen::MatrixXd> w(params_.data() + offsets_[l], out, in);
      Eigen::VectorXd back = w.transpose() * delta;
      delta = (back.array() * (1.0 - h_in.array().square())).matrix();
    }
  }
}

Eigen::Map<Eigen::VectorXd> Mlp::output_bias() {
  const std::size_t l = sizes_.size() - 2;
  const int in = sizes_[l];
  const int out = sizes_[l + 1];
  return Eigen::Map<Eigen::VectorXd>(params_.data() + offsets_[l] + out * in, out);
}

void Adam::step(Eigen::VectorXd& params, const Eigen::VectorXd& grad) {
  if (m_.size() != params.size()) {
    m_ = Eigen::VectorXd::Zero(params.size());
    v_ = Eigen::VectorXd::Zero(params.size());
    t_ = 0;
  }
  ++t_;
  m_ = b1_ * m_ + (1.0 - b1_) * grad;
  v_ = b2_ * v_ + (1.0 - b2_) * grad.cwiseProduct(grad);
  const double c1 = 1.0 - std::pow(b1_, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(b2_, static_cast<double>(t_));
  params.array() -= lr_ * (m_.array() / c1) / ((v_.array() / c2).sqrt() + eps_);
}

}  // namespace offload::agent
