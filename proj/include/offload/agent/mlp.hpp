#pragma once

#include <Eigen/Dense>
#include <vector>

#include "offload/sim/rng.hpp"

namespace offload::agent {

/// Fully connected network with tanh hidden layers and a linear output.
/// All weights live in one flat vector so optimizers and finite-difference
/// checks can treat the network as a function of a single parameter vector.
class Mlp {
public:
  struct Cache {
    /// Input followed by every hidden activation.
    std::vector<Eigen::VectorXd> activations;
    Eigen::VectorXd output;
  };

  Mlp() = default;
  /// `sizes` = {input, hidden..., output}.
  explicit Mlp(std::vector<int> sizes);

  /// Glorot-uniform weights, zero biases; the output layer is scaled by
  /// `output_scale`.
  void init(sim::RngStream& rng, double output_scale = 1.0);

  int input_dim() const { return sizes_.front(); }
  int output_dim() const { return sizes_.back(); }
  const std::vector<int>& sizes() const { return sizes_; }

  Eigen::VectorXd& params() { return params_; }
  const Eigen::VectorXd& params() const { return params_; }

  Eigen::VectorXd forward(const Eigen::VectorXd& x) const;
  Eigen::VectorXd forward(const Eigen::VectorXd& x, Cache& cache) const;

  /// Gradient of <d_out, output> with respect to the parameters.
  Eigen::VectorXd backward(const Cache& cache, const Eigen::VectorXd& d_out) const;
  /// Same, writing into `grad` (resized as needed) to avoid reallocating.
  void backward(const Cache& cache, const Eigen::VectorXd& d_out, Eigen::VectorXd& grad) const;

  /// Mutable view of the output layer's bias.
  Eigen::Map<Eigen::VectorXd> output_bias();

private:
  std::size_t weight_offset(std::size_t layer) const { return offsets_[layer]; }

  std::vector<int> sizes_;
  std::vector<std::size_t> offsets_;
  Eigen::VectorXd params_;
};

/// Adam optimizer over a flat parameter vector (descent direction).
class Adam {
public:
  explicit Adam(double lr = 1e-3, double beta1 = 0.9, double beta2 = 0.999, double eps = 1e-8)
      : lr_(lr), b1_(beta1), b2_(beta2), eps_(eps) {}
  void step(Eigen::VectorXd& params, const Eigen::VectorXd& grad);
  double learning_rate() const { return lr_; }
  long steps() const { return t_; }

private:
  double lr_, b1_, b2_, eps_;
  Eigen::VectorXd m_, v_;
  long t_ = 0;
};

}  // namespace offload::agent
