#pragma once

#include <Eigen/Dense>
#include <deque>
#include <stdexcept>

#include "offload/agent/mlp.hpp"
#include "offload/sim/rng.hpp"

namespace offload::agent {

struct InsufficientData : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SlSample {
  Eigen::VectorXd state;
  Eigen::VectorXd action;
};

/// Sliding window of the most recent (state, action) pairs.
class SlMemory {
public:
  explicit SlMemory(std::size_t capacity = 10000) : capacity_(capacity) {}
  void add(SlSample s);
  std::size_t size() const { return samples_.size(); }
  std::size_t capacity() const { return capacity_; }
  const SlSample& operator[](std::size_t i) const { return samples_[i]; }

private:
  std::size_t capacity_;
  std::deque<SlSample> samples_;
};

struct SlConfig {
  int state_dim = 0;
  int action_dim = 0;
  int hidden = 32;
  int hidden_layers = 1;
  double learning_rate = 1e-3;
  std::size_t batch_size = 32;
};

/// Regression model of the agent's own past actions (mean squared error).
class BehaviorModel {
public:
  BehaviorModel() = default;
  BehaviorModel(const SlConfig& config, sim::RngStream& init_rng);

  Eigen::VectorXd predict(const Eigen::VectorXd& state) const { return net_.forward(state); }

  /// One Adam step on a uniform minibatch; returns the batch loss before the
  /// step. Throws InsufficientData below one batch.
  double train_step(const SlMemory& memory, sim::RngStream& rng);

  /// Full-batch loss over the memory.
  double loss(const SlMemory& memory) const;

  /// Epochs of shuffled minibatch passes; returns the full-batch loss after
  /// each epoch.
  std::vector<double> train(const SlMemory& memory, int epochs, sim::RngStream& rng);

  Mlp& net() { return net_; }
  const Mlp& net() const { return net_; }
  const SlConfig& config() const { return cfg_; }

private:
  double step_on(const SlMemory& memory, const std::vector<std::size_t>& batch);

  SlConfig cfg_;
  Mlp net_;
  Adam opt_;
};

/// Mixing probability of the best-response branch at step t >= 1: 1/t, or
/// max(1/t, floor) once t exceeds floor_after when a floor is set.
double fsp_eta(long t, double floor = 0.0, long floor_after = 100);

}  // namespace offload::agent
