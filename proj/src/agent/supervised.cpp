#include "offload/agent/supervised.hpp"

#include <algorithm>
#include <numeric>

namespace offload::agent {

void SlMemory::add(SlSample s) {
  if (capacity_ == 0) return;
  if (samples_.size() == capacity_) samples_.pop_front();
  samples_.push_back(std::move(s));
}

BehaviorModel::BehaviorModel(const SlConfig& config, sim::RngStream& init_rng)
    : cfg_(config), opt_(config.learning_rate) {
  if (cfg_.state_dim <= 0 || cfg_.action_dim <= 0) throw std::invalid_argument("behaviour model dimensions must be positive");
  if (cfg_.batch_size == 0) throw std::invalid_argument("batch size must be positive");
  std::vector<int> sizes{cfg_.state_dim};
  for (int i = 0; i < cfg_.hidden_layers; ++i) sizes.push_back(cfg_.hidden);
  sizes.push_back(cfg_.action_dim);
  net_ = Mlp(sizes);
  net_.init(init_rng, 0.1);
}

double BehaviorModel::step_on(const SlMemory& memory, const std::vector<std::size_t>& batch) {
  Eigen::VectorXd grad = Eigen::VectorXd::Zero(net_.params().size());
  double loss = 0.0;
  Mlp::Cache c;
  for (std::size_t i : batch) {
    const SlSample& s = memory[i];
    Eigen::VectorXd err = net_.forward(s.state, c) - s.action;
    loss += err.squaredNorm();
    grad += net_.backward(c, 2.0 * err);
  }
  const double n = static_cast<double>(batch.size() * static_cast<std::size_t>(cfg_.action_dim));
  grad /= n;
  opt_.step(net_.params(), grad);
  return loss / n;
}

double BehaviorModel::train_step(const SlMemory& memory, sim::RngStream& rng) {
  if (memory.size() < cfg_.batch_size) throw InsufficientData("behaviour memory holds fewer samples than one batch");
  std::vector<std::size_t> batch(cfg_.batch_size);
  for (auto& b : batch) b = rng.index(memory.size());
  return step_on(memory, batch);
}

double BehaviorModel::loss(const SlMemory& memory) const {
  if (memory.size() == 0) throw InsufficientData("behaviour memory is empty");
  double l = 0.0;
  for (std::size_t i = 0; i < memory.size(); ++i)
    l += (net_.forward(memory[i].state) - memory[i].action).squaredNorm();
  return l / static_cast<double>(memory.size() * static_cast<std::size_t>(cfg_.action_dim));
}

std::vector<double> BehaviorModel::train(const SlMemory& memory, int epochs, sim::RngStream& rng) {
  if (memory.size() < cfg_.batch_size) throw InsufficientData("behaviour memory holds fewer samples than one batch");
  std::vector<double> losses;
  std::vector<std::size_t> order(memory.size());
  std::iota(order.begin(), order.end(), 0);
  for (int e = 0; e < epochs; ++e) {
    for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng.index(i)]);
    for (std::size_t start = 0; start < order.size(); start += cfg_.batch_size) {
      std::size_t end = std::min(order.size(), start + cfg_.batch_size);
      step_on(memory, std::vector<std::size_t>(order.begin() + static_cast<std::ptrdiff_t>(start),
                                               order.begin() + static_cast<std::ptrdiff_t>(end)));
    }
    losses.push_back(loss(memory));
  }
  return losses;
}

double fsp_eta(long t, double floor, long floor_after) {
  if (t < 1) throw std::invalid_argument("mixing step starts at 1");
  double eta = 1.0 / static_cast<double>(t);
  if (floor > 0.0 && t > floor_after) eta = std::max(eta, floor);
  return eta;
}

}  // namespace offload::agent
