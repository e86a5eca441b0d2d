#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "offload/agent/actor_critic.hpp"
#include "offload/agent/state.hpp"
#include "offload/agent/supervised.hpp"
#include "offload/agent/utility.hpp"
#include "offload/sim/rng.hpp"

namespace offload::agent {

struct LearningConfig {
  int window = 8;
  int hidden = 32;
  double actor_rate = 1e-4;
  double critic_rate = 1e-3;
  double avg_reward_retention = 0.99;
  double grad_clip = 10.0;
  double initial_sigma = 0.3;
  /// Initial raw backoff mean; sigmoid(1) ~ 0.73 submits at threshold 0.5.
  double initial_backoff_raw = 1.0;
  double sl_rate = 1e-3;
  std::size_t sl_batch = 32;
  std::size_t sl_memory = 10000;
  int sl_train_every = 4;
  double eta_floor = 0.01;
  long eta_floor_after = 100;
  /// Utilities are divided by this before they reach the learner.
  double reward_scale = 1.0;
};

/// The per-type action actually emitted.
struct Action {
  std::vector<double> backoff;
  std::vector<double> price;
};

/// Raw action layout: backoff components for every type, then prices.
/// Backoff squashes through a sigmoid; price is the raw value clamped to
/// [0, 1] and scaled by the budget.
Action squash_action(const Eigen::VectorXd& raw, double budget);

struct Decision {
  Action action;
  Eigen::VectorXd raw;
  bool best_response = false;
  double eta = 1.0;
};

struct LearningTrace {
  long step = 0;
  double eta = 0.0;
  double delta = 0.0;
  double avg_reward = 0.0;
  double actor_grad_norm = 0.0;
  double critic_grad_norm = 0.0;
  bool best_response = false;
};

/// A bidder. Passive agents always submit at their valuation. Active agents
/// mix a behavioural model with an actor-critic best response.
class Agent {
public:
  /// `type_units` holds omega for every catalog type (catalog order).
  Agent(AgentConfig config, LearningConfig learning, std::vector<double> type_units, FeatureScales scales,
        std::uint64_t seed, const std::string& label);

  /// Records the reward accumulated since the previous decision, learns
  /// from that transition when `learn` is set, and picks the next action.
  Decision decide(const StepInput& in, double reward, bool learn);

  const AgentConfig& config() const { return cfg_; }
  const LearningConfig& learning() const { return lcfg_; }
  const std::vector<double>& valuations() const { return valuations_; }
  int action_dim() const { return 2 * static_cast<int>(units_.size()); }
  long step() const { return t_; }
  void set_step(long t) { t_ = t; }
  const std::optional<LearningTrace>& last_trace() const { return last_; }

  ActorCritic& rl() { return rl_; }
  const ActorCritic& rl() const { return rl_; }
  BehaviorModel& sl() { return sl_; }
  const BehaviorModel& sl() const { return sl_; }

  /// Starts a new run: empties the observation window, forgets the pending
  /// transition and reseeds the action sampler. Parameters are kept.
  void reset_episode(std::uint64_t seed);

  /// Raw action of a passive agent (alpha = 1 saturated, price = valuation).
  Eigen::VectorXd passive_raw() const;

private:
  AgentConfig cfg_;
  LearningConfig lcfg_;
  std::vector<double> units_;
  std::vector<double> valuations_;
  FeatureScales scales_;
  std::string label_;
  sim::RngStream policy_rng_;
  sim::RngStream sl_rng_;
  ActorCritic rl_;
  BehaviorModel sl_;
  SlMemory memory_;
  RlWindow window_;
  long t_ = 0;
  std::optional<Eigen::VectorXd> prev_state_;
  std::optional<Eigen::VectorXd> prev_raw_;
  std::optional<LearningTrace> last_;
};

}  // namespace offload::agent
