#pragma once

#include <Eigen/Dense>
#include <stdexcept>

#include "offload/agent/gaussian.hpp"
#include "offload/agent/mlp.hpp"
#include "offload/sim/rng.hpp"

namespace offload::agent {

struct NumericalInstability : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ActorCriticConfig {
  int state_dim = 0;
  int action_dim = 0;
  int hidden = 32;
  int hidden_layers = 2;
  double actor_rate = 1e-4;
  double critic_rate = 1e-3;
  /// Retention of the average-reward estimate per update.
  double avg_reward_retention = 0.99;
  /// Bound on the norm of each update direction.
  double grad_clip = 10.0;
  /// Initial output bias for the factor diagonal (softplus(raw) = sigma).
  double initial_sigma = 0.3;
};

/// delta = u - u_bar + V(S') - V(S).
double td_error(double u, double avg_reward, double v_next, double v_now);

/// Average-reward actor-critic with a Gaussian policy over raw actions.
class ActorCritic {
public:
  ActorCritic() = default;
  ActorCritic(const ActorCriticConfig& config, sim::RngStream& init_rng);

  GaussianPolicy policy(const Eigen::VectorXd& state) const;
  double value(const Eigen::VectorXd& state) const;

  /// Gradient of V(state) with respect to the critic parameters.
  Eigen::VectorXd value_gradient(const Eigen::VectorXd& state) const;
  /// Gradient of ln pi(x | state) with respect to the actor parameters.
  Eigen::VectorXd log_policy_gradient(const Eigen::VectorXd& state, const Eigen::VectorXd& x) const;
  double log_policy(const Eigen::VectorXd& state, const Eigen::VectorXd& x) const;

  struct Update {
    double delta = 0.0;
    double avg_reward = 0.0;
    double actor_grad_norm = 0.0;
    double critic_grad_norm = 0.0;
  };

  /// One step of the critic and actor on transition (S, x, u, S').
  Update update(const Eigen::VectorXd& state, const Eigen::VectorXd& taken_raw, double u,
                const Eigen::VectorXd& next_state);

  Mlp& actor() { return actor_; }
  Mlp& critic() { return critic_; }
  const Mlp& actor() const { return actor_; }
  const Mlp& critic() const { return critic_; }
  double avg_reward() const { return avg_reward_; }
  void set_avg_reward(double v) { avg_reward_ = v; }
  const ActorCriticConfig& config() const { return cfg_; }

private:
  ActorCriticConfig cfg_;
  Mlp actor_;
  Mlp critic_;
  double avg_reward_ = 0.0;
  // scratch space reused across updates
  Mlp::Cache actor_cache_;
  Mlp::Cache critic_cache_;
  Eigen::VectorXd actor_grad_;
  Eigen::VectorXd critic_grad_;
};

/// Default raw-output bias that makes a fresh actor (or behavioural model)
/// act sensibly: the given raw means and a diagonal factor of initial_sigma.
Eigen::VectorXd initial_actor_bias(const Eigen::VectorXd& raw_mean, double initial_sigma);

}  // namespace offload::agent
