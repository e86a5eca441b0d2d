#include "offload/agent/agent.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace offload::agent {

Action squash_action(const Eigen::VectorXd& raw, double budget) {
  const Eigen::Index k = raw.size() / 2;
  Action a;
  for (Eigen::Index i = 0; i < k; ++i) a.backoff.push_back(sigmoid(raw[i]));
  for (Eigen::Index i = 0; i < k; ++i) a.price.push_back(std::clamp(raw[k + i], 0.0, 1.0) * budget);
  return a;
}

Agent::Agent(AgentConfig config, LearningConfig learning, std::vector<double> type_units, FeatureScales scales,
             std::uint64_t seed, const std::string& label)
    : cfg_(std::move(config)),
      lcfg_(learning),
      units_(std::move(type_units)),
      scales_(scales),
      label_(label),
      policy_rng_(seed, label + "/policy"),
      sl_rng_(seed, label + "/sl"),
      memory_(learning.sl_memory) {
  cfg_.validate();
  if (units_.empty()) throw std::invalid_argument("agent needs at least one service type");
  for (double u : units_) valuations_.push_back(valuation(u, cfg_));
  if (!cfg_.active) return;

  const int types = static_cast<int>(units_.size());
  const int d = action_dim();
  window_ = RlWindow(lcfg_.window, rl_step_size(types));
  sim::RngStream init(seed, label + "/init");
  ActorCriticConfig ac;
  ac.state_dim = window_.state_size();
  ac.action_dim = d;
  ac.hidden = lcfg_.hidden;
  ac.actor_rate = lcfg_.actor_rate;
  ac.critic_rate = lcfg_.critic_rate;
  ac.avg_reward_retention = lcfg_.avg_reward_retention;
  ac.grad_clip = lcfg_.grad_clip;
  ac.initial_sigma = lcfg_.initial_sigma;
  rl_ = ActorCritic(ac, init);
  SlConfig sc;
  sc.state_dim = sl_state_size(types);
  sc.action_dim = d;
  sc.hidden = lcfg_.hidden;
  sc.learning_rate = lcfg_.sl_rate;
  sc.batch_size = lcfg_.sl_batch;
  sl_ = BehaviorModel(sc, init);

  // Start both branches near truthful, mostly-submitting behaviour.
  Eigen::VectorXd mean(d);
  for (int i = 0; i < types; ++i) {
    mean[i] = lcfg_.initial_backoff_raw;
    mean[types + i] = valuations_[static_cast<std::size_t>(i)] / cfg_.budget;
  }
  rl_.actor().output_bias() = initial_actor_bias(mean, lcfg_.initial_sigma);
  sl_.net().output_bias() = mean;
}

void Agent::reset_episode(std::uint64_t seed) {
  policy_rng_ = sim::RngStream(seed, label_ + "/policy");
  prev_state_.reset();
  prev_raw_.reset();
  last_.reset();
  if (cfg_.active) window_ = RlWindow(lcfg_.window, window_.step_size());
}

Eigen::VectorXd Agent::passive_raw() const {
  const int types = static_cast<int>(units_.size());
  Eigen::VectorXd raw(2 * types);
  for (int i = 0; i < types; ++i) {
    raw[i] = std::numeric_limits<double>::infinity();
    raw[types + i] = valuations_[static_cast<std::size_t>(i)] / cfg_.budget;
  }
  return raw;
}

Decision Agent::decide(const StepInput& in, double reward, bool learn) {
  Decision dec;
  if (!cfg_.active) {
    dec.raw = passive_raw();
    dec.action.backoff.assign(units_.size(), 1.0);
    dec.action.price = valuations_;
    dec.eta = 0.0;
    return dec;
  }
  ++t_;
  window_.push(encode_rl_step(in, scales_));
  Eigen::VectorXd state = window_.flatten();
  Eigen::VectorXd sl_state = encode_sl_state(in, scales_);

  LearningTrace tr;
  tr.step = t_;
  if (learn && prev_state_) {
    auto up = rl_.update(*prev_state_, *prev_raw_, reward / lcfg_.reward_scale, state);
    tr.delta = up.delta;
    tr.avg_reward = up.avg_reward;
    tr.actor_grad_norm = up.actor_grad_norm;
    tr.critic_grad_norm = up.critic_grad_norm;
  }

  dec.eta = fsp_eta(t_, lcfg_.eta_floor, lcfg_.eta_floor_after);
  dec.best_response = policy_rng_.bernoulli(dec.eta);
  if (dec.best_response) {
    dec.raw = sample_gaussian(rl_.policy(state), policy_rng_);
  } else {
    dec.raw = sl_.predict(sl_state);
  }
  dec.action = squash_action(dec.raw, cfg_.budget);

  if (learn) {
    memory_.add({sl_state, dec.raw});
    if (lcfg_.sl_train_every > 0 && t_ % lcfg_.sl_train_every == 0 && memory_.size() >= lcfg_.sl_batch)
      sl_.train_step(memory_, sl_rng_);
  }
  prev_state_ = std::move(state);
  prev_raw_ = dec.raw;
  tr.eta = dec.eta;
  tr.best_response = dec.best_response;
  last_ = tr;
  return dec;
}

}  // namespace offload::agent
