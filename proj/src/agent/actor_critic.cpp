#include "offload/agent/actor_critic.hpp"

#include <cmath>

namespace offload::agent {

namespace {

std::vector<int> layer_sizes(int in, int hidden, int layers, int out) {
  std::vector<int> s{in};
  for (int i = 0; i < layers; ++i) s.push_back(hidden);
  s.push_back(out);
  return s;
}

double clip_in_place(Eigen::VectorXd& g, double bound) {
  double n = g.norm();
  if (!std::isfinite(n)) throw NumericalInstability("non-finite gradient");
  if (n > bound) g *= bound / n;
  if (!std::isfinite(g.norm()) || g.norm() > bound * (1.0 + 1e-9))
    throw NumericalInstability("gradient norm above clip bound after clipping");
  return n;
}

}  // namespace

double td_error(double u, double avg_reward, double v_next, double v_now) {
  return u - avg_reward + v_next - v_now;
}

Eigen::VectorXd initial_actor_bias(const Eigen::VectorXd& raw_mean, double initial_sigma) {
  const int d = static_cast<int>(raw_mean.size());
  Eigen::VectorXd b = Eigen::VectorXd::Zero(gaussian_output_size(d));
  b.head(d) = raw_mean;
  // Inverse softplus of the requested standard deviation.
  const double diag = std::log(std::expm1(initial_sigma));
  Eigen::Index k = d;
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j <= i; ++j) {
      if (i == j) b[k] = diag;
      ++k;
    }
  }
  return b;
}

ActorCritic::ActorCritic(const ActorCriticConfig& config, sim::RngStream& init_rng) : cfg_(config) {
  if (cfg_.state_dim <= 0 || cfg_.action_dim <= 0) throw std::invalid_argument("actor-critic dimensions must be positive");
  actor_ = Mlp(layer_sizes(cfg_.state_dim, cfg_.hidden, cfg_.hidden_layers, gaussian_output_size(cfg_.action_dim)));
  critic_ = Mlp(layer_sizes(cfg_.state_dim, cfg_.hidden, cfg_.hidden_layers, 1));
  actor_.init(init_rng, 0.1);
  critic_.init(init_rng, 0.1);
}

GaussianPolicy ActorCritic::policy(const Eigen::VectorXd& state) const {
  return gaussian_from_raw(actor_.forward(state), cfg_.action_dim);
}

double ActorCritic::value(const Eigen::VectorXd& state) const { return critic_.forward(state)[0]; }

Eigen::VectorXd ActorCritic::value_gradient(const Eigen::VectorXd& state) const {
  Mlp::Cache c;
  critic_.forward(state, c);
  return critic_.backward(c, Eigen::VectorXd::Ones(1));
}

double ActorCritic::log_policy(const Eigen::VectorXd& state, const Eigen::VectorXd& x) const {
  return log_density(policy(state), x);
}

Eigen::VectorXd ActorCritic::log_policy_gradient(const Eigen::VectorXd& state, const Eigen::VectorXd& x) const {
  Mlp::Cache c;
  Eigen::VectorXd raw = actor_.forward(state, c);
  return actor_.backward(c, score_raw(raw, cfg_.action_dim, x));
}

ActorCritic::Update ActorCritic::update(const Eigen::VectorXd& state, const Eigen::VectorXd& taken_raw, double u,
                                        const Eigen::VectorXd& next_state) {
  if (!std::isfinite(u)) throw NumericalInstability("non-finite reward");
  Update out;
  const double v_next = value(next_state);
  const double v_now = critic_.forward(state, critic_cache_)[0];
  out.delta = td_error(u, avg_reward_, v_next, v_now);
  if (!std::isfinite(out.delta)) throw NumericalInstability("non-finite TD error");
  avg_reward_ = cfg_.avg_reward_retention * avg_reward_ + (1.0 - cfg_.avg_reward_retention) * u;
  out.avg_reward = avg_reward_;
  if (out.delta == 0.0) return out;

  critic_.backward(critic_cache_, Eigen::VectorXd::Constant(1, out.delta), critic_grad_);
  out.critic_grad_norm = clip_in_place(critic_grad_, cfg_.grad_clip);
  const Eigen::VectorXd raw = actor_.forward(state, actor_cache_);
  actor_.backward(actor_cache_, out.delta * score_raw(raw, cfg_.action_dim, taken_raw), actor_grad_);
  out.actor_grad_norm = clip_in_place(actor_grad_, cfg_.grad_clip);
  critic_.params() += cfg_.critic_rate * critic_grad_;
  actor_.params() += cfg_.actor_rate * actor_grad_;
  if (!actor_.params().allFinite() || !critic_.params().allFinite())
    throw NumericalInstability("parameters became non-finite");
  return out;
}

}  // namespace offload::agent
