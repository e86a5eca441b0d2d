#include "offload/agent/state.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace offload::agent {

namespace {

constexpr int kPerType = 7;
constexpr int kPerTypeSl = 5;
constexpr int kEnv = 3;

double unit(double x) { return std::clamp(x, 0.0, 1.0); }

void encode_requests(const StepInput& in, const FeatureScales& s, Eigen::VectorXd& v, Eigen::Index& k, bool prices) {
  for (std::size_t t = 0; t < in.types.size(); ++t) {
    const auto& o = in.types[t];
    v[k++] = unit(static_cast<double>(o.awaiting) / s.max_awaiting);
    v[k++] = o.awaiting > 0 ? unit(o.units / s.max_units) : 0.0;
    v[k++] = o.awaiting > 0 ? unit(o.slack_ms / s.max_deadline_ms) : 0.0;
    v[k++] = o.awaiting > 0 ? unit(o.attempts / s.max_attempts) : 0.0;
    v[k++] = unit(static_cast<double>(o.outstanding) / s.max_awaiting);
    if (prices) {
      const auto& p = t < in.prev_price.size() ? in.prev_price[t] : std::nullopt;
      v[k++] = p ? unit(*p / s.price_scale) : 0.0;
      v[k++] = p ? 1.0 : 0.0;
    }
  }
  v[k++] = unit(in.bidder_count / s.fleet_size);
  v[k++] = unit(in.beta);
  v[k++] = unit(in.gap_ms / s.max_gap_ms);
}

}  // namespace

int rl_step_size(int types) { return kPerType * types + kEnv + 1; }
int sl_state_size(int types) { return kPerTypeSl * types + kEnv; }

Eigen::VectorXd encode_rl_step(const StepInput& in, const FeatureScales& s) {
  const int n = static_cast<int>(in.types.size());
  Eigen::VectorXd v(rl_step_size(n));
  Eigen::Index k = 0;
  encode_requests(in, s, v, k, true);
  v[k++] = std::tanh(in.utility_prev / s.utility_scale);
  return v;
}

Eigen::VectorXd encode_sl_state(const StepInput& in, const FeatureScales& s) {
  const int n = static_cast<int>(in.types.size());
  Eigen::VectorXd v(sl_state_size(n));
  Eigen::Index k = 0;
  encode_requests(in, s, v, k, false);
  return v;
}

RlWindow::RlWindow(int nu, int step_size) : nu_(nu), step_size_(step_size) {
  if (nu <= 0 || step_size <= 0) throw std::invalid_argument("window dimensions must be positive");
  for (int i = 0; i < nu; ++i) steps_.push_back(Eigen::VectorXd::Zero(step_size));
}

void RlWindow::push(Eigen::VectorXd step) {
  if (step.size() != step_size_) throw std::invalid_argument("step has the wrong size");
  steps_.pop_front();
  steps_.push_back(std::move(step));
}

Eigen::VectorXd RlWindow::flatten() const {
  Eigen::VectorXd out(state_size());
  for (int i = 0; i < nu_; ++i) out.segment(static_cast<Eigen::Index>(i) * step_size_, step_size_) = steps_[static_cast<std::size_t>(i)];
  return out;
}

}  // namespace offload::agent
