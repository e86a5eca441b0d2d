#pragma once

#include <Eigen/Dense>
#include <deque>
#include <optional>
#include <vector>

namespace offload::agent {

/// What an agent sees about one service type when it decides.
struct TypeObservation {
  /// Requests of this type waiting for a decision.
  int awaiting = 0;
  /// Estimated resource need (omega) of the type.
  double units = 0.0;
  /// Time left to the tightest deadline among the awaiting requests.
  double slack_ms = 0.0;
  /// Submissions already spent by the most-tried awaiting request.
  int attempts = 0;
  /// Requests of this type with a bid or backoff in progress.
  int outstanding = 0;
};

/// One decision step's raw inputs.
struct StepInput {
  std::vector<TypeObservation> types;
  /// Last final price per type; empty where the agent had no bid.
  std::vector<std::optional<double>> prev_price;
  /// Other vehicles currently in range.
  double bidder_count = 0.0;
  /// System utilization from the latest feedback.
  double beta = 0.0;
  double gap_ms = 0.0;
  double utility_prev = 0.0;
};

/// Ranges used to bring every feature into [0, 1] (or [-1, 1] for utility).
struct FeatureScales {
  double max_units = 1.0;
  double max_deadline_ms = 1.0;
  double price_scale = 1.0;
  double fleet_size = 1.0;
  double max_attempts = 1.0;
  double utility_scale = 10.0;
  double max_gap_ms = 100.0;
  int max_awaiting = 4;
};

/// Per type: awaiting, omega, slack, attempts, outstanding, previous price,
/// price-present flag; then bidder count, beta, gap; then previous utility.
int rl_step_size(int types);
Eigen::VectorXd encode_rl_step(const StepInput& in, const FeatureScales& s);

/// The request and environment part only (no prices, no utility).
int sl_state_size(int types);
Eigen::VectorXd encode_sl_state(const StepInput& in, const FeatureScales& s);

/// The nu most recent steps, oldest first, zero-padded at the start.
class RlWindow {
public:
  RlWindow() = default;
  RlWindow(int nu, int step_size);
  void push(Eigen::VectorXd step);
  Eigen::VectorXd flatten() const;
  int nu() const { return nu_; }
  int step_size() const { return step_size_; }
  int state_size() const { return nu_ * step_size_; }
  /// Step i, 0 = oldest.
  const Eigen::VectorXd& step(int i) const { return steps_[static_cast<std::size_t>(i)]; }

private:
  int nu_ = 0;
  int step_size_ = 0;
  std::deque<Eigen::VectorXd> steps_;
};

}  // namespace offload::agent
