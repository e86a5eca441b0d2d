#pragma once

#include <cstdint>
#include <span>
#include <string>

namespace offload::agent {

struct AgentConfig {
  std::string bidder_id;
  double budget = 100.0;
  double valuation_slope = 1.0;
  double valuation_intercept = 0.0;
  /// Cost c of a lost bid.
  double lost_bid_cost = 1.0;
  /// Utility q of backing off.
  double backoff_cost = 0.1;
  /// Weight W of the system utilization term.
  double utilization_weight = 1.0;
  double backoff_threshold = 0.5;
  std::int64_t max_backoff_ms = 100;
  bool active = true;

  void validate() const;
};

/// v = min(slope * omega + intercept, budget).
double valuation(double resource_estimate, const AgentConfig& config);

/// Gain of a submitted bid: x (v - p) - (1 - x) c.
double bid_gain(int x, double v, double p, double c);

/// Per-type utility. A submitted bid earns its gain minus v when the price
/// was zero; a backed-off request earns q.
double utility_per_type(int x, double v, double p, double c, double q, bool submitted);

/// Sum of per-type utilities plus W (1 - beta).
double utility_total(std::span<const double> per_type, double beta, double w);

}  // namespace offload::agent
