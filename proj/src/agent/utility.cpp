#include "offload/agent/utility.hpp"

#include <algorithm>
#include <stdexcept>

namespace offload::agent {

void AgentConfig::validate() const {
  if (!(budget > 0.0)) throw std::invalid_argument("budget must be positive");
  if (lost_bid_cost < 0.0) throw std::invalid_argument("lost bid cost must be non-negative");
  if (utilization_weight < 0.0) throw std::invalid_argument("utilization weight must be non-negative");
  if (!(backoff_threshold > 0.0 && backoff_threshold < 1.0))
    throw std::invalid_argument("backoff threshold must be in (0, 1)");
  if (max_backoff_ms <= 0) throw std::invalid_argument("max backoff must be positive");
}

double valuation(double resource_estimate, const AgentConfig& config) {
  if (!(resource_estimate > 0.0)) throw std::invalid_argument("resource estimate must be positive");
  return std::min(config.valuation_slope * resource_estimate + config.valuation_intercept, config.budget);
}

double bid_gain(int x, double v, double p, double c) {
  if (x != 0 && x != 1) throw std::invalid_argument("bid outcome must be 0 or 1");
  return x * (v - p) - (1 - x) * c;
}

double utility_per_type(int x, double v, double p, double c, double q, bool submitted) {
  if (!submitted) return q;
  double zero_price_term = p == 0.0 ? v : 0.0;
  return bid_gain(x, v, p, c) - zero_price_term;
}

double utility_total(std::span<const double> per_type, double beta, double w) {
  if (!(beta >= 0.0 && beta <= 1.0)) throw std::invalid_argument("utilization must be in [0, 1]");
  double s = 0.0;
  for (double u : per_type) s += u;
  return s + w * (1.0 - beta);
}

}  // namespace offload::agent
