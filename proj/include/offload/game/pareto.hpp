#pragma once

#include <stdexcept>
#include <vector>

namespace offload::game {

struct InfeasibleFairness : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Equilibrium allocation between two bidders with linear best responses
/// j_i v_i + d_i: the item goes to bidder 1 when j1 v1 + d1 >= j2 v2 + d2.
struct AllocationRule {
  double j1 = 1.0, d1 = 0.0, j2 = 1.0, d2 = 0.0;
  /// Target ratio of resource won by bidder 1 to resource won by bidder 2.
  double gamma = 1.0;
  double lambda_star = 0.0;

  void validate() const;
  /// Valuation coefficients v_i = g_i omega_i + k_i under which the rule
  /// is the Lagrangian-optimal allocation.
  double g1() const { return (1.0 + lambda_star) / j1; }
  double k1() const { return -d1 / j1; }
  double g2() const { return (1.0 - gamma * lambda_star) / j2; }
  double k2() const { return -d2 / j2; }
};

/// Rule equivalent to "bidder 1 wins when omega1 >= tau * omega2" for the
/// given gamma: lambda* = (1 - tau) / (tau + gamma).
AllocationRule rule_for_threshold(double tau, double gamma, double j1, double d1, double j2, double d2);

struct ResourceSample {
  double omega1 = 0.0;
  double omega2 = 0.0;
};

/// Winner (1 or 2) of every equally likely sample point.
std::vector<int> apply_rule(const AllocationRule& rule, const std::vector<ResourceSample>& samples);

/// E[omega1 1{A=1}] / E[omega2 1{A=2}]; infinite when bidder 2 never wins.
double fairness_ratio(const std::vector<ResourceSample>& samples, const std::vector<int>& alloc);

/// E[omega_A]: mean resource handed out.
double allocated_resource(const std::vector<ResourceSample>& samples, const std::vector<int>& alloc);

struct ParetoReport {
  std::vector<int> rule_alloc;
  double rule_welfare = 0.0;
  double rule_ratio = 0.0;
  std::vector<int> best_alloc;
  double best_welfare = 0.0;
  double best_ratio = 0.0;
  bool pass = false;
};

/// Compares the rule with the best of all 2^n allocations whose fairness
/// ratio is within `ratio_tol` of gamma. Passes when the rule reaches
/// (1 - welfare_tol) of that optimum. At most 20 sample points.
ParetoReport pareto_fairness_check(const AllocationRule& rule, const std::vector<ResourceSample>& samples,
                                   double ratio_tol = 1e-3, double welfare_tol = 0.01);

}  // namespace offload::game
