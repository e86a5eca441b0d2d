#include "offload/game/pareto.hpp"

#include <cmath>
#include <limits>

#include "offload/game/static_game.hpp"

namespace offload::game {

void AllocationRule::validate() const {
  if (!(j1 > 0.0) || !(j2 > 0.0)) throw std::invalid_argument("best-response slopes must be positive");
  if (!(gamma > 0.0)) throw std::invalid_argument("fairness ratio must be positive");
}

AllocationRule rule_for_threshold(double tau, double gamma, double j1, double d1, double j2, double d2) {
  if (!(tau > 0.0)) throw std::invalid_argument("threshold must be positive");
  AllocationRule r{j1, d1, j2, d2, gamma, (1.0 - tau) / (tau + gamma)};
  r.validate();
  return r;
}

std::vector<int> apply_rule(const AllocationRule& rule, const std::vector<ResourceSample>& samples) {
  rule.validate();
  std::vector<int> out;
  for (const auto& s : samples) {
    double v1 = rule.g1() * s.omega1 + rule.k1();
    double v2 = rule.g2() * s.omega2 + rule.k2();
    out.push_back(rule.j1 * v1 + rule.d1 >= rule.j2 * v2 + rule.d2 ? 1 : 2);
  }
  return out;
}

double fairness_ratio(const std::vector<ResourceSample>& samples, const std::vector<int>& alloc) {
  double e1 = 0.0, e2 = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (alloc[i] == 1) e1 += samples[i].omega1;
    else e2 += samples[i].omega2;
  }
  if (e2 == 0.0) return std::numeric_limits<double>::infinity();
  return e1 / e2;
}

double allocated_resource(const std::vector<ResourceSample>& samples, const std::vector<int>& alloc) {
  if (samples.empty()) return 0.0;
  double s = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) s += alloc[i] == 1 ? samples[i].omega1 : samples[i].omega2;
  return s / static_cast<double>(samples.size());
}

ParetoReport pareto_fairness_check(const AllocationRule& rule, const std::vector<ResourceSample>& samples,
                                   double ratio_tol, double welfare_tol) {
  if (samples.empty()) throw std::invalid_argument("need at least one sample point");
  if (samples.size() > 20) throw TooLarge("brute-force allocation search limited to 20 points");
  ParetoReport r;
  r.rule_alloc = apply_rule(rule, samples);
  r.rule_welfare = allocated_resource(samples, r.rule_alloc);
  r.rule_ratio = fairness_ratio(samples, r.rule_alloc);

  const std::size_t n = samples.size();
  bool found = false;
  std::vector<int> alloc(n);
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    for (std::size_t i = 0; i < n; ++i) alloc[i] = (mask >> i) & 1U ? 1 : 2;
    double ratio = fairness_ratio(samples, alloc);
    if (!(std::abs(ratio - rule.gamma) <= ratio_tol)) continue;
    double w = allocated_resource(samples, alloc);
    if (!found || w > r.best_welfare) {
      found = true;
      r.best_welfare = w;
      r.best_ratio = ratio;
      r.best_alloc = alloc;
    }
  }
  if (!found) throw InfeasibleFairness("no allocation meets the fairness ratio");
  r.pass = r.rule_welfare >= (1.0 - welfare_tol) * r.best_welfare;
  return r;
}

}  // namespace offload::game
