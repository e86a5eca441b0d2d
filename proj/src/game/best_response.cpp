#include "offload/game/best_response.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

namespace offload::game {

namespace {

// Nodes and weights of n-point Gauss-Legendre on [-1, 1] (Golub-Welsch).
struct Rule {
  std::vector<double> x, w;
};

const Rule& gauss_legendre(int n) {
  static std::vector<Rule> cache;
  if (static_cast<int>(cache.size()) <= n) cache.resize(static_cast<std::size_t>(n) + 1);
  Rule& r = cache[static_cast<std::size_t>(n)];
  if (!r.x.empty()) return r;
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (int i = 1; i < n; ++i) {
    double b = i / std::sqrt(4.0 * i * i - 1.0);
    J(i, i - 1) = J(i - 1, i) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  for (int i = 0; i < n; ++i) {
    r.x.push_back(es.eigenvalues()[i]);
    double v0 = es.eigenvectors()(0, i);
    r.w.push_back(2.0 * v0 * v0);
  }
  return r;
}

template <class F>
double integrate(F f, double lo, double hi, int n) {
  if (!(hi > lo)) return 0.0;
  const Rule& r = gauss_legendre(n);
  const double half = 0.5 * (hi - lo);
  const double mid = 0.5 * (hi + lo);
  double s = 0.0;
  for (std::size_t i = 0; i < r.x.size(); ++i) s += r.w[i] * f(mid + half * r.x[i]);
  return s * half;
}

}  // namespace

double LinearOpponent::bid(double v1) const {
  return a1 + (b1 - a1) * (v1 - l1) / (m1 - l1);
}

double expected_bid_utility(const LinearOpponent& opp, const BestResponseParams& params, double v2, double b) {
  if (!(opp.m1 > opp.l1) || !(opp.b1 > opp.a1)) throw std::invalid_argument("opponent strategy must be strictly increasing");
  if (params.quadrature_nodes < 1) throw std::invalid_argument("need at least one quadrature node");
  // Split the valuation range where the opponent's bid crosses b.
  double cut = opp.l1 + (b - opp.a1) * (opp.m1 - opp.l1) / (opp.b1 - opp.a1);
  cut = std::clamp(cut, opp.l1, opp.m1);
  const double density = 1.0 / (opp.m1 - opp.l1);
  auto win = [&](double v1) { return (v2 - opp.bid(v1)) * density; };
  auto lose = [&](double) { return -params.c * density; };
  return integrate(win, opp.l1, cut, params.quadrature_nodes) + integrate(lose, cut, opp.m1, params.quadrature_nodes);
}

std::vector<CurvePoint> best_response_curve(const LinearOpponent& opp, const BestResponseParams& params,
                                            const std::vector<double>& valuation_grid,
                                            const std::vector<double>& price_grid) {
  if (price_grid.empty()) throw std::invalid_argument("price grid is empty");
  std::vector<double> prices = price_grid;
  std::sort(prices.begin(), prices.end());
  std::vector<CurvePoint> out;
  for (double v2 : valuation_grid) {
    CurvePoint best{v2, 0.0, -INFINITY};
    bool any = false;
    for (double b : prices) {
      if (b > params.budget) break;
      double u = expected_bid_utility(opp, params, v2, b);
      if (!any || u > best.utility + 1e-12) {
        best.bid = b;
        best.utility = u;
        any = true;
      }
    }
    if (!any) throw std::invalid_argument("no grid price within budget");
    out.push_back(best);
  }
  return out;
}

std::vector<double> linspace(double lo, double hi, int n) {
  if (n < 2) return {lo};
  std::vector<double> out;
  for (int i = 0; i < n; ++i) out.push_back(lo + (hi - lo) * i / (n - 1));
  return out;
}

LinearFit fit_interior(const std::vector<CurvePoint>& curve, double a1, double b1, double margin) {
  std::vector<std::pair<double, double>> pts;
  for (const auto& p : curve)
    if (p.bid > a1 + margin && p.bid < b1 - margin) pts.emplace_back(p.v2, p.bid);
  LinearFit f;
  f.points = pts.size();
  if (pts.size() < 2) return f;
  double mx = 0, my = 0;
  for (auto [x, y] : pts) { mx += x; my += y; }
  mx /= pts.size();
  my /= pts.size();
  double sxx = 0, sxy = 0, syy = 0;
  for (auto [x, y] : pts) {
    sxx += (x - mx) * (x - mx);
    sxy += (x - mx) * (y - my);
    syy += (y - my) * (y - my);
  }
  if (sxx == 0.0) return f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double ss_res = 0.0;
  for (auto [x, y] : pts) {
    double e = y - (f.slope * x + f.intercept);
    ss_res += e * e;
  }
  f.r2 = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
  return f;
}

}  // namespace offload::game
