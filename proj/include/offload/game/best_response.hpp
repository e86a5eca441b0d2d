#pragma once

#include <vector>

namespace offload::game {

/// Opponent bids f1(v1) = a1 + (b1 - a1)(v1 - l1)/(m1 - l1) with v1 uniform
/// on [l1, m1].
struct LinearOpponent {
  double l1 = 0.0, m1 = 1.0;
  double a1 = 0.0, b1 = 1.0;
  double bid(double v1) const;
};

struct BestResponseParams {
  /// Cost of losing.
  double c = 0.0;
  /// Bidder 2 cannot bid above this.
  double budget = 1e300;
  /// Gauss-Legendre nodes per integration piece.
  int quadrature_nodes = 8;
};

/// Bidder 2's expected utility x (v2 - p) - (1 - x) c when bidding b
/// against the opponent, paying the opponent's bid on a win. Ties have
/// probability zero under a strictly increasing f1.
double expected_bid_utility(const LinearOpponent& opp, const BestResponseParams& params, double v2, double b);

struct CurvePoint {
  double v2 = 0.0;
  double bid = 0.0;
  double utility = 0.0;
};

/// For every valuation, the grid bid maximising expected utility; among
/// bids within 1e-12 of the best the smallest wins.
std::vector<CurvePoint> best_response_curve(const LinearOpponent& opp, const BestResponseParams& params,
                                            const std::vector<double>& valuation_grid,
                                            const std::vector<double>& price_grid);

std::vector<double> linspace(double lo, double hi, int n);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  std::size_t points = 0;
};

/// Least-squares line through the curve points whose bid lies strictly
/// inside (a1 + margin, b1 - margin).
LinearFit fit_interior(const std::vector<CurvePoint>& curve, double a1, double b1, double margin);

}  // namespace offload::game
