#include "offload/workload/mmpp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace offload::workload {

void MmppState::validate() const {
  if (!(lambda_low > 0.0) || !(lambda_high > lambda_low)) {
    throw std::invalid_argument("MMPP requires 0 < lambda_low < lambda_high");
  }
  if (p_high < 0.0 || p_high > 1.0 || p_low < 0.0 || p_low > 1.0) {
    throw std::invalid_argument("MMPP switch probabilities must lie in [0,1]");
  }
  if (epoch_ms <= 0) throw std::invalid_argument("MMPP epoch must be positive");
}

MmppState mmpp_switch_epoch(MmppState state, sim::RngStream& rng) {
  const double p = state.regime == Regime::High ? state.p_high : state.p_low;
  if (rng.bernoulli(p)) state.regime = state.regime == Regime::High ? Regime::Low : Regime::High;
  return state;
}

MmppDraw mmpp_next_arrival(const MmppState& state, sim::RngStream& rng, double horizon_ms) {
  if (!(horizon_ms > 0.0)) throw std::invalid_argument("MMPP horizon must be positive");
  MmppDraw out;
  out.state = state;
  double elapsed = 0.0;
  const double epoch = static_cast<double>(state.epoch_ms);
  while (true) {
    double gap = rng.exponential(out.state.rate());
    double to_boundary = epoch - out.state.time_in_epoch_ms;
    if (gap < to_boundary) {
      if (elapsed + gap > horizon_ms) {
        out.state.time_in_epoch_ms += horizon_ms - elapsed;
        break;
      }
      out.state.time_in_epoch_ms += gap;
      out.interarrival_ms = elapsed + gap;
      return out;
    }
    elapsed += to_boundary;
    out.state.time_in_epoch_ms = 0.0;
    out.state = mmpp_switch_epoch(out.state, rng);
    if (elapsed > horizon_ms) break;
  }
  out.interarrival_ms = horizon_ms;
  out.capped = true;
  return out;
}

MmppState make_vehicle_mmpp(double lambda_high_lo_per_s, double lambda_high_hi_per_s,
                            double lambda_low_lo_per_s, double lambda_low_hi_per_s, double p_high,
                            double p_low, std::int64_t epoch_ms, sim::RngStream& rng) {
  MmppState s;
  s.lambda_high = rng.uniform(lambda_high_lo_per_s, lambda_high_hi_per_s) / 1000.0;
  s.lambda_low = rng.uniform(lambda_low_lo_per_s, lambda_low_hi_per_s) / 1000.0;
  if (!(s.lambda_low > 0.0)) s.lambda_low = std::numeric_limits<double>::min();
  s.p_high = p_high;
  s.p_low = p_low;
  s.epoch_ms = epoch_ms;
  s.regime = rng.bernoulli(p_low / std::max(p_high + p_low, 1e-300)) ? Regime::High : Regime::Low;
  s.validate();
  return s;
}

}  // namespace offload::workload
