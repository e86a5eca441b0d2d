#pragma once

#include <cstdint>

#include "offload/sim/rng.hpp"

namespace offload::workload {

enum class Regime : std::uint8_t { High, Low };

/// Two-state Markov-modulated Poisson process.
///
/// Rates are per millisecond. The regime is re-drawn at the end of every
/// epoch: from High it switches to Low with probability p_high, from Low to
/// High with probability p_low. The stationary High fraction is therefore
/// p_low / (p_high + p_low).
struct MmppState {
  Regime regime = Regime::High;
  double lambda_high = 0.0;
  double lambda_low = 0.0;
  double p_high = 0.0;
  double p_low = 0.0;
  std::int64_t epoch_ms = 1000;
  double time_in_epoch_ms = 0.0;

  void validate() const;
  double rate() const noexcept { return regime == Regime::High ? lambda_high : lambda_low; }
};

struct MmppDraw {
  double interarrival_ms = 0.0;
  MmppState state;
  /// True when no arrival occurred before the horizon cap.
  bool capped = false;
};

/// Samples the time to the next arrival. The exponential clock restarts at
/// each epoch boundary (memorylessness), so regime switches take effect
/// mid-gap. Gaps longer than horizon_ms are cut at horizon_ms and flagged.
MmppDraw mmpp_next_arrival(const MmppState& state, sim::RngStream& rng, double horizon_ms);

/// Advances the regime chain by one epoch boundary.
MmppState mmpp_switch_epoch(MmppState state, sim::RngStream& rng);

/// Per-vehicle MMPP initialised with rates drawn uniformly from the given
/// per-second intervals.
MmppState make_vehicle_mmpp(double lambda_high_lo_per_s, double lambda_high_hi_per_s,
                            double lambda_low_lo_per_s, double lambda_low_hi_per_s, double p_high,
                            double p_low, std::int64_t epoch_ms, sim::RngStream& rng);

}  // namespace offload::workload
