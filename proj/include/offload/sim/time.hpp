#pragma once

#include <cmath>
#include <compare>
#include <cstdint>
#include <stdexcept>

namespace offload::sim {

/// Duration in whole milliseconds.
using Millis = std::int64_t;

/// Point on the simulated clock, in integer milliseconds since the start of a run.
class SimTime {
public:
  constexpr SimTime() = default;
  constexpr explicit SimTime(std::int64_t ms) : ms_(ms) {
    if (ms < 0) throw std::invalid_argument("SimTime must be non-negative");
  }

  constexpr std::int64_t ms() const noexcept { return ms_; }

  constexpr auto operator<=>(const SimTime&) const = default;

  constexpr SimTime operator+(Millis d) const { return SimTime(ms_ + d); }
  constexpr Millis operator-(SimTime other) const noexcept { return ms_ - other.ms_; }

private:
  std::int64_t ms_ = 0;
};

/// Fractional durations round up to the next tick.
inline Millis ceil_ms(double ms) {
  if (!(ms >= 0.0)) throw std::invalid_argument("duration must be non-negative");
  // absorb representation error such as 10.000000000000002
  const double r = std::round(ms);
  if (std::fabs(ms - r) < 1e-9) return static_cast<Millis>(r);
  return static_cast<Millis>(std::ceil(ms));
}

}  // namespace offload::sim
