#pragma once

#include <cstdint>
#include <stdexcept>

namespace offload::workload {

class OutOfRange : public std::out_of_range {
public:
  using std::out_of_range::out_of_range;
};

class ZeroRate : public std::domain_error {
public:
  ZeroRate() : std::domain_error("zero transmission rate: vehicle out of coverage") {}
};

inline constexpr double kCoverageRadiusM = 65.0;

/// Per-vehicle throughput in Mbps at the given distance from the access
/// point when n_sharing vehicles split the channel equally:
/// max(0, -26 * distance + 1690) / n_sharing.
double throughput_at(double distance_m, int n_sharing);

/// Milliseconds to move `bits` at `rate_mbps`, rounded up to the next tick.
/// An infinite rate is the zero-latency shortcut.
std::int64_t transmission_delay(double bits, double rate_mbps);

}  // namespace offload::workload
