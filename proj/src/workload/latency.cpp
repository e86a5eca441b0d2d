#include "offload/workload/latency.hpp"

#include <algorithm>
#include <cmath>

#include "offload/sim/time.hpp"

namespace offload::workload {

double throughput_at(double distance_m, int n_sharing) {
  if (!(distance_m >= 0.0) || distance_m > kCoverageRadiusM) {
    throw OutOfRange("distance outside the 65 m coverage radius");
  }
  if (n_sharing < 1) throw std::invalid_argument("n_sharing must be at least 1");
  return std::max(0.0, -26.0 * distance_m + 1690.0) / static_cast<double>(n_sharing);
}

std::int64_t transmission_delay(double bits, double rate_mbps) {
  if (bits < 0.0) throw std::invalid_argument("negative data size");
  if (!(rate_mbps > 0.0)) throw ZeroRate();
  if (bits == 0.0 || std::isinf(rate_mbps)) return 0;
  // 1 Mbps moves 1000 bits per millisecond
  return sim::ceil_ms(bits / (rate_mbps * 1000.0));
}

}  // namespace offload::workload
