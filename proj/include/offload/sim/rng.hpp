#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>

namespace offload::sim {

/// Named, reproducible random stream owned by one simulation entity.
///
/// The 64-bit engine is std::mt19937_64, whose output sequence is fixed by the
/// standard. Continuous variates are derived here rather than through the
/// <random> distributions, whose algorithms differ between standard libraries.
class RngStream {
public:
  RngStream(std::uint64_t root_seed, std::string entity_label);

  std::uint64_t next_u64();

  /// Uniform on [0, 1) with 53 bits of resolution.
  double uniform();
  double uniform(double lo, double hi);
  /// Uniform integer on [0, n).
  std::size_t index(std::size_t n);
  bool bernoulli(double p);
  /// Standard normal (Box-Muller, spare value cached).
  double normal();
  double normal(double mean, double sd);
  /// Exponential with the given rate; +inf when rate is 0.
  double exponential(double rate);

  std::uint64_t root_seed() const noexcept { return root_seed_; }
  const std::string& entity_label() const noexcept { return label_; }
  std::uint64_t draw_counter() const noexcept { return draws_; }

private:
  std::uint64_t root_seed_;
  std::string label_;
  std::mt19937_64 engine_;
  std::uint64_t draws_ = 0;
  std::optional<double> spare_normal_;
};

/// Deterministic stream for (root_seed, entity_label). The label must be non-empty.
RngStream derive_stream(std::uint64_t root_seed, std::string_view entity_label);

std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t basis = 0xcbf29ce484222325ULL);
std::uint64_t splitmix64(std::uint64_t x);

}  // namespace offload::sim
