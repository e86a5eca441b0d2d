#include "offload/sim/rng.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace offload::sim {

std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t basis) {
  std::uint64_t h = basis;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

RngStream::RngStream(std::uint64_t root_seed, std::string entity_label)
    : root_seed_(root_seed), label_(std::move(entity_label)) {
  if (label_.empty()) throw std::invalid_argument("RngStream: entity label must be non-empty");
  engine_.seed(splitmix64(splitmix64(root_seed_) ^ fnv1a64(label_)));
}

std::uint64_t RngStream::next_u64() {
  ++draws_;
  return engine_();
}

double RngStream::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngStream::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

std::size_t RngStream::index(std::size_t n) {
  if (n == 0) throw std::invalid_argument("RngStream::index: empty range");
  auto i = static_cast<std::size_t>(uniform() * static_cast<double>(n));
  return i < n ? i : n - 1;
}

bool RngStream::bernoulli(double p) { return uniform() < p; }

double RngStream::normal() {
  if (spare_normal_) {
    double z = *spare_normal_;
    spare_normal_.reset();
    return z;
  }
  double u1 = 1.0 - uniform();  // (0, 1]
  double u2 = uniform();
  double r = std::sqrt(-2.0 * std::log(u1));
  double a = 2.0 * std::numbers::pi * u2;
  spare_normal_ = r * std::sin(a);
  return r * std::cos(a);
}

double RngStream::normal(double mean, double sd) { return mean + sd * normal(); }

double RngStream::exponential(double rate) {
  if (rate < 0.0) throw std::invalid_argument("RngStream::exponential: negative rate");
  double u = uniform();
  if (rate == 0.0) return std::numeric_limits<double>::infinity();
  return -std::log1p(-u) / rate;
}

RngStream derive_stream(std::uint64_t root_seed, std::string_view entity_label) {
  return RngStream(root_seed, std::string(entity_label));
}

}  // namespace offload::sim
