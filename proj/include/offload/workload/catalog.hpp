#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "offload/sim/rng.hpp"

namespace offload::workload {

class EmptyCatalog : public std::invalid_argument {
public:
  EmptyCatalog() : std::invalid_argument("service catalog is empty") {}
};

class CatalogError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// One task of a chain, sized in time-resource units.
struct TaskSpec {
  std::string task_id;
  double resource_units = 0.0;
};

struct ServiceTypeSpec {
  std::string type_id;
  std::vector<TaskSpec> task_chain;
  std::int64_t deadline_ms = 0;
  double probability = 0.0;
  double uplink_bits = 0.0;
  double downlink_bits = 0.0;

  double total_units() const;
};

/// Validated service catalog. Construction rescales the probabilities to sum
/// to one and remembers the raw total so run summaries can report it.
class Catalog {
public:
  Catalog() = default;
  explicit Catalog(std::vector<ServiceTypeSpec> types);

  const std::vector<ServiceTypeSpec>& types() const noexcept { return types_; }
  std::size_t size() const noexcept { return types_.size(); }
  bool empty() const noexcept { return types_.empty(); }
  const ServiceTypeSpec& operator[](std::size_t i) const { return types_.at(i); }
  std::size_t index_of(const std::string& type_id) const;

  /// Sum of the probabilities as given, before rescaling.
  double raw_probability_total() const noexcept { return raw_total_; }
  const std::vector<double>& raw_probabilities() const noexcept { return raw_; }

  double max_units() const;
  std::int64_t max_deadline_ms() const;

private:
  std::vector<ServiceTypeSpec> types_;
  std::vector<double> raw_;
  double raw_total_ = 0.0;
};

/// Draws a service type according to the catalog probabilities.
/// Requires the probabilities to sum to 1 within 1e-9.
const ServiceTypeSpec& sample_service_request(const std::vector<ServiceTypeSpec>& catalog,
                                              sim::RngStream& rng);
std::size_t sample_service_index(const std::vector<ServiceTypeSpec>& catalog, sim::RngStream& rng);

/// Synthetic catalog: tasks F1 (3 units) and F2 (30 units); eight service
/// types by chain and deadline. The listed weights total 1.125 and are
/// rescaled; see Catalog::raw_probabilities.
Catalog synthetic_catalog();

/// Junction scenario catalog: F1 and F2 of 80 units each with 100 ms and
/// 500 ms deadlines, uplink 0.4/4 Mbit and downlink 0/0.4 Mbit, requested
/// in a 5:1 ratio.
Catalog junction_catalog();

}  // namespace offload::workload
