#include "offload/workload/catalog.hpp"

#include <algorithm>
#include <cmath>

namespace offload::workload {

double ServiceTypeSpec::total_units() const {
  double s = 0.0;
  for (const auto& t : task_chain) s += t.resource_units;
  return s;
}

Catalog::Catalog(std::vector<ServiceTypeSpec> types) : types_(std::move(types)) {
  if (types_.empty()) throw EmptyCatalog();
  raw_total_ = 0.0;
  for (const auto& t : types_) {
    if (t.type_id.empty()) throw CatalogError("service type with empty id");
    if (t.task_chain.empty()) throw CatalogError("service type " + t.type_id + " has an empty task chain");
    for (const auto& task : t.task_chain) {
      if (!(task.resource_units > 0.0)) {
        throw CatalogError("task " + task.task_id + " in " + t.type_id + " needs positive resource units");
      }
    }
    if (t.deadline_ms <= 0) throw CatalogError("service type " + t.type_id + " needs a positive deadline");
    if (!(t.probability >= 0.0)) throw CatalogError("service type " + t.type_id + " has a negative probability");
    if (t.uplink_bits < 0.0 || t.downlink_bits < 0.0) {
      throw CatalogError("service type " + t.type_id + " has negative data size");
    }
    raw_.push_back(t.probability);
    raw_total_ += t.probability;
  }
  for (std::size_t i = 0; i < types_.size(); ++i) {
    for (std::size_t j = i + 1; j < types_.size(); ++j) {
      if (types_[i].type_id == types_[j].type_id) throw CatalogError("duplicate service type " + types_[i].type_id);
    }
  }
  if (!(raw_total_ > 0.0)) throw CatalogError("catalog probabilities sum to zero");
  for (auto& t : types_) t.probability /= raw_total_;
}

std::size_t Catalog::index_of(const std::string& type_id) const {
  for (std::size_t i = 0; i < types_.size(); ++i) {
    if (types_[i].type_id == type_id) return i;
  }
  throw CatalogError("unknown service type " + type_id);
}

double Catalog::max_units() const {
  double m = 0.0;
  for (const auto& t : types_) m = std::max(m, t.total_units());
  return m;
}

std::int64_t Catalog::max_deadline_ms() const {
  std::int64_t m = 0;
  for (const auto& t : types_) m = std::max(m, t.deadline_ms);
  return m;
}

std::size_t sample_service_index(const std::vector<ServiceTypeSpec>& catalog, sim::RngStream& rng) {
  if (catalog.empty()) throw EmptyCatalog();
  double total = 0.0;
  for (const auto& t : catalog) total += t.probability;
  if (std::fabs(total - 1.0) > 1e-9) throw CatalogError("catalog probabilities must sum to 1");
  double u = rng.uniform();
  double acc = 0.0;
  for (std::size_t i = 0; i < catalog.size(); ++i) {
    acc += catalog[i].probability;
    if (u < acc) return i;
  }
  // u landed in the rounding gap at the top; return the last type with mass
  for (std::size_t i = catalog.size(); i-- > 0;) {
    if (catalog[i].probability > 0.0) return i;
  }
  return catalog.size() - 1;
}

const ServiceTypeSpec& sample_service_request(const std::vector<ServiceTypeSpec>& catalog,
                                              sim::RngStream& rng) {
  return catalog[sample_service_index(catalog, rng)];
}

namespace {

ServiceTypeSpec make_type(std::string id, std::vector<TaskSpec> chain, std::int64_t deadline, double p) {
  ServiceTypeSpec s;
  s.type_id = std::move(id);
  s.task_chain = std::move(chain);
  s.deadline_ms = deadline;
  s.probability = p;
  return s;
}

}  // namespace

Catalog synthetic_catalog() {
  const TaskSpec f1{"F1", 3.0};
  const TaskSpec f2{"F2", 30.0};
  return Catalog({
      make_type("F1/300", {f1}, 300, 0.1875),
      make_type("F1/50", {f1}, 50, 0.1875),
      make_type("F2/300", {f2}, 300, 0.0625),
      make_type("F2/50", {f2}, 50, 0.0625),
      make_type("F1-F2/300", {f1, f2}, 300, 0.1875),
      make_type("F1-F2/50", {f1, f2}, 50, 0.1875),
      make_type("F2-F1/300", {f2, f1}, 300, 0.0625),
      make_type("F2-F1/50", {f2, f1}, 50, 0.1875),
  });
}

Catalog junction_catalog() {
  // one F1 every 100 ms and one F2 every 500 ms gives a 5:1 mix
  auto f1 = make_type("F1", {TaskSpec{"F1", 80.0}}, 100, 5.0);
  f1.uplink_bits = 0.4e6;
  f1.downlink_bits = 0.0;
  auto f2 = make_type("F2", {TaskSpec{"F2", 80.0}}, 500, 1.0);
  f2.uplink_bits = 4e6;
  f2.downlink_bits = 0.4e6;
  return Catalog({f1, f2});
}

}  // namespace offload::workload
