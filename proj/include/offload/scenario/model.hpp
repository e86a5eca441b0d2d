#pragma once

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <vector>

#include "offload/agent/agent.hpp"

namespace offload::scenario {

struct ModelFormatError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Text model file, version 1:
///
///     offload-model 1
///     agents <n>
///     agent <label> budget <b> step <t> avg_reward <r>
///     actor <count> <p0> <p1> ...
///     critic <count> ...
///     sl <count> ...
///
/// with one agent block per active agent, in fleet order. Every number is a
/// C99 hex float so parameters round-trip exactly. Optimizer moments are not
/// stored; a loaded model is meant to be evaluated, not trained further.
void save_models(std::ostream& out, const std::vector<agent::Agent>& agents);
void save_models(const std::filesystem::path& path, const std::vector<agent::Agent>& agents);

/// Loads parameters into agents built from the same scenario. Throws
/// ModelFormatError on a version, count, label or size mismatch.
void load_models(std::istream& in, std::vector<agent::Agent>& agents);
void load_models(const std::filesystem::path& path, std::vector<agent::Agent>& agents);

}  // namespace offload::scenario
