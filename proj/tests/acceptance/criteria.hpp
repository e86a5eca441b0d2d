#pragma once

#include <filesystem>
#include <string>

namespace acceptance {

struct Verdict {
  bool pass = false;
  std::string detail;
};

Verdict potential_identity();
Verdict auction_oracle();
Verdict truthful_best_response();
Verdict linear_best_response();
Verdict fairness_optimality();
Verdict policy_gradient();
Verdict gaussian_sampler();
Verdict fsp_mixing();
Verdict mmpp_workload();
Verdict latency_model();
Verdict determinism(const std::filesystem::path& scenario_dir);
Verdict end_to_end(const std::filesystem::path& scenario_dir);
Verdict generalization(const std::filesystem::path& scenario_dir);

}  // namespace acceptance
