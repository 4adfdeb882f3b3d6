#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "screwkit/io.hpp"

namespace screwkit {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;  // one line
  Json data = Json::object();
  double seconds = 0.0;  // wall time, not part of data
};

struct AcceptanceOptions {
  std::uint64_t seed = 0;
  /// Criterion 9 reruns criteria 1-8 and compares their rendered data.
  bool check_determinism = true;
  /// Run only these ids (empty: all).
  std::vector<int> only;
};

CriterionResult criterion_screw_math(std::uint64_t seed);
CriterionResult criterion_noiseless_recovery(std::uint64_t seed);
CriterionResult criterion_noise_study(std::uint64_t seed);
CriterionResult criterion_noisy_init_finetune(std::uint64_t seed);
CriterionResult criterion_representation_ablation(std::uint64_t seed);
CriterionResult criterion_reward_ablation(std::uint64_t seed);
CriterionResult criterion_correction_loop(std::uint64_t seed);
CriterionResult criterion_augmentation_equivariance(std::uint64_t seed);

/// Reruns each of `first_runs` and compares rendered data byte for byte.
CriterionResult criterion_determinism(const std::vector<CriterionResult>& first_runs, std::uint64_t seed);

/// Criteria in id order; on_result is called as each finishes. When only
/// criterion 9 is requested, criteria 1-8 run first without being reported.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options,
                                            const std::function<void(const CriterionResult&)>& on_result = {});

/// "[PASS] 3 noise-study reproduction: ..." style line.
std::string format_criterion_line(const CriterionResult& result);

/// Success counts of the two reward ablations with each flag on and off.
struct AblationCounts {
  std::string scenario;
  std::string flag;
  int seeds = 0;
  int success_on = 0;
  int success_off = 0;
};
std::vector<AblationCounts> run_reward_ablation(std::uint64_t seed, int seeds);

}  // namespace screwkit
