#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "screwkit/action_gen.hpp"
#include "screwkit/augment_predict.hpp"
#include "screwkit/bimanual_sim.hpp"
#include "screwkit/cem_opt.hpp"

namespace screwkit {

/// Size of the initial axis error used to seed CEM.
struct InitPerturbation {
  double dq = 0.0;         // meters, perpendicular to the axis
  double dangle_deg = 0.0; // tilt of s_hat
};

struct DemoPaths {
  std::optional<std::string> left;
  std::optional<std::string> right;
  std::optional<std::string> meta;
  std::optional<std::string> cloud;
};

struct ScenarioConfig {
  std::string name;
  Mechanism mechanism;
  WaypointPlan plan;
  InitPerturbation init_perturbation;
  CemConfig cem;
  DemoPaths demo;
};

/// Moves q by dq along a random direction perpendicular to s_hat and tilts
/// s_hat by dangle_deg about a random perpendicular axis. Keeps the sense of
/// s_hat.
ScrewAxis offset_axis(const ScrewAxis& axis, double dq, double dangle_deg, Rng& rng);

/// Initial axis for trial `seed` of a scenario. Independent of cem.seed.
ScrewAxis scenario_init_axis(const ScenarioConfig& scenario, std::uint64_t seed);

/// bottle, zipper, stir, laptop, wrench-ablation, grasp-ablation.
std::vector<std::string> scenario_names();

/// Throws kValidation for an unknown name.
ScenarioConfig scenario_preset(const std::string& name);

/// Deterministic 256-point object: an upright cylinder (radius 4 cm, height
/// 20 cm) standing on `base`, with a handle on its +x side so that no yaw maps
/// it onto itself.
PointCloud object_cloud(const Vec3& base);

void validate_scenario(const ScenarioConfig& scenario);

}  // namespace screwkit
