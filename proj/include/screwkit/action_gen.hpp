#pragma once

#include <optional>
#include <vector>

#include "screwkit/screw_core.hpp"
#include "screwkit/trajectory.hpp"

namespace screwkit {

/// Bimanual behavior parameter: grasp points, the relative screw axis, and an
/// optional absolute left-hand trajectory (absent: the left hand holds still).
struct ScrewAction {
  Vec3 g_l = Vec3::Zero();
  Vec3 g_r = Vec3::Zero();
  ScrewAxis axis;
  std::optional<HandTrajectory> tau_l;
};

struct WaypointPlan {
  double theta_total = 0.0;  // rad for rotational joints, m for prismatic
  int k_steps = 1;
  Pose t_initial;  // right hand in the left-hand frame at k = 0
};

struct BimanualWaypoints {
  std::vector<Pose> left;
  std::vector<Pose> right;
  std::vector<Pose> relative;
};

void validate_plan(const WaypointPlan& plan);

/// K+1 relative poses at theta_k = k * theta_total / K.
std::vector<Pose> generate_relative_waypoints(const ScrewAxis& axis, const WaypointPlan& plan);

/// Left-hand world poses for an action: tau_l resampled uniformly in time to
/// K+1 poses, or the constant pose at g_l when tau_l is absent.
std::vector<Pose> left_world_poses(const ScrewAction& action, const WaypointPlan& plan);

/// right_k = left_world_k * relative_k.
BimanualWaypoints compose_bimanual(const ScrewAction& action, const WaypointPlan& plan,
                                   const std::vector<Pose>& left_world);

/// n_keep demonstration poses subsampled uniformly by index, endpoints kept.
std::vector<Pose> demo_waypoints_passthrough(const RelativeTrajectory& traj, int n_keep);

}  // namespace screwkit
