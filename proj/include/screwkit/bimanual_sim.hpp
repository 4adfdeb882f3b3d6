#pragma once

#include <string_view>
#include <vector>

#include "screwkit/screw_core.hpp"

namespace screwkit {

/// Quasi-static 1-DoF mechanism used in place of the physical object.
///
/// A commanded relative pose is projected onto the feasible set
/// {displace(true_axis, theta, t_initial) : theta in theta_range}; the wrench
/// norm is a spring on the residual plus friction while the joint advances:
///
///   wrench = k_pos * e_pos + k_rot * e_rot + (advanced ? friction : 0)
///
/// Once the position residual exceeds d_grasp the gripper has slipped off; a
/// detached gripper only feels sliding friction (slip_wrench).
struct Mechanism {
  ScrewAxis true_axis;
  Pose t_initial;
  double theta_lo = 0.0;
  double theta_hi = kPi;
  double friction = 2.0;
  double k_pos = 200.0;  // per meter
  double k_rot = 5.0;    // per radian
  double f_min = 0.5;
  double f_max = 10.0;
  double d_grasp = 0.05;  // meters
  double slip_wrench = 1.5;
  double theta_success_fraction = 0.9;
  double lambda = kDefaultLambda;

  double span() const { return theta_hi - theta_lo; }
};

/// Throws kValidation when the invariants f_min < friction < f_max,
/// d_grasp > 0 and theta_lo < theta_hi do not hold.
void validate_mechanism(const Mechanism& mech);

enum class Failure { kNone, kLowForce, kHighForce, kGraspLost };

std::string_view to_string(Failure failure);
Failure failure_from_string(std::string_view name);

struct Projection {
  double theta = 0.0;
  double e_pos = 0.0;  // meters
  double e_rot = 0.0;  // radians
};

struct EpisodeResult {
  int total_waypoints = 0;  // K
  int completed_waypoints = 0;
  std::vector<double> wrench_trace;
  double mean_wrench = 0.0;
  Failure failure = Failure::kNone;
  double theta_final = 0.0;

  // The same episode with the grasp-loss detector disabled: the gripper keeps
  // going after slipping until a force detector fires or the plan ends.
  int ungated_completed = 0;
  double ungated_mean_wrench = 0.0;
  Failure ungated_failure = Failure::kNone;
};

/// Closest feasible configuration: 32-point grid seeding and golden-section
/// refinement over theta_range.
Projection project_to_mechanism(const Mechanism& mech, const Pose& rel_pose);

/// Executes waypoints 1..K (waypoint 0 is the start pose). Failure checks per
/// step, first match wins: grasp_lost (e_pos > d_grasp), high_force
/// (wrench > f_max), low_force (wrench < f_min).
EpisodeResult run_episode(const Mechanism& mech, const std::vector<Pose>& relative_waypoints);

/// No failure and progress theta_final - theta_lo of at least
/// theta_success_fraction of the range.
bool is_success(const Mechanism& mech, const EpisodeResult& result);

}  // namespace screwkit
