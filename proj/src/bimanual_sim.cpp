#include "screwkit/bimanual_sim.hpp"

#include <cmath>
#include <string>

#include "screwkit/error.hpp"
#include "screwkit/scalar_search.hpp"

namespace screwkit {

void validate_mechanism(const Mechanism& mech) {
  const auto fail = [](const std::string& msg) { throw Error(ErrorKind::kValidation, "mechanism: " + msg); };
  if (!(mech.f_min < mech.friction && mech.friction < mech.f_max)) {
    fail("requires f_min < friction < f_max");
  }
  if (!(mech.d_grasp > 0.0)) fail("d_grasp must be positive");
  if (!(mech.theta_lo < mech.theta_hi)) fail("theta_range must be non-degenerate");
  if (mech.k_pos < 0.0 || mech.k_rot < 0.0 || mech.slip_wrench < 0.0) {
    fail("stiffness and slip wrench must be non-negative");
  }
  if (!(mech.lambda > 0.0)) fail("lambda must be positive");
  if (!(mech.theta_success_fraction >= 0.0 && mech.theta_success_fraction <= 1.0)) {
    fail("theta_success_fraction must lie in [0, 1]");
  }
  if (std::abs(mech.true_axis.s_hat.norm() - 1.0) > 1e-9) fail("true_axis direction is not unit");
}

std::string_view to_string(Failure failure) {
  switch (failure) {
    case Failure::kNone: return "none";
    case Failure::kLowForce: return "low_force";
    case Failure::kHighForce: return "high_force";
    case Failure::kGraspLost: return "grasp_lost";
  }
  return "none";
}

Failure failure_from_string(std::string_view name) {
  if (name == "none") return Failure::kNone;
  if (name == "low_force") return Failure::kLowForce;
  if (name == "high_force") return Failure::kHighForce;
  if (name == "grasp_lost") return Failure::kGraspLost;
  throw Error(ErrorKind::kValidation, "unknown failure kind '" + std::string(name) + "'");
}

Projection project_to_mechanism(const Mechanism& mech, const Pose& rel_pose) {
  const auto dist = [&](double theta) {
    return pose_distance(rel_pose, screw_displace(mech.true_axis, theta, mech.t_initial), mech.lambda);
  };
  // Tight bracket: the objective is V-shaped at an exact match, so the
  // residual is proportional to the bracket width.
  const ScalarMinimum best = minimize_scalar(dist, mech.theta_lo, mech.theta_hi, 32, 1e-13);
  const Pose feasible = screw_displace(mech.true_axis, best.x, mech.t_initial);
  Projection out;
  out.theta = best.x;
  out.e_pos = (rel_pose.translation - feasible.translation).norm();
  out.e_rot = geodesic_angle(rel_pose.rotation, feasible.rotation);
  return out;
}

namespace {

Failure classify(const Mechanism& mech, double e_pos, double wrench, bool check_grasp) {
  if (check_grasp && e_pos > mech.d_grasp) return Failure::kGraspLost;
  if (wrench > mech.f_max) return Failure::kHighForce;
  if (wrench < mech.f_min) return Failure::kLowForce;
  return Failure::kNone;
}

double mean_of(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

}  // namespace

EpisodeResult run_episode(const Mechanism& mech, const std::vector<Pose>& relative_waypoints) {
  if (relative_waypoints.size() < 2) {
    throw Error(ErrorKind::kInvalidArgument, "run_episode needs at least one waypoint after the start pose");
  }
  EpisodeResult result;
  result.total_waypoints = static_cast<int>(relative_waypoints.size()) - 1;

  double prev_theta = project_to_mechanism(mech, relative_waypoints.front()).theta;
  result.theta_final = prev_theta;

  bool gated_running = true;
  bool detached = false;
  std::vector<double> ungated_trace;
  for (int k = 1; k <= result.total_waypoints; ++k) {
    const Projection p = project_to_mechanism(mech, relative_waypoints[static_cast<std::size_t>(k)]);
    const bool advanced = p.theta > prev_theta + 1e-6;
    const double wrench = mech.k_pos * p.e_pos + mech.k_rot * p.e_rot + (advanced ? mech.friction : 0.0);
    prev_theta = p.theta;

    if (gated_running) {
      result.wrench_trace.push_back(wrench);
      result.theta_final = p.theta;
      result.failure = classify(mech, p.e_pos, wrench, true);
      if (result.failure == Failure::kNone) {
        ++result.completed_waypoints;
      } else {
        gated_running = false;
      }
    }

    detached = detached || p.e_pos > mech.d_grasp;
    const double felt = detached ? mech.slip_wrench : wrench;
    ungated_trace.push_back(felt);
    result.ungated_failure = classify(mech, p.e_pos, felt, false);
    if (result.ungated_failure != Failure::kNone) break;
    ++result.ungated_completed;
  }
  result.mean_wrench = mean_of(result.wrench_trace);
  result.ungated_mean_wrench = mean_of(ungated_trace);
  return result;
}

bool is_success(const Mechanism& mech, const EpisodeResult& result) {
  return result.failure == Failure::kNone &&
         result.theta_final - mech.theta_lo >= mech.theta_success_fraction * mech.span() - 1e-9;
}

}  // namespace screwkit
