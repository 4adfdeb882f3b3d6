#include "screwkit/action_gen.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "screwkit/error.hpp"

namespace screwkit {

void validate_plan(const WaypointPlan& plan) {
  if (plan.k_steps < 1) {
    throw Error(ErrorKind::kInvalidArgument, "waypoint plan needs k_steps >= 1");
  }
  if (!std::isfinite(plan.theta_total)) {
    throw Error(ErrorKind::kInvalidArgument, "waypoint plan theta_total is not finite");
  }
}

std::vector<Pose> generate_relative_waypoints(const ScrewAxis& axis, const WaypointPlan& plan) {
  validate_plan(plan);
  std::vector<Pose> out;
  out.reserve(static_cast<std::size_t>(plan.k_steps) + 1);
  out.push_back(plan.t_initial);
  for (int k = 1; k <= plan.k_steps; ++k) {
    const double theta = plan.theta_total * k / plan.k_steps;
    out.push_back(screw_displace(axis, theta, plan.t_initial));
  }
  return out;
}

namespace {

Pose interpolate(const Pose& a, const Pose& b, double u) {
  Pose out;
  const Eigen::Quaterniond qa(a.rotation);
  const Eigen::Quaterniond qb(b.rotation);
  out.rotation = qa.slerp(u, qb).toRotationMatrix();
  out.translation = (1.0 - u) * a.translation + u * b.translation;
  return out;
}

}  // namespace

std::vector<Pose> left_world_poses(const ScrewAction& action, const WaypointPlan& plan) {
  validate_plan(plan);
  const auto count = static_cast<std::size_t>(plan.k_steps) + 1;
  if (!action.tau_l || action.tau_l->empty()) {
    Pose hold;
    hold.translation = action.g_l;
    return std::vector<Pose>(count, hold);
  }
  const auto& samples = action.tau_l->samples;
  if (samples.size() == 1) return std::vector<Pose>(count, samples.front().pose);
  validate_timestamps(samples, "left-hand trajectory");

  std::vector<Pose> out;
  out.reserve(count);
  const double t0 = samples.front().t;
  const double t1 = samples.back().t;
  std::size_t seg = 0;
  for (std::size_t k = 0; k < count; ++k) {
    const double t = t0 + (t1 - t0) * static_cast<double>(k) / static_cast<double>(count - 1);
    while (seg + 2 < samples.size() && samples[seg + 1].t < t) ++seg;
    const auto& a = samples[seg];
    const auto& b = samples[seg + 1];
    const double u = std::clamp((t - a.t) / (b.t - a.t), 0.0, 1.0);
    out.push_back(interpolate(a.pose, b.pose, u));
  }
  return out;
}

BimanualWaypoints compose_bimanual(const ScrewAction& action, const WaypointPlan& plan,
                                   const std::vector<Pose>& left_world) {
  BimanualWaypoints out;
  out.relative = generate_relative_waypoints(action.axis, plan);
  if (left_world.size() != out.relative.size()) {
    throw Error(ErrorKind::kAlignment, "compose_bimanual: expected " +
                                           std::to_string(out.relative.size()) + " left poses, got " +
                                           std::to_string(left_world.size()));
  }
  out.left = left_world;
  out.right.reserve(left_world.size());
  for (std::size_t k = 0; k < left_world.size(); ++k) {
    out.right.push_back(left_world[k] * out.relative[k]);
  }
  return out;
}

std::vector<Pose> demo_waypoints_passthrough(const RelativeTrajectory& traj, int n_keep) {
  if (n_keep < 2) {
    throw Error(ErrorKind::kInvalidArgument, "demo_waypoints_passthrough: n_keep must be >= 2");
  }
  const auto n = static_cast<long>(traj.size());
  if (n_keep > n) {
    throw Error(ErrorKind::kInvalidArgument,
                "demo_waypoints_passthrough: n_keep exceeds the sample count");
  }
  std::vector<Pose> out;
  out.reserve(static_cast<std::size_t>(n_keep));
  for (int i = 0; i < n_keep; ++i) {
    // Rounded uniform stride; exact for evenly divisible counts.
    const long idx = std::lround(static_cast<double>(i) * static_cast<double>(n - 1) / (n_keep - 1));
    out.push_back(traj.samples[static_cast<std::size_t>(idx)].pose);
  }
  return out;
}

}  // namespace screwkit
