#include <doctest.h>

#include "helpers.hpp"
#include "screwkit/axis_fit.hpp"
#include "screwkit/error.hpp"

using namespace screwkit;
using namespace testutil;

namespace {

WaypointPlan plan_of(double theta, int k, const Pose& t0 = Pose::identity()) {
  WaypointPlan p;
  p.theta_total = theta;
  p.k_steps = k;
  p.t_initial = t0;
  return p;
}

std::vector<Pose> constant(const Pose& p, int k) { return std::vector<Pose>(static_cast<std::size_t>(k) + 1, p); }

}  // namespace

TEST_SUITE("action_gen") {

TEST_CASE("zero displacement repeats T0") {
  Rng rng = make_rng(31);
  const Pose t0 = random_pose(rng);
  const auto w = generate_relative_waypoints(ScrewAxis::revolute(Vec3::UnitX(), Vec3(0.1, 0, 0)), plan_of(0.0, 7, t0));
  REQUIRE(w.size() == 8);
  for (const auto& p : w) CHECK(pose_residual(p, t0) == 0.0);
}

TEST_CASE("prismatic steps") {
  const auto w = generate_relative_waypoints(ScrewAxis::prismatic(Vec3::UnitX()), plan_of(0.1, 10));
  REQUIRE(w.size() == 11);
  for (int k = 0; k <= 10; ++k) {
    CHECK((w[k].translation - Vec3(0.01 * k, 0, 0)).norm() < 1e-15);
    CHECK((w[k].rotation - Rotation::Identity()).norm() == 0.0);
  }
}

TEST_CASE("revolute quarter turn follows the circle") {
  const Vec3 q(0.3, 0, 0);
  const auto w = generate_relative_waypoints(ScrewAxis::revolute(Vec3::UnitZ(), q), plan_of(kPi / 2, 20));
  for (const auto& p : w) {
    CHECK(std::abs((p.translation - q).norm() - 0.3) < 1e-12);
    CHECK(std::abs(p.translation.z()) < 1e-15);
  }
  CHECK((w.back().rotation - rotation_about(Vec3::UnitZ(), kPi / 2)).norm() < 1e-12);
  CHECK((w.back().translation - Vec3(0.3, -0.3, 0)).norm() < 1e-12);
}

TEST_CASE("property: revolute3d keeps the orientation exactly") {
  Rng rng = make_rng(32);
  for (int i = 0; i < 20; ++i) {
    const Pose t0 = random_pose(rng);
    const ScrewAxis axis = ScrewAxis::revolute3d(random_unit_vector(rng), uniform_box(rng, 0.2));
    for (const auto& p : generate_relative_waypoints(axis, plan_of(uniform(rng, -5, 5), 13, t0))) {
      CHECK(p.rotation == t0.rotation);
    }
  }
}

TEST_CASE("property: consecutive waypoints are equally spaced") {
  Rng rng = make_rng(33);
  for (JointType type : {JointType::kPrismatic, JointType::kRevolute, JointType::kRevolute3d}) {
    ScrewAxis axis = ScrewAxis::revolute(random_unit_vector(rng), uniform_box(rng, 0.2));
    axis.joint_type = type;
    if (type == JointType::kPrismatic) axis.pitch = kInf;
    const auto w = generate_relative_waypoints(axis, plan_of(type == JointType::kPrismatic ? 0.4 : 2.5, 12,
                                                             random_pose(rng)));
    const double step = pose_distance(w[0], w[1]);
    for (std::size_t k = 1; k + 1 < w.size(); ++k) CHECK(std::abs(pose_distance(w[k], w[k + 1]) - step) < 1e-9);
  }
}

TEST_CASE("property: generation then fitting recovers the axis") {
  Rng rng = make_rng(34);
  for (int i = 0; i < 30; ++i) {
    const JointType type = static_cast<JointType>(i % 3);
    const Pose t0 = random_pose(rng, 0.3);
    ScrewAxis axis;
    if (type == JointType::kPrismatic) {
      axis = canonicalize_axis(ScrewAxis::prismatic(random_unit_vector(rng), t0.translation));
    } else {
      Vec3 q = uniform_box(rng, 0.3);
      axis = type == JointType::kRevolute ? ScrewAxis::revolute(random_unit_vector(rng), q)
                                          : ScrewAxis::revolute3d(random_unit_vector(rng), q);
      axis = canonicalize_axis(axis);
      if ((t0.translation - axis.q).cross(axis.s_hat).norm() < 0.05) continue;
    }
    const FitResult fit = fit_joint(type, generated(axis, plan_of(type == JointType::kPrismatic ? 0.3 : 2.0, 15, t0)));
    const AxisError e = axis_error(fit.axis, axis);
    CHECK(e.distance < 1e-6);
    CHECK(e.angle_deg < 1e-5);
  }
}

TEST_CASE("validate_plan") {
  CHECK_THROWS_AS(validate_plan(plan_of(1.0, 0)), Error);
  CHECK_THROWS_AS(validate_plan(plan_of(std::nan(""), 3)), Error);
  CHECK_NOTHROW(validate_plan(plan_of(1.0, 3)));
}

TEST_CASE("compose_bimanual with a static identity left hand") {
  ScrewAction action;
  action.axis = ScrewAxis::revolute(Vec3::UnitZ(), Vec3(0.1, 0, 0));
  const WaypointPlan plan = plan_of(1.0, 10, Pose::identity());
  const BimanualWaypoints w = compose_bimanual(action, plan, constant(Pose::identity(), 10));
  const auto rel = generate_relative_waypoints(action.axis, plan);
  for (std::size_t k = 0; k < rel.size(); ++k) {
    CHECK(pose_residual(w.right[k], rel[k]) == 0.0);
    CHECK(pose_residual(w.relative[k], rel[k]) == 0.0);
  }
  CHECK(pose_residual(w.relative.front(), plan.t_initial) == 0.0);
}

TEST_CASE("compose_bimanual rejects a length mismatch") {
  ScrewAction action;
  try {
    compose_bimanual(action, plan_of(1.0, 10), constant(Pose::identity(), 5));
    FAIL("expected an alignment error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kAlignment);
  }
}

TEST_CASE("a moving left hand does not change the relative motion") {
  ScrewAction action;
  action.axis = canonicalize_axis(ScrewAxis::revolute(Vec3(0, 0.3, 1).normalized(), Vec3(0.05, 0, 0)));
  const WaypointPlan plan = plan_of(1.2, 12, Pose::identity());
  std::vector<Pose> moving;
  for (int k = 0; k <= 12; ++k) {
    Pose p;
    p.translation = Vec3(0, 0.01 * k, 0);
    moving.push_back(p);
  }
  const BimanualWaypoints still = compose_bimanual(action, plan, constant(Pose::identity(), 12));
  const BimanualWaypoints moved = compose_bimanual(action, plan, moving);
  HandTrajectory l, r;
  for (int k = 0; k <= 12; ++k) {
    l.samples.push_back({static_cast<double>(k), moved.left[k]});
    r.samples.push_back({static_cast<double>(k), moved.right[k]});
    CHECK(pose_residual(moved.right[k], moved.left[k] * moved.relative[k]) < 1e-12);
  }
  const RelativeTrajectory recovered = relative_trajectory(l, r);
  for (int k = 0; k <= 12; ++k) CHECK(pose_residual(recovered.samples[k].pose, still.relative[k]) < 1e-9);

  Rng rng = make_rng(35);
  std::vector<Pose> wild;
  for (int k = 0; k <= 12; ++k) wild.push_back(random_pose(rng));
  const BimanualWaypoints w = compose_bimanual(action, plan, wild);
  HandTrajectory wl, wr;
  for (int k = 0; k <= 12; ++k) {
    wl.samples.push_back({static_cast<double>(k), w.left[k]});
    wr.samples.push_back({static_cast<double>(k), w.right[k]});
  }
  const AxisError e = axis_error(fit_revolute(relative_trajectory(wl, wr)).axis,
                                 fit_revolute(RelativeTrajectory::from_poses(still.relative)).axis);
  CHECK(e.distance < 1e-9);
  CHECK(e.angle_deg < 1e-6);
}

TEST_CASE("left_world_poses holds still at g_l or resamples tau_l") {
  ScrewAction action;
  action.g_l = Vec3(0.1, 0.2, 0.3);
  const auto still = left_world_poses(action, plan_of(1.0, 4));
  REQUIRE(still.size() == 5);
  for (const auto& p : still) CHECK((p.translation - action.g_l).norm() == 0.0);

  HandTrajectory tau;
  for (int i = 0; i <= 8; ++i) {
    Pose p;
    p.translation = Vec3(0.01 * i, 0, 0);
    tau.samples.push_back({0.5 * i, p});
  }
  action.tau_l = tau;
  const auto moving = left_world_poses(action, plan_of(1.0, 4));
  REQUIRE(moving.size() == 5);
  for (int k = 0; k <= 4; ++k) CHECK((moving[k].translation - Vec3(0.02 * k, 0, 0)).norm() < 1e-12);
}

TEST_CASE("demo_waypoints_passthrough stride") {
  std::vector<Pose> poses;
  for (int i = 0; i < 9; ++i) {
    Pose p;
    p.translation = Vec3(i, 0, 0);
    poses.push_back(p);
  }
  const RelativeTrajectory traj = RelativeTrajectory::from_poses(poses);
  auto kept = demo_waypoints_passthrough(traj, 9);
  REQUIRE(kept.size() == 9);
  for (int i = 0; i < 9; ++i) CHECK(kept[i].translation.x() == i);
  kept = demo_waypoints_passthrough(traj, 2);
  REQUIRE(kept.size() == 2);
  CHECK(kept[0].translation.x() == 0);
  CHECK(kept[1].translation.x() == 8);
  kept = demo_waypoints_passthrough(traj, 5);
  REQUIRE(kept.size() == 5);
  for (int i = 0; i < 5; ++i) CHECK(kept[i].translation.x() == 2 * i);
  CHECK_THROWS_AS(demo_waypoints_passthrough(traj, 1), Error);
  CHECK_THROWS_AS(demo_waypoints_passthrough(traj, 10), Error);
}

}  // TEST_SUITE
