#pragma once

#include <Eigen/Dense>
#include <Eigen/Geometry>

#include <cmath>
#include <random>
#include <vector>

#include "screwkit/action_gen.hpp"
#include "screwkit/random.hpp"
#include "screwkit/screw_core.hpp"
#include "screwkit/trajectory.hpp"

namespace testutil {

using namespace screwkit;

using Mat4 = Eigen::Matrix4d;

inline Mat4 hat(const Twist& xi) {
  Mat4 m = Mat4::Zero();
  m(0, 1) = -xi.omega.z();
  m(0, 2) = xi.omega.y();
  m(1, 0) = xi.omega.z();
  m(1, 2) = -xi.omega.x();
  m(2, 0) = -xi.omega.y();
  m(2, 1) = xi.omega.x();
  m.block<3, 1>(0, 3) = xi.vee;
  return m;
}

// Truncated power series sum_{n<terms} A^n / n!.
inline Mat4 series_exp(const Mat4& a, int terms = 30) {
  Mat4 sum = Mat4::Identity();
  Mat4 term = Mat4::Identity();
  for (int n = 1; n < terms; ++n) {
    term = term * a / static_cast<double>(n);
    sum += term;
  }
  return sum;
}

inline Mat4 to_matrix(const Pose& p) {
  Mat4 m = Mat4::Identity();
  m.block<3, 3>(0, 0) = p.rotation;
  m.block<3, 1>(0, 3) = p.translation;
  return m;
}

inline double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

inline Vec3 uniform_box(Rng& rng, double half) {
  const double x = uniform(rng, -half, half);
  const double y = uniform(rng, -half, half);
  const double z = uniform(rng, -half, half);
  return Vec3(x, y, z);
}

inline double pose_residual(const Pose& a, const Pose& b) {
  return (a.rotation - b.rotation).norm() + (a.translation - b.translation).norm();
}

inline Pose random_pose(Rng& rng, double half = 0.5) {
  Pose p;
  p.rotation = random_rotation(rng);
  p.translation = uniform_box(rng, half);
  return p;
}

inline RelativeTrajectory generated(const ScrewAxis& axis, const WaypointPlan& plan) {
  return RelativeTrajectory::from_poses(generate_relative_waypoints(axis, plan));
}

inline double mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

// Two-pass sample standard deviation.
inline double sample_std(const std::vector<double>& v) {
  const double m = mean(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(v.size() - 1));
}

// Feasible pose at theta without going through screw_displace.
inline Pose oracle_displace(const ScrewAxis& axis, double theta, const Pose& t0) {
  Pose out = t0;
  if (axis.joint_type == JointType::kPrismatic) {
    out.translation += axis.s_hat * theta;
    return out;
  }
  const Rotation r = Eigen::AngleAxisd(theta, axis.s_hat.normalized()).toRotationMatrix();
  out.translation = r * (t0.translation - axis.q) + axis.q;
  if (axis.joint_type == JointType::kRevolute) out.rotation = r * t0.rotation;
  return out;
}

}  // namespace testutil
