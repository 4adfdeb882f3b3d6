#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <limits>
#include <string>
#include <string_view>

namespace screwkit {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Rotation = Eigen::Matrix3d;

inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr double kPi = 3.14159265358979323846;

/// Default weight converting a rotation error (rad) into meters for pose_distance.
inline constexpr double kDefaultLambda = 0.1;
/// Pitch below which a rotational twist counts as a pure rotation.
inline constexpr double kPitchTolerance = 1e-6;

// ======================
// Rigid transforms
// ======================

/// Rigid transform x -> R x + t.
struct Pose {
  Rotation rotation = Rotation::Identity();
  Vec3 translation = Vec3::Zero();

  static Pose identity() { return {}; }
  static Pose from_quaternion(const Eigen::Quaterniond& q, const Vec3& t);

  Pose inverse() const;
  Pose operator*(const Pose& rhs) const;
  Vec3 operator*(const Vec3& p) const { return rotation * p + translation; }

  /// Unit quaternion, scalar-first, with w >= 0.
  Eigen::Quaterniond quaternion() const;
};

/// Exponential coordinates (omega, v) of a rigid motion.
struct Twist {
  Vec3 omega = Vec3::Zero();
  Vec3 vee = Vec3::Zero();

  Eigen::Matrix<double, 6, 1> vector() const;
};

enum class JointType { kPrismatic, kRevolute, kRevolute3d };

std::string_view to_string(JointType type);
JointType joint_type_from_string(std::string_view name);

inline bool is_rotational(JointType type) { return type != JointType::kPrismatic; }

/// A line (q, s_hat) with pitch. Prismatic axes carry pitch = +inf.
struct ScrewAxis {
  JointType joint_type = JointType::kRevolute;
  Vec3 q = Vec3::Zero();
  Vec3 s_hat = Vec3::UnitZ();
  double pitch = 0.0;

  static ScrewAxis prismatic(const Vec3& s_hat, const Vec3& q = Vec3::Zero());
  static ScrewAxis revolute(const Vec3& s_hat, const Vec3& q);
  static ScrewAxis revolute3d(const Vec3& s_hat, const Vec3& q);
};

/// Distance (m) and unsigned angle (deg, in [0, 90]) between two axis lines.
struct AxisError {
  double distance = 0.0;
  double angle_deg = 0.0;
};

Mat3 skew(const Vec3& v);
Vec3 unskew(const Mat3& m);

/// Rodrigues rotation for a rotation vector.
Rotation exp_so3(const Vec3& omega);
/// Principal-branch rotation vector; angle in [0, pi].
Vec3 log_so3(const Rotation& rotation);
/// Geodesic angle between two rotations, radians.
double geodesic_angle(const Rotation& a, const Rotation& b);

// ======================
// Screw operations
// ======================

/// Closed-form matrix exponential of a twist.
Pose exp_coords(const Twist& xi);

/// Matrix logarithm. Throws kBranchAmbiguity when the rotation angle is within
/// 1e-6 of pi.
Twist log_pose(const Pose& pose);

/// xi = S * theta. For prismatic axes theta is a displacement in meters.
Twist screw_to_twist(const ScrewAxis& axis, double theta);

/// Inverse of screw_to_twist up to scale; result is canonical. A rotational
/// twist whose pitch exceeds kPitchTolerance keeps its measured pitch (see
/// has_general_pitch).
ScrewAxis twist_to_screw(const Twist& xi);

/// True for a rotational axis whose pitch is outside {0, inf}.
bool has_general_pitch(const ScrewAxis& axis);

/// q moved to the foot of the perpendicular from the origin, s_hat renormalized
/// and sign-fixed so its first component with |c| > 1e-9 is positive.
ScrewAxis canonicalize_axis(const ScrewAxis& axis);

/// Like canonicalize_axis but keeps the direction sense of s_hat. Used where
/// the sign of s_hat encodes the direction of motion.
ScrewAxis reproject_axis(const ScrewAxis& axis);

AxisError axis_error(const ScrewAxis& a, const ScrewAxis& b);

/// ||t_a - t_b|| + lambda * geodesic_angle(R_a, R_b).
double pose_distance(const Pose& a, const Pose& b, double lambda = kDefaultLambda);

/// Displacement of the relative pose under a joint-typed screw motion:
///   prismatic   translation += s_hat * theta
///   revolute    exp([S] theta) * initial
///   revolute3d  position rotated about the axis, orientation pinned
Pose screw_displace(const ScrewAxis& axis, double theta, const Pose& initial);

}  // namespace screwkit
