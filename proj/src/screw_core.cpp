#include "screwkit/screw_core.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "screwkit/error.hpp"

namespace screwkit {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidArgument: return "invalid argument";
    case ErrorKind::kBranchAmbiguity: return "branch ambiguity";
    case ErrorKind::kDegenerateTwist: return "degenerate twist";
    case ErrorKind::kDegenerateTrajectory: return "degenerate trajectory";
    case ErrorKind::kCircleFitDegenerate: return "circle fit degenerate";
    case ErrorKind::kAlignment: return "alignment error";
    case ErrorKind::kNoModel: return "no model";
    case ErrorKind::kParse: return "parse error";
    case ErrorKind::kValidation: return "validation error";
    case ErrorKind::kIo: return "i/o error";
  }
  return "error";
}

namespace {

constexpr double kSmallAngle = 1e-3;
constexpr double kBranchMargin = 1e-6;

bool finite(const Vec3& v) { return v.allFinite(); }

}  // namespace

// ---------------------------------------------------------------------------
// Pose

Pose Pose::from_quaternion(const Eigen::Quaterniond& q, const Vec3& t) {
  Pose pose;
  pose.rotation = q.normalized().toRotationMatrix();
  pose.translation = t;
  return pose;
}

Pose Pose::inverse() const {
  Pose inv;
  inv.rotation = rotation.transpose();
  inv.translation = -(inv.rotation * translation);
  return inv;
}

Pose Pose::operator*(const Pose& rhs) const {
  Pose out;
  out.rotation = rotation * rhs.rotation;
  out.translation = rotation * rhs.translation + translation;
  return out;
}

Eigen::Quaterniond Pose::quaternion() const {
  Eigen::Quaterniond q(rotation);
  q.normalize();
  if (q.w() < 0.0) q.coeffs() *= -1.0;
  return q;
}

Eigen::Matrix<double, 6, 1> Twist::vector() const {
  Eigen::Matrix<double, 6, 1> out;
  out << omega, vee;
  return out;
}

// ---------------------------------------------------------------------------
// Joint types and axes

std::string_view to_string(JointType type) {
  switch (type) {
    case JointType::kPrismatic: return "prismatic";
    case JointType::kRevolute: return "revolute";
    case JointType::kRevolute3d: return "revolute3d";
  }
  return "revolute";
}

JointType joint_type_from_string(std::string_view name) {
  if (name == "prismatic") return JointType::kPrismatic;
  if (name == "revolute") return JointType::kRevolute;
  if (name == "revolute3d") return JointType::kRevolute3d;
  throw Error(ErrorKind::kValidation, "unknown joint type '" + std::string(name) + "'");
}

ScrewAxis ScrewAxis::prismatic(const Vec3& s_hat, const Vec3& q) {
  return {JointType::kPrismatic, q, s_hat.normalized(), kInf};
}

ScrewAxis ScrewAxis::revolute(const Vec3& s_hat, const Vec3& q) {
  return {JointType::kRevolute, q, s_hat.normalized(), 0.0};
}

ScrewAxis ScrewAxis::revolute3d(const Vec3& s_hat, const Vec3& q) {
  return {JointType::kRevolute3d, q, s_hat.normalized(), 0.0};
}

// ---------------------------------------------------------------------------
// SO(3)

Mat3 skew(const Vec3& v) {
  Mat3 s;
  // clang-format off
  s <<  0.0,   -v.z(),  v.y(),
        v.z(),  0.0,   -v.x(),
       -v.y(),  v.x(),  0.0;
  // clang-format on
  return s;
}

Vec3 unskew(const Mat3& m) { return {m(2, 1), m(0, 2), m(1, 0)}; }

Rotation exp_so3(const Vec3& omega) {
  const double theta = omega.norm();
  const Mat3 w = skew(omega);
  double a = 0.0;
  double b = 0.0;
  if (theta < kSmallAngle) {
    const double t2 = theta * theta;
    a = 1.0 - t2 / 6.0 + t2 * t2 / 120.0;
    b = 0.5 - t2 / 24.0 + t2 * t2 / 720.0;
  } else {
    a = std::sin(theta) / theta;
    b = (1.0 - std::cos(theta)) / (theta * theta);
  }
  return Mat3::Identity() + a * w + b * w * w;
}

namespace {

// Rotation angle from trace and antisymmetric part, robust over [0, pi].
double rotation_angle(const Rotation& r) {
  const double sin_part = 0.5 * unskew(r - r.transpose()).norm();
  const double cos_part = 0.5 * (r.trace() - 1.0);
  return std::atan2(sin_part, cos_part);
}

}  // namespace

Vec3 log_so3(const Rotation& r) {
  const double theta = rotation_angle(r);
  const Vec3 axis_sin = 0.5 * unskew(r - r.transpose());
  if (theta < kSmallAngle) {
    const double t2 = theta * theta;
    // theta / sin(theta)
    return (1.0 + t2 / 6.0 + 7.0 * t2 * t2 / 360.0) * axis_sin;
  }
  if (theta < 2.5) {
    return theta / std::sin(theta) * axis_sin;
  }
  // Near pi the antisymmetric part vanishes; read the axis from the symmetric
  // part (R + R^T)/2 - cos(theta) I = (1 - cos(theta)) n n^T.
  const Mat3 sym = 0.5 * (r + r.transpose()) - std::cos(theta) * Mat3::Identity();
  Eigen::Index k = 0;
  sym.diagonal().maxCoeff(&k);
  Vec3 n = sym.col(k);
  n.normalize();
  if (n.dot(axis_sin) < 0.0) n = -n;
  return theta * n;
}

double geodesic_angle(const Rotation& a, const Rotation& b) {
  // m = a^T b with a fixed summation order so that swapping a and b yields
  // m^T exactly.
  Mat3 m;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      m(i, j) = a(0, i) * b(0, j) + a(1, i) * b(1, j) + a(2, i) * b(2, j);
    }
  }
  const double s = 0.5 * std::hypot(m(2, 1) - m(1, 2), m(0, 2) - m(2, 0), m(1, 0) - m(0, 1));
  const double c = 0.5 * (m(0, 0) + m(1, 1) + m(2, 2) - 1.0);
  return std::atan2(s, c);
}

// ---------------------------------------------------------------------------
// SE(3)

Pose exp_coords(const Twist& xi) {
  if (!finite(xi.omega) || !finite(xi.vee)) {
    throw Error(ErrorKind::kInvalidArgument, "exp_coords: non-finite twist");
  }
  const double theta = xi.omega.norm();
  const Mat3 w = skew(xi.omega);
  const Mat3 w2 = w * w;
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  if (theta < kSmallAngle) {
    const double t2 = theta * theta;
    a = 1.0 - t2 / 6.0 + t2 * t2 / 120.0;
    b = 0.5 - t2 / 24.0 + t2 * t2 / 720.0;
    c = 1.0 / 6.0 - t2 / 120.0 + t2 * t2 / 5040.0;
  } else {
    const double st = std::sin(theta);
    const double ct = std::cos(theta);
    a = st / theta;
    b = (1.0 - ct) / (theta * theta);
    c = (theta - st) / (theta * theta * theta);
  }
  Pose out;
  out.rotation = Mat3::Identity() + a * w + b * w2;
  out.translation = (Mat3::Identity() + b * w + c * w2) * xi.vee;
  return out;
}

Twist log_pose(const Pose& pose) {
  const double theta = rotation_angle(pose.rotation);
  if (theta >= kPi - kBranchMargin) {
    throw Error(ErrorKind::kBranchAmbiguity,
                "log_pose: rotation angle " + std::to_string(theta) + " rad is too close to pi");
  }
  Twist xi;
  xi.omega = log_so3(pose.rotation);
  const Mat3 w = skew(xi.omega);
  double c = 0.0;
  if (theta < kSmallAngle) {
    const double t2 = theta * theta;
    c = 1.0 / 12.0 + t2 / 720.0 + t2 * t2 / 30240.0;
  } else {
    const double st = std::sin(theta);
    const double ct = std::cos(theta);
    c = (1.0 - theta * st / (2.0 * (1.0 - ct))) / (theta * theta);
  }
  const Mat3 v_inv = Mat3::Identity() - 0.5 * w + c * w * w;
  xi.vee = v_inv * pose.translation;
  return xi;
}

Twist screw_to_twist(const ScrewAxis& axis, double theta) {
  if (!std::isfinite(theta) || !finite(axis.q) || !finite(axis.s_hat)) {
    throw Error(ErrorKind::kInvalidArgument, "screw_to_twist: non-finite input");
  }
  Twist xi;
  if (axis.joint_type == JointType::kPrismatic) {
    xi.vee = axis.s_hat * theta;
    return xi;
  }
  xi.omega = axis.s_hat * theta;
  xi.vee = -xi.omega.cross(axis.q);
  if (axis.pitch != 0.0 && std::isfinite(axis.pitch)) xi.vee += axis.pitch * xi.omega;
  return xi;
}

ScrewAxis twist_to_screw(const Twist& xi) {
  constexpr double kTiny = 1e-8;
  const double w = xi.omega.norm();
  if (w > kTiny) {
    ScrewAxis axis;
    axis.joint_type = JointType::kRevolute;
    axis.s_hat = xi.omega / w;
    axis.q = axis.s_hat.cross(xi.vee) / w;
    const double pitch = axis.s_hat.dot(xi.vee) / w;
    // Pitch is invariant to flipping s_hat, so canonicalization keeps it.
    axis.pitch = std::abs(pitch) < kPitchTolerance ? 0.0 : pitch;
    return canonicalize_axis(axis);
  }
  const double v = xi.vee.norm();
  if (v > kTiny) {
    return canonicalize_axis(ScrewAxis::prismatic(xi.vee / v, Vec3::Zero()));
  }
  throw Error(ErrorKind::kDegenerateTwist, "twist_to_screw: zero twist");
}

bool has_general_pitch(const ScrewAxis& axis) {
  return is_rotational(axis.joint_type) && std::isfinite(axis.pitch) &&
         std::abs(axis.pitch) >= kPitchTolerance;
}

ScrewAxis reproject_axis(const ScrewAxis& axis) {
  const double n = axis.s_hat.norm();
  if (!(n > 1e-8) || !std::isfinite(n)) {
    throw Error(ErrorKind::kInvalidArgument, "axis direction has zero length");
  }
  ScrewAxis out = axis;
  out.s_hat = axis.s_hat / n;
  out.q = axis.q - axis.q.dot(out.s_hat) * out.s_hat;
  return out;
}

ScrewAxis canonicalize_axis(const ScrewAxis& axis) {
  ScrewAxis out = reproject_axis(axis);
  for (int i = 0; i < 3; ++i) {
    if (std::abs(out.s_hat[i]) > 1e-9) {
      if (out.s_hat[i] < 0.0) out.s_hat = -out.s_hat;
      break;
    }
  }
  return out;
}

AxisError axis_error(const ScrewAxis& a, const ScrewAxis& b) {
  const Vec3 sa = a.s_hat.normalized();
  const Vec3 sb = b.s_hat.normalized();
  AxisError err;
  const double cosang = std::min(1.0, std::abs(sa.dot(sb)));
  err.angle_deg = std::acos(cosang) * 180.0 / kPi;

  const Vec3 d = b.q - a.q;
  const Vec3 c = sa.cross(sb);
  const double cn = c.norm();
  if (cn > 1e-10) {
    err.distance = std::abs(d.dot(c)) / cn;
  } else {
    // Parallel lines: symmetrized perpendicular offset.
    const double da = (d - d.dot(sa) * sa).norm();
    const double db = (d - d.dot(sb) * sb).norm();
    err.distance = 0.5 * (da + db);
  }
  return err;
}

double pose_distance(const Pose& a, const Pose& b, double lambda) {
  return (a.translation - b.translation).norm() + lambda * geodesic_angle(a.rotation, b.rotation);
}

Pose screw_displace(const ScrewAxis& axis, double theta, const Pose& initial) {
  switch (axis.joint_type) {
    case JointType::kPrismatic: {
      Pose out = initial;
      out.translation += axis.s_hat * theta;
      return out;
    }
    case JointType::kRevolute:
      return exp_coords(screw_to_twist(axis, theta)) * initial;
    case JointType::kRevolute3d: {
      const Pose motion = exp_coords(screw_to_twist(axis, theta));
      Pose out = initial;
      out.translation = motion * initial.translation;
      return out;
    }
  }
  return initial;
}

}  // namespace screwkit
