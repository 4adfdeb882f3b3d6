#include "screwkit/axis_fit.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>

#include "screwkit/error.hpp"
#include "screwkit/random.hpp"
#include "screwkit/scalar_search.hpp"

namespace screwkit {

namespace {

constexpr double kDegToRad = kPi / 180.0;

Eigen::MatrixX3d positions(const RelativeTrajectory& traj) {
  Eigen::MatrixX3d p(static_cast<Eigen::Index>(traj.size()), 3);
  for (std::size_t i = 0; i < traj.size(); ++i) {
    p.row(static_cast<Eigen::Index>(i)) = traj.samples[i].pose.translation.transpose();
  }
  return p;
}

// Signed angle of b relative to a about unit axis n, in (-pi, pi].
double signed_angle(const Vec3& a, const Vec3& b, const Vec3& n) {
  return std::atan2(n.dot(a.cross(b)), a.dot(b));
}

// Cumulative signed displacement of the trajectory along a fitted axis.
double signed_extent(const RelativeTrajectory& traj, const ScrewAxis& axis) {
  const auto& first = traj.samples.front().pose;
  const auto& last = traj.samples.back().pose;
  if (axis.joint_type == JointType::kPrismatic) {
    return axis.s_hat.dot(last.translation - first.translation);
  }
  double total = 0.0;
  for (std::size_t i = 1; i < traj.size(); ++i) {
    const auto& prev = traj.samples[i - 1].pose;
    const auto& cur = traj.samples[i].pose;
    if (axis.joint_type == JointType::kRevolute) {
      total += log_so3(cur.rotation * prev.rotation.transpose()).dot(axis.s_hat);
    } else {
      const Vec3 a = prev.translation - axis.q;
      const Vec3 b = cur.translation - axis.q;
      const Vec3 a_perp = a - a.dot(axis.s_hat) * axis.s_hat;
      const Vec3 b_perp = b - b.dot(axis.s_hat) * axis.s_hat;
      if (a_perp.norm() > 1e-12 && b_perp.norm() > 1e-12) {
        total += signed_angle(a_perp, b_perp, axis.s_hat);
      }
    }
  }
  return total;
}

FitResult finish(const RelativeTrajectory& traj, const ScrewAxis& axis, const FitOptions& options) {
  FitResult out;
  out.axis = axis;
  out.score = model_score(traj, axis, options.lambda);
  out.per_type_scores[axis.joint_type] = out.score;
  out.theta_extent = signed_extent(traj, axis);
  return out;
}

void require_samples(const RelativeTrajectory& traj, std::size_t n, const char* who) {
  if (traj.size() < n) {
    throw Error(ErrorKind::kDegenerateTrajectory,
                std::string(who) + ": need at least " + std::to_string(n) + " samples, got " +
                    std::to_string(traj.size()));
  }
}

}  // namespace

RelativeTrajectory relative_trajectory(const HandTrajectory& left, const HandTrajectory& right) {
  if (left.size() != right.size()) {
    throw Error(ErrorKind::kAlignment, "hand trajectories have " + std::to_string(left.size()) +
                                           " and " + std::to_string(right.size()) + " samples");
  }
  RelativeTrajectory out;
  out.samples.reserve(left.size());
  for (std::size_t i = 0; i < left.size(); ++i) {
    const auto& l = left.samples[i];
    const auto& r = right.samples[i];
    if (std::abs(l.t - r.t) > 1e-6) {
      throw Error(ErrorKind::kAlignment, "timestamp mismatch at sample " + std::to_string(i));
    }
    out.samples.push_back({l.t, l.pose.inverse() * r.pose});
  }
  return out;
}

FitResult fit_prismatic(const RelativeTrajectory& traj, const FitOptions& options) {
  require_samples(traj, 2, "fit_prismatic");
  const Eigen::MatrixX3d p = positions(traj);
  const Vec3 span = p.row(p.rows() - 1).transpose() - p.row(0).transpose();
  if (span.norm() <= 1e-6) {
    throw Error(ErrorKind::kDegenerateTrajectory, "fit_prismatic: trajectory does not translate");
  }
  const Vec3 centroid = p.colwise().mean().transpose();
  const Eigen::MatrixX3d centered = p.rowwise() - centroid.transpose();
  Eigen::JacobiSVD<Eigen::MatrixX3d> svd(centered, Eigen::ComputeFullV);
  Vec3 dir = svd.matrixV().col(0);
  if (dir.dot(span) < 0.0) dir = -dir;
  return finish(traj, canonicalize_axis(ScrewAxis::prismatic(dir, centroid)), options);
}

FitResult fit_revolute(const RelativeTrajectory& traj, const FitOptions& options) {
  require_samples(traj, 2, "fit_revolute");
  const Pose t0_inv = traj.initial().inverse();

  struct Usable {
    Vec3 s_hat;
    Vec3 q;
    double angle;
  };
  std::vector<Usable> usable;
  int skipped = 0;
  for (std::size_t i = 1; i < traj.size(); ++i) {
    const Pose displacement = traj.samples[i].pose * t0_inv;
    Twist xi;
    try {
      xi = log_pose(displacement);
    } catch (const Error&) {
      ++skipped;
      continue;
    }
    const double angle = xi.omega.norm();
    if (angle <= options.min_angle || angle >= kPi - options.max_angle_margin) {
      ++skipped;
      continue;
    }
    const ScrewAxis axis = twist_to_screw(xi);
    if (std::abs(axis.pitch) > options.max_pitch) {
      ++skipped;
      continue;
    }
    usable.push_back({axis.s_hat, axis.q, angle});
  }
  const int steps = static_cast<int>(traj.size()) - 1;
  if (usable.empty() || 2 * skipped > steps) {
    throw Error(ErrorKind::kDegenerateTrajectory,
                "fit_revolute: " + std::to_string(skipped) + " of " + std::to_string(steps) +
                    " displacements unusable");
  }
  // Directions are sign-aligned with the largest displacement, whose axis is
  // the best conditioned one.
  const auto widest = std::max_element(usable.begin(), usable.end(),
                                       [](const Usable& a, const Usable& b) { return a.angle < b.angle; });
  const Vec3 reference = widest->s_hat;
  Vec3 s_sum = Vec3::Zero();
  Vec3 q_sum = Vec3::Zero();
  for (const auto& u : usable) {
    s_sum += u.s_hat.dot(reference) < 0.0 ? Vec3(-u.s_hat) : u.s_hat;
    q_sum += u.q;
  }
  const ScrewAxis mean_axis =
      ScrewAxis::revolute(s_sum.normalized(), q_sum / static_cast<double>(usable.size()));
  FitResult out = finish(traj, canonicalize_axis(mean_axis), options);
  out.skipped_samples = skipped;
  return out;
}

FitResult fit_revolute3d(const RelativeTrajectory& traj, const FitOptions& options) {
  if (traj.size() < 3) {
    throw Error(ErrorKind::kCircleFitDegenerate, "fit_revolute3d: need at least 3 samples");
  }
  const Eigen::MatrixX3d p = positions(traj);
  const Vec3 centroid = p.colwise().mean().transpose();
  const Eigen::MatrixX3d centered = p.rowwise() - centroid.transpose();
  Eigen::JacobiSVD<Eigen::MatrixX3d> svd(centered, Eigen::ComputeFullV);
  const Vec3 sv = svd.singularValues();
  if (!(sv[1] > 1e-9 * std::max(sv[0], 1e-3))) {
    throw Error(ErrorKind::kCircleFitDegenerate, "fit_revolute3d: positions are collinear");
  }
  const Vec3 u = svd.matrixV().col(0);
  const Vec3 w = svd.matrixV().col(1);
  const Vec3 normal = svd.matrixV().col(2);

  // Kasa fit: x^2 + y^2 + D x + E y + F = 0 in plane coordinates.
  const Eigen::VectorXd x = centered * u;
  const Eigen::VectorXd y = centered * w;
  Eigen::MatrixX3d a(x.size(), 3);
  a.col(0) = x;
  a.col(1) = y;
  a.col(2).setOnes();
  const Eigen::VectorXd rhs = -(x.array().square() + y.array().square()).matrix();
  const Eigen::ColPivHouseholderQR<Eigen::MatrixX3d> qr(a);
  if (qr.rank() < 3) {
    throw Error(ErrorKind::kCircleFitDegenerate, "fit_revolute3d: circle system is singular");
  }
  const Vec3 coef = qr.solve(rhs);
  const Vec3 center = centroid - 0.5 * coef[0] * u - 0.5 * coef[1] * w;
  if (!center.allFinite()) {
    throw Error(ErrorKind::kCircleFitDegenerate, "fit_revolute3d: non-finite circle center");
  }
  return finish(traj, canonicalize_axis(ScrewAxis::revolute3d(normal, center)), options);
}

FitResult fit_joint(JointType type, const RelativeTrajectory& traj, const FitOptions& options) {
  switch (type) {
    case JointType::kPrismatic: return fit_prismatic(traj, options);
    case JointType::kRevolute: return fit_revolute(traj, options);
    case JointType::kRevolute3d: return fit_revolute3d(traj, options);
  }
  throw Error(ErrorKind::kInvalidArgument, "unknown joint type");
}

OrientedAxis oriented_axis(const FitResult& fit) {
  OrientedAxis out{fit.axis, std::abs(fit.theta_extent)};
  if (fit.theta_extent < 0.0) out.axis.s_hat = -out.axis.s_hat;
  return out;
}

double model_score(const RelativeTrajectory& traj, const ScrewAxis& axis, double lambda) {
  if (traj.size() == 0) return 0.0;
  const Pose& t0 = traj.initial();
  const double span = is_rotational(axis.joint_type) ? 2.0 * kPi : 1.0;
  double total = 0.0;
  for (const auto& sample : traj.samples) {
    const auto dist = [&](double theta) {
      return pose_distance(sample.pose, screw_displace(axis, theta, t0), lambda);
    };
    total += minimize_scalar(dist, -span, span, 65, 1e-9).value;
  }
  return total / static_cast<double>(traj.size());
}

FitResult select_joint_type(const RelativeTrajectory& traj, const FitOptions& options) {
  require_samples(traj, 2, "select_joint_type");
  std::map<JointType, double> scores;
  std::optional<FitResult> best;
  for (const JointType type : {JointType::kPrismatic, JointType::kRevolute, JointType::kRevolute3d}) {
    try {
      FitResult fit = fit_joint(type, traj, options);
      scores[type] = fit.score;
      if (!best || fit.score < best->score) best = std::move(fit);
    } catch (const Error&) {
      // Estimator preconditions not met; this type is not a candidate.
    }
  }
  if (!best) throw Error(ErrorKind::kNoModel, "select_joint_type: every estimator failed");
  best->per_type_scores = scores;
  return *best;
}

RelativeTrajectory perturb_trajectory(const RelativeTrajectory& traj, const NoiseSpec& noise) {
  if (noise.sigma_pos < 0.0 || noise.sigma_rot_deg < 0.0) {
    throw Error(ErrorKind::kInvalidArgument, "noise sigmas must be non-negative");
  }
  Rng rng = make_rng(noise.seed);
  const double sigma_rot = noise.sigma_rot_deg * kDegToRad;
  RelativeTrajectory out = traj;
  for (auto& sample : out.samples) {
    const Vec3 dp = gaussian_vec3(rng, noise.sigma_pos);
    const Vec3 drot = gaussian_vec3(rng, sigma_rot);
    sample.pose.translation += dp;
    sample.pose.rotation = sample.pose.rotation * exp_so3(drot);
  }
  return out;
}

std::vector<NoiseSpec> standard_noise_levels(std::uint64_t seed) {
  std::vector<NoiseSpec> levels;
  for (int i = 0; i < 5; ++i) {
    levels.push_back({0.010 + 0.005 * i, 2.5 * (i + 1), seed + 1000u * static_cast<std::uint64_t>(i + 1)});
  }
  return levels;
}

NoiseStudyGroundTruth default_noise_study_ground_truth() {
  NoiseStudyGroundTruth gt;
  gt.axis = canonicalize_axis(ScrewAxis::revolute(Vec3::UnitZ(), Vec3(0.0, 0.0, 0.0)));
  gt.plan.theta_total = kPi;
  gt.plan.k_steps = 29;
  // Gripper on the cap rim, 3 cm from the axis, fingers pointing down.
  gt.plan.t_initial.translation = Vec3(0.03, 0.0, 0.15);
  gt.plan.t_initial.rotation = rotation_about(Vec3::UnitY(), kPi / 2);
  return gt;
}

std::vector<NoiseStudyRow> run_noise_study(const ScrewAxis& gt_axis, const WaypointPlan& gt_plan,
                                           const std::vector<NoiseSpec>& levels,
                                           int trials_per_level, const FitOptions& options) {
  if (trials_per_level < 1) {
    throw Error(ErrorKind::kInvalidArgument, "noise study needs at least one trial per level");
  }
  const RelativeTrajectory clean =
      RelativeTrajectory::from_poses(generate_relative_waypoints(gt_axis, gt_plan));
  std::vector<NoiseStudyRow> rows;
  for (std::size_t li = 0; li < levels.size(); ++li) {
    const NoiseSpec& level = levels[li];
    NoiseStudyRow row;
    row.level = static_cast<int>(li) + 1;
    row.sigma_pos = level.sigma_pos;
    row.sigma_rot_deg = level.sigma_rot_deg;
    row.trials = trials_per_level;
    std::vector<double> dists;
    std::vector<double> angles;
    for (int trial = 0; trial < trials_per_level; ++trial) {
      NoiseSpec spec = level;
      spec.seed = level.seed + static_cast<std::uint64_t>(trial);
      try {
        const FitResult fit = fit_joint(gt_axis.joint_type, perturb_trajectory(clean, spec), options);
        const AxisError err = axis_error(fit.axis, gt_axis);
        dists.push_back(err.distance);
        angles.push_back(err.angle_deg);
      } catch (const Error&) {
        ++row.failures;
      }
    }
    const auto moments = [](const std::vector<double>& v, double& mean, double& sd) {
      mean = 0.0;
      sd = 0.0;
      if (v.empty()) return;
      for (double x : v) mean += x;
      mean /= static_cast<double>(v.size());
      if (v.size() < 2) return;
      for (double x : v) sd += (x - mean) * (x - mean);
      sd = std::sqrt(sd / static_cast<double>(v.size() - 1));
    };
    moments(dists, row.mean_dist, row.std_dist);
    moments(angles, row.mean_angle_deg, row.std_angle_deg);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace screwkit
