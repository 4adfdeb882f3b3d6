#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "screwkit/action_gen.hpp"
#include "screwkit/screw_core.hpp"
#include "screwkit/trajectory.hpp"

namespace screwkit {

struct FitResult {
  ScrewAxis axis;
  double score = 0.0;
  std::map<JointType, double> per_type_scores;
  /// Signed displacement from the first to the last sample along the fitted
  /// (canonical) axis: radians for rotational types, meters for prismatic.
  double theta_extent = 0.0;
  /// Samples the estimator excluded (revolute only).
  int skipped_samples = 0;
};

struct FitOptions {
  double lambda = kDefaultLambda;
  /// Revolute displacement angles outside (min_angle, pi - max_angle_margin)
  /// are excluded from averaging.
  double min_angle = 1e-4;
  double max_angle_margin = 0.01;
  /// Revolute samples whose twist pitch exceeds this (m/rad) are excluded.
  double max_pitch = 0.05;
  /// MAP likelihood temperature; irrelevant under the uniform prior.
  double beta = 1.0;
};

struct NoiseSpec {
  double sigma_pos = 0.0;      // meters
  double sigma_rot_deg = 0.0;  // degrees
  std::uint64_t seed = 0;
};

/// sample_i = left_i^-1 * right_i. Throws kAlignment on length or timestamp
/// mismatch (tolerance 1e-6 s).
RelativeTrajectory relative_trajectory(const HandTrajectory& left, const HandTrajectory& right);

FitResult fit_prismatic(const RelativeTrajectory& traj, const FitOptions& options = {});
FitResult fit_revolute(const RelativeTrajectory& traj, const FitOptions& options = {});
FitResult fit_revolute3d(const RelativeTrajectory& traj, const FitOptions& options = {});
FitResult fit_joint(JointType type, const RelativeTrajectory& traj, const FitOptions& options = {});

/// Fitted axis with s_hat flipped when needed so that the demonstrated motion
/// is a positive displacement, plus that displacement's magnitude.
struct OrientedAxis {
  ScrewAxis axis;
  double theta_total = 0.0;
};
OrientedAxis oriented_axis(const FitResult& fit);

/// Mean over samples of min_theta pose_distance(sample_i, displace(axis, theta, T_0)).
double model_score(const RelativeTrajectory& traj, const ScrewAxis& axis,
                   double lambda = kDefaultLambda);

/// Runs every estimator and keeps the one with the lowest score (MAP with a
/// uniform prior over joint types). Throws kNoModel when all estimators fail.
FitResult select_joint_type(const RelativeTrajectory& traj, const FitOptions& options = {});

/// Gaussian position noise per component; rotation noise is a rotation vector
/// with N(0, sigma_rot^2) components, post-composed on every sample.
/// Deterministic in noise.seed.
RelativeTrajectory perturb_trajectory(const RelativeTrajectory& traj, const NoiseSpec& noise);

struct NoiseStudyRow {
  int level = 0;
  double sigma_pos = 0.0;
  double sigma_rot_deg = 0.0;
  double mean_dist = 0.0;
  double std_dist = 0.0;
  double mean_angle_deg = 0.0;
  double std_angle_deg = 0.0;
  int failures = 0;
  int trials = 0;
};

/// The five standard noise levels: (1.0 cm, 2.5 deg) through (3.0 cm, 12.5 deg).
std::vector<NoiseSpec> standard_noise_levels(std::uint64_t seed = 0);

/// Ground-truth trajectory for the default study: a revolute joint about a
/// vertical axis, hand at 3 cm radius, 180 degrees in 30 samples.
struct NoiseStudyGroundTruth {
  ScrewAxis axis;
  WaypointPlan plan;
};
NoiseStudyGroundTruth default_noise_study_ground_truth();

/// Trial t of a level uses seed level.seed + t.
std::vector<NoiseStudyRow> run_noise_study(const ScrewAxis& gt_axis, const WaypointPlan& gt_plan,
                                           const std::vector<NoiseSpec>& levels,
                                           int trials_per_level, const FitOptions& options = {});

}  // namespace screwkit
