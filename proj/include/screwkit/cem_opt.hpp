#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <optional>
#include <vector>

#include "screwkit/action_gen.hpp"
#include "screwkit/bimanual_sim.hpp"
#include "screwkit/random.hpp"
#include "screwkit/screw_core.hpp"

namespace screwkit {

struct RewardFlags {
  bool use_grasp_lost = true;
  bool use_mean_wrench = true;
};

struct CemConfig {
  int n_epochs = 5;
  int episodes_per_epoch = 5;
  int elite_count = 5;
  Eigen::VectorXd sigma0 = default_sigma0();
  Eigen::VectorXd sigma_floor = Eigen::VectorXd::Constant(6, 1e-4);
  std::uint64_t seed = 0;
  bool stop_on_success = true;
  RewardFlags reward_flags;

  /// (0.02 m) for the three q offsets, 0.1 for the three direction offsets.
  static Eigen::VectorXd default_sigma0();
};

void validate_cem_config(const CemConfig& config);

/// Diagonal Gaussian over perturbations.
struct Distribution {
  Eigen::VectorXd mean;
  Eigen::VectorXd std;
};

struct CemSample {
  Eigen::VectorXd epsilon;
  std::optional<ScrewAxis> candidate_axis;  // absent for waypoint-space samples
  EpisodeResult episode;
  bool success = false;
  int epoch = 0;  // 0-based
  int index = 0;  // 0-based within the epoch
};

struct OptRun {
  std::vector<CemSample> history;
  std::size_t best = 0;  // index into history
  bool succeeded = false;
  std::optional<int> episodes_to_success;
  Distribution final_distribution;
};

/// Candidate from init_axis and eps ~ distribution: q = q_init + eps[0:3],
/// s_hat = normalize(s_init + eps[3:6]). q is reprojected onto the foot of the
/// perpendicular; the direction keeps the sense of s_init so the commanded
/// motion does not reverse. Redraws up to 100 times if the direction vanishes.
CemSample sample_candidate(const ScrewAxis& init_axis, const Distribution& distribution, Rng& rng);

/// Axis for a given perturbation (the deterministic half of sample_candidate).
ScrewAxis apply_perturbation(const ScrewAxis& init_axis, const Eigen::VectorXd& epsilon);

/// Elite set: top T by episode length (descending; ties by lower mean wrench
/// when enabled, then submission order), then ordered by mean wrench ascending
/// when use_mean_wrench. With use_grasp_lost off, the ungated episode is used.
std::vector<CemSample> rank_and_elite(const std::vector<CemSample>& history, int elite_count,
                                      const RewardFlags& flags);

/// Per-dimension mean and sample standard deviation, clamped below by floor.
Distribution fit_distribution(const std::vector<CemSample>& elite, const Eigen::VectorXd& sigma_floor);

/// Lexicographic quality: success, then episode length, then lower mean wrench.
/// Returns true when a is strictly better than b.
bool better_sample(const CemSample& a, const CemSample& b);

/// Cross-entropy search in screw-axis space around a fixed anchor init_axis.
OptRun optimize(const Mechanism& mech, const ScrewAxis& init_axis, const WaypointPlan& plan,
                const CemConfig& config);

struct WaypointNoise {
  double sigma_pos = 0.02;  // meters
  double sigma_rot = 0.1;   // radians
};

/// Baseline: the same CEM loop in raw waypoint space. Each waypoint gets an
/// independent translation offset and rotation-vector offset (6 dims per
/// waypoint). config.sigma0/sigma_floor are ignored in favour of `noise` and a
/// uniform floor of config.sigma_floor[0].
OptRun optimize_waypoint_space(const Mechanism& mech, const std::vector<Pose>& init_waypoints,
                               const CemConfig& config, const WaypointNoise& noise);

/// Applies a 6-per-waypoint perturbation to a waypoint sequence.
std::vector<Pose> perturb_waypoints(const std::vector<Pose>& waypoints, const Eigen::VectorXd& epsilon);

}  // namespace screwkit
