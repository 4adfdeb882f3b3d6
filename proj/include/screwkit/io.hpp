#pragma once

#include <nlohmann/json.hpp>

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "screwkit/action_gen.hpp"
#include "screwkit/augment_predict.hpp"
#include "screwkit/axis_fit.hpp"
#include "screwkit/bimanual_sim.hpp"
#include "screwkit/cem_opt.hpp"
#include "screwkit/scenarios.hpp"
#include "screwkit/trajectory.hpp"

namespace screwkit {

using Json = nlohmann::json;

// Files

std::string read_text_file(const std::string& path);
/// Writes through a temporary file and renames it into place.
void write_text_file(const std::string& path, const std::string& content);

// JSON values. The *_from_json functions throw kValidation naming the
// offending key.

Json vec_to_json(const Vec3& v);
Vec3 vec_from_json(const Json& j, const std::string& key);

Json pose_to_json(const Pose& pose);  // {"translation": [...], "quaternion": [w, x, y, z]}
Pose pose_from_json(const Json& j, const std::string& key);

/// {"type", "q", "s_hat", "pitch"}; pitch is the string "inf" for prismatic.
Json axis_to_json(const ScrewAxis& axis);
ScrewAxis axis_from_json(const Json& j, const std::string& key = "axis");

Json plan_to_json(const WaypointPlan& plan);
WaypointPlan plan_from_json(const Json& j, const std::string& key = "plan");

Json mechanism_to_json(const Mechanism& mech);
Mechanism mechanism_from_json(const Json& j, const std::string& key = "mechanism");

Json cem_config_to_json(const CemConfig& config);
/// Keys absent from j keep their value from base.
CemConfig cem_config_from_json(const Json& j, const std::string& key = "cem", const CemConfig& base = {});

/// Demo paths are resolved against base_dir when relative.
Json scenario_to_json(const ScenarioConfig& scenario);
ScenarioConfig scenario_from_json(const Json& j, const std::string& base_dir = "");

/// tau_l is written as a path (tau_l_path) when present.
Json action_to_json(const ScrewAction& action, const std::optional<std::string>& tau_l_path = std::nullopt);
ScrewAction action_from_json(const Json& j, const std::string& base_dir = "");

Json fit_result_to_json(const FitResult& fit);
Json episode_to_json(const EpisodeResult& episode);
Json sample_to_json(const CemSample& sample);
Json opt_run_summary_to_json(const OptRun& run);

// CSV and text formats

/// Header t,px,py,pz,qw,qx,qy,qz. Rows are numbered from 1 after the header.
/// Malformed cells raise kParse naming row and column; quaternion norms
/// outside [0.99, 1.01] raise kValidation, others are renormalized.
HandTrajectory parse_trajectory_csv(const std::string& text, const std::string& source);
HandTrajectory read_trajectory_csv(const std::string& path);
std::string format_trajectory_csv(const HandTrajectory& traj);

/// Header k,side,px,py,pz,qw,qx,qy,qz with a left and a right row per k.
std::string format_waypoints_csv(const BimanualWaypoints& waypoints);
BimanualWaypoints parse_waypoints_csv(const std::string& text, const std::string& source);

std::string format_noise_study_csv(const std::vector<NoiseStudyRow>& rows);

/// One `x y z` triple per line; blank lines and lines starting with # ignored.
PointCloud parse_point_cloud(const std::string& text, const std::string& source);
std::string format_point_cloud(const PointCloud& cloud);

std::string format_opt_run_jsonl(const OptRun& run);

struct Demo {
  HandTrajectory left;
  HandTrajectory right;
  RelativeTrajectory relative;
  Vec3 g_l = Vec3::Zero();
  Vec3 g_r = Vec3::Zero();
};

/// Two trajectory CSVs plus a metadata JSON {"g_l": [...], "g_r": [...]}.
Demo load_demo(const std::string& left_path, const std::string& right_path, const std::string& meta_path);

// Dataset directory: index.txt lists ids in insertion order; each example is
// examples/<id>.json with its cloud in examples/<id>.xyz and an optional
// left-hand trajectory in examples/<id>_tau_l.csv.

/// File name -> content for a dataset rooted at the directory they are
/// written into.
std::map<std::string, std::string> dataset_files(const Dataset& dataset);
Dataset load_dataset(const std::string& dir);

}  // namespace screwkit
