#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "screwkit/action_gen.hpp"
#include "screwkit/screw_core.hpp"

namespace screwkit {

struct PointCloud {
  std::vector<Vec3> points;

  std::size_t size() const { return points.size(); }
  Vec3 centroid() const;
};

enum class Provenance { kDemonstration, kAugmented, kCorrected };

std::string_view to_string(Provenance p);
Provenance provenance_from_string(std::string_view name);

struct Example {
  std::string id;
  PointCloud cloud;
  ScrewAction action;
  Provenance provenance = Provenance::kDemonstration;
  std::optional<std::string> parent_id;
};

/// Append-only, insertion ordered.
struct Dataset {
  std::vector<Example> examples;

  std::size_t size() const { return examples.size(); }
  bool empty() const { return examples.empty(); }
  const Example* find(const std::string& id) const;
  /// "ex000000", "ex000001", ... by position.
  std::string next_id() const;
  /// Assigns next_id() when example.id is empty; throws kValidation on a
  /// duplicate id.
  void append(Example example);
};

struct AugmentSpec {
  int n_samples = 10;
  double translation_range = 0.3;  // meters, uniform in [-r, r] per axis
  bool yaw_only = true;
  double max_angle_deg = 180.0;
  double scale_lo = 0.8;
  double scale_hi = 1.2;
  std::uint64_t seed = 0;
};

void validate_augment_spec(const AugmentSpec& spec);

/// x -> R * (s * (x - center)) + center + t
struct Similarity {
  Vec3 t = Vec3::Zero();
  Rotation rotation = Rotation::Identity();
  double scale = 1.0;
  Vec3 center = Vec3::Zero();

  Vec3 apply(const Vec3& x) const;
};

/// Image of an axis under a similarity. The direction keeps its sense so the
/// action still moves the same way; q is reprojected onto the foot of the
/// perpendicular.
ScrewAxis transform_axis(const ScrewAxis& axis, const Similarity& sim);

/// Similarity about the cloud centroid applied to the cloud, grasp points,
/// axis and left-hand trajectory. The result has provenance augmented, the
/// source as parent and an empty id.
Example apply_similarity(const Example& example, const Vec3& t, const Rotation& rotation, double scale);

/// Seeds followed by n_samples augmentations of each seed, drawn uniformly
/// within the AugmentSpec ranges. Seeds without an id get one.
Dataset augment_dataset(const std::vector<Example>& seeds, const AugmentSpec& spec);

struct Prediction {
  ScrewAction action;
  double match_score = 0.0;
  std::string example_id;
  double yaw = 0.0;  // radians
  double scale = 1.0;
};

/// Retrieval: both clouds normalized to zero centroid and unit RMS radius,
/// at most 512 points each by stride, symmetric Chamfer distance over 36 yaw
/// angles; the best (example, yaw) wins, later examples winning ties within
/// 1e-12. The yaw of the winner is then refined by golden-section search
/// within one grid step. Throws kNoModel for an empty dataset and
/// kInvalidArgument for a query under 32 points.
Prediction predict_action(const Dataset& dataset, const PointCloud& query);

/// Mean nearest-neighbour distance, averaged over both directions.
double chamfer_distance(const std::vector<Vec3>& a, const std::vector<Vec3>& b);

/// Appends the corrected example followed by spec.n_samples augmentations of it.
Dataset extend_with_corrected(const Dataset& dataset, const Example& corrected, const AugmentSpec& spec);

}  // namespace screwkit
