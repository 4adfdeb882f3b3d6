#pragma once

#include <string>
#include <vector>

#include "screwkit/screw_core.hpp"

namespace screwkit {

struct TimedPose {
  double t = 0.0;
  Pose pose;
};

/// Absolute 6-DoF trajectory of one hand; timestamps strictly increasing.
struct HandTrajectory {
  std::string frame_id = "world";
  std::vector<TimedPose> samples;

  std::size_t size() const { return samples.size(); }
  bool empty() const { return samples.empty(); }
};

/// Right-hand poses expressed in the left-hand frame. The first sample is the
/// initial relative pose T_0.
struct RelativeTrajectory {
  std::vector<TimedPose> samples;

  std::size_t size() const { return samples.size(); }
  const Pose& initial() const { return samples.front().pose; }
  std::vector<Pose> poses() const;

  /// Wraps a pose sequence with timestamps 0, 1, 2, ...
  static RelativeTrajectory from_poses(const std::vector<Pose>& poses);
};

/// Throws kValidation unless timestamps are finite and strictly increasing.
void validate_timestamps(const std::vector<TimedPose>& samples, const std::string& what);

}  // namespace screwkit
