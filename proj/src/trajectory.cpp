#include "screwkit/trajectory.hpp"

#include <cmath>

#include "screwkit/error.hpp"

namespace screwkit {

std::vector<Pose> RelativeTrajectory::poses() const {
  std::vector<Pose> out;
  out.reserve(samples.size());
  for (const auto& s : samples) out.push_back(s.pose);
  return out;
}

RelativeTrajectory RelativeTrajectory::from_poses(const std::vector<Pose>& poses) {
  RelativeTrajectory traj;
  traj.samples.reserve(poses.size());
  for (std::size_t i = 0; i < poses.size(); ++i) {
    traj.samples.push_back({static_cast<double>(i), poses[i]});
  }
  return traj;
}

void validate_timestamps(const std::vector<TimedPose>& samples, const std::string& what) {
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (!std::isfinite(samples[i].t)) {
      throw Error(ErrorKind::kValidation, what + ": non-finite timestamp at sample " + std::to_string(i));
    }
    if (i > 0 && !(samples[i].t > samples[i - 1].t)) {
      throw Error(ErrorKind::kValidation,
                  what + ": timestamps not strictly increasing at sample " + std::to_string(i));
    }
  }
}

}  // namespace screwkit
