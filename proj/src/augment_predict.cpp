#include "screwkit/augment_predict.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <random>

#include "screwkit/error.hpp"
#include "screwkit/random.hpp"
#include "screwkit/scalar_search.hpp"

namespace screwkit {

namespace {

constexpr std::size_t kMaxChamferPoints = 512;
constexpr int kYawGrid = 36;
constexpr double kTieTolerance = 1e-12;

struct Normalized {
  Vec3 centroid = Vec3::Zero();
  double rms = 1.0;
  std::vector<Vec3> points;  // centred, unit RMS, stride-subsampled
};

Normalized normalize(const PointCloud& cloud) {
  Normalized out;
  out.centroid = cloud.centroid();
  double ss = 0.0;
  for (const auto& p : cloud.points) ss += (p - out.centroid).squaredNorm();
  out.rms = std::sqrt(ss / static_cast<double>(cloud.size()));
  if (!(out.rms > 1e-12)) throw Error(ErrorKind::kInvalidArgument, "point cloud has zero extent");
  const std::size_t stride = (cloud.size() + kMaxChamferPoints - 1) / kMaxChamferPoints;
  for (std::size_t i = 0; i < cloud.size(); i += stride) {
    out.points.push_back((cloud.points[i] - out.centroid) / out.rms);
  }
  return out;
}

double directed(const std::vector<Vec3>& a, const std::vector<Vec3>& b) {
  double total = 0.0;
  for (const auto& p : a) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& r : b) best = std::min(best, (p - r).squaredNorm());
    total += std::sqrt(best);
  }
  return total / static_cast<double>(a.size());
}

Rotation yaw_rotation(double yaw) { return rotation_about(Vec3::UnitZ(), yaw); }

double yaw_chamfer(const std::vector<Vec3>& stored, const std::vector<Vec3>& query, double yaw) {
  const Rotation r = yaw_rotation(yaw);
  std::vector<Vec3> rotated;
  rotated.reserve(stored.size());
  for (const auto& p : stored) rotated.push_back(r * p);
  return chamfer_distance(rotated, query);
}

void check_cloud(const PointCloud& cloud, const char* what) {
  for (const auto& p : cloud.points) {
    if (!p.allFinite()) throw Error(ErrorKind::kInvalidArgument, std::string(what) + ": non-finite point");
  }
}

}  // namespace

Vec3 PointCloud::centroid() const {
  if (points.empty()) throw Error(ErrorKind::kInvalidArgument, "centroid of an empty point cloud");
  Vec3 c = Vec3::Zero();
  for (const auto& p : points) c += p;
  return c / static_cast<double>(points.size());
}

std::string_view to_string(Provenance p) {
  switch (p) {
    case Provenance::kDemonstration: return "demonstration";
    case Provenance::kAugmented: return "augmented";
    case Provenance::kCorrected: return "corrected";
  }
  return "demonstration";
}

Provenance provenance_from_string(std::string_view name) {
  if (name == "demonstration") return Provenance::kDemonstration;
  if (name == "augmented") return Provenance::kAugmented;
  if (name == "corrected") return Provenance::kCorrected;
  throw Error(ErrorKind::kValidation, "unknown provenance '" + std::string(name) + "'");
}

const Example* Dataset::find(const std::string& id) const {
  for (const auto& e : examples) {
    if (e.id == id) return &e;
  }
  return nullptr;
}

std::string Dataset::next_id() const {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "ex%06zu", examples.size());
  return buf;
}

void Dataset::append(Example example) {
  if (example.id.empty()) example.id = next_id();
  if (find(example.id) != nullptr) {
    throw Error(ErrorKind::kValidation, "dataset already contains id '" + example.id + "'");
  }
  examples.push_back(std::move(example));
}

void validate_augment_spec(const AugmentSpec& spec) {
  if (spec.n_samples < 1) throw Error(ErrorKind::kValidation, "augment spec: n_samples must be >= 1");
  if (!(spec.scale_lo > 0.0) || spec.scale_hi < spec.scale_lo) {
    throw Error(ErrorKind::kValidation, "augment spec: need 0 < scale_lo <= scale_hi");
  }
  if (spec.translation_range < 0.0 || spec.max_angle_deg < 0.0) {
    throw Error(ErrorKind::kValidation, "augment spec: ranges must be non-negative");
  }
}

Vec3 Similarity::apply(const Vec3& x) const { return rotation * (scale * (x - center)) + center + t; }

ScrewAxis transform_axis(const ScrewAxis& axis, const Similarity& sim) {
  ScrewAxis out = axis;
  out.s_hat = sim.rotation * axis.s_hat;
  out.q = sim.apply(axis.q);
  return reproject_axis(out);
}

Example apply_similarity(const Example& example, const Vec3& t, const Rotation& rotation, double scale) {
  if (!(scale > 0.0)) throw Error(ErrorKind::kInvalidArgument, "similarity scale must be positive");
  const Similarity sim{t, rotation, scale, example.cloud.centroid()};
  Example out;
  out.cloud.points.reserve(example.cloud.size());
  for (const auto& p : example.cloud.points) out.cloud.points.push_back(sim.apply(p));
  out.action.g_l = sim.apply(example.action.g_l);
  out.action.g_r = sim.apply(example.action.g_r);
  out.action.axis = transform_axis(example.action.axis, sim);
  if (example.action.tau_l) {
    HandTrajectory tau = *example.action.tau_l;
    for (auto& s : tau.samples) {
      s.pose.translation = sim.apply(s.pose.translation);
      s.pose.rotation = rotation * s.pose.rotation;
    }
    out.action.tau_l = std::move(tau);
  }
  out.provenance = Provenance::kAugmented;
  if (!example.id.empty()) out.parent_id = example.id;
  return out;
}

namespace {

void append_augmentations(Dataset& dataset, const Example& parent, const AugmentSpec& spec, Rng& rng) {
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_real_distribution<double> scale(spec.scale_lo, spec.scale_hi);
  const double max_angle = spec.max_angle_deg * kPi / 180.0;
  for (int i = 0; i < spec.n_samples; ++i) {
    const double tx = unit(rng);
    const double ty = unit(rng);
    const double tz = unit(rng);
    const Vec3 t = spec.translation_range * Vec3(tx, ty, tz);
    const Vec3 axis = spec.yaw_only ? Vec3(Vec3::UnitZ()) : random_unit_vector(rng);
    const double angle = max_angle * unit(rng);
    const double s = scale(rng);
    dataset.append(apply_similarity(parent, t, rotation_about(axis, angle), s));
  }
}

}  // namespace

Dataset augment_dataset(const std::vector<Example>& seeds, const AugmentSpec& spec) {
  if (seeds.empty()) throw Error(ErrorKind::kInvalidArgument, "augment_dataset needs at least one seed");
  validate_augment_spec(spec);
  Dataset out;
  for (const auto& seed : seeds) out.append(seed);
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    Rng rng = make_rng(spec.seed, i);
    const Example parent = out.examples[i];
    append_augmentations(out, parent, spec, rng);
  }
  return out;
}

double chamfer_distance(const std::vector<Vec3>& a, const std::vector<Vec3>& b) {
  if (a.empty() || b.empty()) throw Error(ErrorKind::kInvalidArgument, "chamfer distance of an empty set");
  return 0.5 * (directed(a, b) + directed(b, a));
}

Prediction predict_action(const Dataset& dataset, const PointCloud& query) {
  if (dataset.empty()) throw Error(ErrorKind::kNoModel, "predict_action: dataset is empty");
  if (query.size() < 32) {
    throw Error(ErrorKind::kInvalidArgument, "predict_action: query needs at least 32 points");
  }
  check_cloud(query, "query");
  const Normalized q = normalize(query);
  const double step = 2.0 * kPi / kYawGrid;

  std::size_t best_example = 0;
  double best_yaw = 0.0;
  double best_score = std::numeric_limits<double>::infinity();
  for (std::size_t e = 0; e < dataset.size(); ++e) {
    const Normalized n = normalize(dataset.examples[e].cloud);
    for (int j = 0; j < kYawGrid; ++j) {
      const double yaw = step * j;
      const double score = yaw_chamfer(n.points, q.points, yaw);
      const bool lower = score < best_score - kTieTolerance;
      const bool newer_tie = std::abs(score - best_score) <= kTieTolerance && e > best_example;
      if (lower || newer_tie) {
        best_score = score;
        best_example = e;
        best_yaw = yaw;
      }
    }
  }
  const Normalized best_norm = normalize(dataset.examples[best_example].cloud);

  const ScalarMinimum refined = minimize_scalar(
      [&](double yaw) { return yaw_chamfer(best_norm.points, q.points, yaw); }, best_yaw - step,
      best_yaw + step, 9, 1e-10);
  if (refined.value < best_score) {
    best_score = refined.value;
    best_yaw = refined.x;
  }

  const Example& match = dataset.examples[best_example];
  const double scale = q.rms / best_norm.rms;
  const Example moved =
      apply_similarity(match, q.centroid - best_norm.centroid, yaw_rotation(best_yaw), scale);
  Prediction out;
  out.action = moved.action;
  out.match_score = best_score;
  out.example_id = match.id;
  out.yaw = std::remainder(best_yaw, 2.0 * kPi);
  out.scale = scale;
  return out;
}

Dataset extend_with_corrected(const Dataset& dataset, const Example& corrected, const AugmentSpec& spec) {
  if (corrected.provenance != Provenance::kCorrected) {
    throw Error(ErrorKind::kInvalidArgument, "extend_with_corrected: example provenance must be corrected");
  }
  validate_augment_spec(spec);
  Dataset out = dataset;
  out.append(corrected);
  Rng rng = make_rng(spec.seed, out.size() - 1);
  const Example parent = out.examples.back();
  append_augmentations(out, parent, spec, rng);
  return out;
}

}  // namespace screwkit
