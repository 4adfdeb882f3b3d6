#include <doctest.h>

#include <Eigen/Geometry>

#include "helpers.hpp"
#include "screwkit/augment_predict.hpp"
#include "screwkit/error.hpp"
#include "screwkit/scenarios.hpp"

using namespace screwkit;
using namespace testutil;

namespace {

Example demo_example() {
  Example e;
  e.cloud = object_cloud(Vec3(0.4, 0.1, 0.0));
  e.action.g_l = Vec3(0.4, 0.1, 0.02);
  e.action.g_r = Vec3(0.4, 0.1, 0.2);
  e.action.axis = ScrewAxis::revolute(Vec3::UnitZ(), Vec3(0.4, 0.1, 0.0));
  return e;
}

// Flat box, nothing like the bottle.
PointCloud box_cloud() {
  PointCloud c;
  for (int i = 0; i < 10; ++i) {
    for (int j = 0; j < 10; ++j) {
      const double x = -0.15 + 0.3 * i / 9.0;
      const double y = -0.05 + 0.1 * j / 9.0;
      c.points.emplace_back(x, y, 0.0);
      c.points.emplace_back(x, y, 0.02);
    }
  }
  return c;
}

Eigen::Matrix3Xd as_matrix(const std::vector<Vec3>& pts) {
  Eigen::Matrix3Xd m(3, pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) m.col(static_cast<Eigen::Index>(i)) = pts[i];
  return m;
}

Vec3 apply_h(const Eigen::Matrix4d& h, const Vec3& x) { return h.block<3, 3>(0, 0) * x + h.block<3, 1>(0, 3); }

// Axis image computed by mapping two points of the line.
ScrewAxis map_axis(const ScrewAxis& a, const Eigen::Matrix4d& h) {
  const Vec3 p0 = apply_h(h, a.q);
  const Vec3 p1 = apply_h(h, a.q + a.s_hat);
  ScrewAxis out = a;
  out.s_hat = (p1 - p0).normalized();
  out.q = p0;
  return out;
}

}  // namespace

TEST_SUITE("augment_predict") {

TEST_CASE("Dataset ids and duplicates") {
  Dataset d;
  CHECK(d.next_id() == "ex000000");
  d.append(demo_example());
  CHECK(d.examples[0].id == "ex000000");
  CHECK(d.next_id() == "ex000001");
  Example dup = demo_example();
  dup.id = "ex000000";
  CHECK_THROWS_AS(d.append(dup), Error);
  CHECK(d.find("ex000000") != nullptr);
  CHECK(d.find("nope") == nullptr);
  CHECK(provenance_from_string(to_string(Provenance::kCorrected)) == Provenance::kCorrected);
}

TEST_CASE("apply_similarity examples") {
  const Example e = demo_example();
  Example same = apply_similarity(e, Vec3::Zero(), Rotation::Identity(), 1.0);
  for (std::size_t i = 0; i < e.cloud.size(); ++i) CHECK((same.cloud.points[i] - e.cloud.points[i]).norm() < 1e-15);
  CHECK(same.provenance == Provenance::kAugmented);
  CHECK(same.id.empty());

  const Vec3 t(0.1, 0.2, 0.3);
  Example moved = apply_similarity(e, t, Rotation::Identity(), 1.0);
  CHECK((moved.action.g_r - e.action.g_r - t).norm() < 1e-15);
  const AxisError err = axis_error(moved.action.axis, ScrewAxis::revolute(Vec3::UnitZ(), e.action.axis.q + t));
  CHECK(err.distance < 1e-12);

  const Vec3 c = e.cloud.centroid();
  Example scaled = apply_similarity(e, Vec3::Zero(), Rotation::Identity(), 2.0);
  CHECK((scaled.action.g_l - (c + 2.0 * (e.action.g_l - c))).norm() < 1e-12);
  CHECK((scaled.cloud.points[7] - (c + 2.0 * (e.cloud.points[7] - c))).norm() < 1e-12);
}

TEST_CASE("validate_augment_spec") {
  AugmentSpec s;
  CHECK_NOTHROW(validate_augment_spec(s));
  s.scale_lo = 0.0;
  CHECK_THROWS_AS(validate_augment_spec(s), Error);
  s = AugmentSpec{};
  s.scale_lo = 1.3;
  CHECK_THROWS_AS(validate_augment_spec(s), Error);
  s = AugmentSpec{};
  s.n_samples = -1;
  CHECK_THROWS_AS(validate_augment_spec(s), Error);
}

TEST_CASE("augment_dataset is deterministic") {
  AugmentSpec s;
  s.seed = 9;
  const Dataset a = augment_dataset({demo_example()}, s);
  const Dataset b = augment_dataset({demo_example()}, s);
  REQUIRE(a.size() == 11);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a.examples[i].id == b.examples[i].id);
    CHECK(a.examples[i].cloud.points == b.examples[i].cloud.points);
  }
  CHECK(a.examples[0].provenance == Provenance::kDemonstration);
  CHECK(a.examples[1].parent_id == a.examples[0].id);
}

TEST_CASE("property: every augmentation is a similarity of its seed") {
  AugmentSpec s;
  s.n_samples = 500;
  s.seed = 61;
  const Example seed = demo_example();
  const Dataset d = augment_dataset({seed}, s);
  REQUIRE(d.size() == 501);
  const Eigen::Matrix3Xd src = as_matrix(seed.cloud.points);
  for (std::size_t i = 1; i < d.size(); ++i) {
    const Example& aug = d.examples[i];
    const Eigen::Matrix3Xd dst = as_matrix(aug.cloud.points);
    const Eigen::Matrix4d h = Eigen::umeyama(src, dst, true);
    const double s_fit = h.block<3, 1>(0, 0).norm();
    const Rotation r = h.block<3, 3>(0, 0) / s_fit;
    for (Eigen::Index j = 0; j < src.cols(); ++j) CHECK((apply_h(h, src.col(j)) - dst.col(j)).norm() < 1e-9);
    CHECK(s_fit >= s.scale_lo - 1e-12);
    CHECK(s_fit <= s.scale_hi + 1e-12);
    CHECK(std::abs(r(2, 2) - 1.0) < 1e-9);
    const Vec3 shift = aug.cloud.centroid() - seed.cloud.centroid();
    CHECK(shift.cwiseAbs().maxCoeff() <= s.translation_range + 1e-9);
    CHECK((apply_h(h, seed.action.g_l) - aug.action.g_l).norm() < 1e-9);
    CHECK((apply_h(h, seed.action.g_r) - aug.action.g_r).norm() < 1e-9);
    const AxisError e = axis_error(aug.action.axis, map_axis(seed.action.axis, h));
    CHECK(e.distance < 1e-9);
    CHECK(e.angle_deg < 1e-7);
    CHECK(aug.action.axis.s_hat.dot(r * seed.action.axis.s_hat) > 0.0);
  }
}

TEST_CASE("predict returns the stored action for the stored cloud") {
  Dataset d;
  d.append(demo_example());
  d.append(Example{"", box_cloud(), demo_example().action, Provenance::kDemonstration, std::nullopt});
  const Prediction p = predict_action(d, demo_example().cloud);
  CHECK(p.example_id == "ex000000");
  CHECK(p.match_score < 1e-9);
  CHECK(std::abs(p.yaw) < 1e-6);
  const AxisError e = axis_error(p.action.axis, demo_example().action.axis);
  CHECK(e.distance < 1e-9);
  CHECK(e.angle_deg < 1e-6);
}

TEST_CASE("predict follows translation, scale and yaw of the query") {
  Dataset d;
  d.append(demo_example());
  const Example e = demo_example();
  const Vec3 c = e.cloud.centroid();
  struct Case {
    Vec3 t;
    double yaw;
    double scale;
  };
  for (const Case& k : {Case{Vec3(0.1, -0.2, 0.05), 0.0, 1.0}, Case{Vec3::Zero(), 0.0, 1.5},
                        Case{Vec3(0.05, 0, 0), 50.0 * kPi / 180.0, 1.0}}) {
    const Rotation r = rotation_about(Vec3::UnitZ(), k.yaw);
    PointCloud query;
    for (const Vec3& x : e.cloud.points) query.points.push_back(r * (k.scale * (x - c)) + c + k.t);
    const Prediction p = predict_action(d, query);
    CHECK(p.match_score < 1e-6);
    CHECK(p.scale == doctest::Approx(k.scale).epsilon(1e-9));
    const Vec3 g_r = r * (k.scale * (e.action.g_r - c)) + c + k.t;
    CHECK((p.action.g_r - g_r).norm() < 1e-5);
    const AxisError err =
        axis_error(p.action.axis, ScrewAxis::revolute(Vec3::UnitZ(), r * (k.scale * (e.action.axis.q - c)) + c + k.t));
    CHECK(err.distance < 1e-5);
    CHECK(err.angle_deg < 1e-4);
  }
}

TEST_CASE("predict errors") {
  CHECK_THROWS_AS(predict_action(Dataset{}, demo_example().cloud), Error);
  Dataset d;
  d.append(demo_example());
  const PointCloud full = demo_example().cloud;
  PointCloud small;
  small.points.assign(full.points.begin(), full.points.begin() + 31);
  try {
    predict_action(d, small);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kInvalidArgument);
  }
}

TEST_CASE("chamfer_distance") {
  const std::vector<Vec3> a{Vec3::Zero()};
  const std::vector<Vec3> b{Vec3(1, 0, 0), Vec3(3, 0, 0)};
  // a->b: 1, b->a: (1 + 3) / 2 = 2, average 1.5.
  CHECK(chamfer_distance(a, b) == doctest::Approx(1.5));
  CHECK(chamfer_distance(b, a) == doctest::Approx(1.5));
  CHECK(chamfer_distance(b, b) == 0.0);
}

TEST_CASE("extend_with_corrected grows the dataset and the correction wins") {
  Dataset d;
  d.append(demo_example());
  d.append(Example{"", box_cloud(), demo_example().action, Provenance::kDemonstration, std::nullopt});
  Example corrected = demo_example();
  corrected.provenance = Provenance::kCorrected;
  corrected.parent_id = "ex000000";
  corrected.action.axis = ScrewAxis::revolute(Vec3::UnitZ(), Vec3(0.45, 0.1, 0.0));
  AugmentSpec s;
  s.n_samples = 4;
  const Dataset out = extend_with_corrected(d, corrected, s);
  REQUIRE(out.size() == d.size() + 1 + 4);
  CHECK(out.examples[2].provenance == Provenance::kCorrected);
  for (std::size_t i = 3; i < out.size(); ++i) CHECK(out.examples[i].parent_id == out.examples[2].id);

  const Prediction p = predict_action(out, corrected.cloud);
  CHECK(axis_error(p.action.axis, corrected.action.axis).distance < 1e-6);

  const Prediction other = predict_action(out, box_cloud());
  CHECK(other.example_id == "ex000001");

  Example plain = demo_example();
  CHECK_THROWS_AS(extend_with_corrected(d, plain, s), Error);
}

}  // TEST_SUITE
