#include <doctest.h>

#include "helpers.hpp"
#include "screwkit/bimanual_sim.hpp"
#include "screwkit/error.hpp"
#include "screwkit/scenarios.hpp"

using namespace screwkit;
using namespace testutil;

namespace {

Mechanism revolute_mech() {
  Mechanism m;
  m.true_axis = canonicalize_axis(ScrewAxis::revolute(Vec3::UnitZ(), Vec3::Zero()));
  m.t_initial.translation = Vec3(0.1, 0, 0);
  m.theta_lo = 0.0;
  m.theta_hi = kPi;
  return m;
}

Mechanism prismatic_mech() {
  Mechanism m;
  m.true_axis = ScrewAxis::prismatic(Vec3::UnitX(), Vec3::Zero());
  m.theta_lo = 0.0;
  m.theta_hi = 0.4;
  return m;
}

WaypointPlan plan_for(const Mechanism& m, double theta, int k) {
  WaypointPlan p;
  p.theta_total = theta;
  p.k_steps = k;
  p.t_initial = m.t_initial;
  return p;
}

void check_episode_invariants(const EpisodeResult& r) {
  CHECK((r.failure == Failure::kNone) == (r.completed_waypoints == r.total_waypoints));
  double sum = 0.0;
  for (double w : r.wrench_trace) {
    CHECK(w >= 0.0);
    sum += w;
  }
  if (!r.wrench_trace.empty()) CHECK(std::abs(r.mean_wrench - sum / r.wrench_trace.size()) < 1e-12);
}

}  // namespace

TEST_SUITE("bimanual_sim") {

TEST_CASE("validate_mechanism enforces the threshold ordering") {
  Mechanism m = revolute_mech();
  CHECK_NOTHROW(validate_mechanism(m));
  m.friction = m.f_min;
  CHECK_THROWS_AS(validate_mechanism(m), Error);
  m = revolute_mech();
  m.friction = m.f_max + 1.0;
  CHECK_THROWS_AS(validate_mechanism(m), Error);
  m = revolute_mech();
  m.d_grasp = 0.0;
  CHECK_THROWS_AS(validate_mechanism(m), Error);
  m = revolute_mech();
  m.theta_hi = m.theta_lo;
  CHECK_THROWS_AS(validate_mechanism(m), Error);
}

TEST_CASE("project_to_mechanism on the manifold") {
  const Mechanism m = revolute_mech();
  for (double theta : {0.0, 0.3, 1.7, 3.0}) {
    const Projection p = project_to_mechanism(m, oracle_displace(m.true_axis, theta, m.t_initial));
    CHECK(std::abs(p.theta - theta) < 1e-5);
    CHECK(p.e_pos < 1e-6);
    CHECK(p.e_rot < 1e-6);
  }
}

TEST_CASE("project_to_mechanism perpendicular offset from a prismatic axis") {
  const Mechanism m = prismatic_mech();
  Pose p;
  p.translation = Vec3(0.2, 0.01, 0);
  const Projection r = project_to_mechanism(m, p);
  CHECK(r.e_pos == doctest::Approx(0.01).epsilon(1e-5));
  CHECK(r.theta == doctest::Approx(0.2).epsilon(1e-5));
}

TEST_CASE("project_to_mechanism matches a 10^5-point grid") {
  Rng rng = make_rng(41);
  for (int i = 0; i < 50; ++i) {
    Mechanism m = i % 2 ? revolute_mech() : prismatic_mech();
    if (i % 4 == 1) m.true_axis.joint_type = JointType::kRevolute3d;
    const double theta0 = uniform(rng, m.theta_lo, m.theta_hi);
    Pose rel = oracle_displace(m.true_axis, theta0, m.t_initial);
    rel.translation += gaussian_vec3(rng, 0.005);
    rel.rotation = rel.rotation * exp_so3(gaussian_vec3(rng, 0.02));
    const Projection fast = project_to_mechanism(m, rel);
    const int n = 100000;
    double best = 1e300;
    double best_theta = 0.0;
    for (int j = 0; j <= n; ++j) {
      const double theta = m.theta_lo + (m.theta_hi - m.theta_lo) * j / n;
      const double d = pose_distance(rel, oracle_displace(m.true_axis, theta, m.t_initial), m.lambda);
      if (d < best) {
        best = d;
        best_theta = theta;
      }
    }
    CHECK(std::abs(fast.theta - best_theta) < 1e-4);
    CHECK(fast.e_pos + m.lambda * fast.e_rot <= best + 1e-9);
  }
}

TEST_CASE("perfect execution") {
  const Mechanism m = revolute_mech();
  const EpisodeResult r = run_episode(m, generate_relative_waypoints(m.true_axis, plan_for(m, kPi, 20)));
  CHECK(r.failure == Failure::kNone);
  CHECK(r.completed_waypoints == 20);
  REQUIRE(r.wrench_trace.size() == 20);
  for (double w : r.wrench_trace) CHECK(std::abs(w - m.friction) < 1e-9);
  CHECK(r.theta_final == doctest::Approx(kPi).epsilon(1e-6));
  CHECK(is_success(m, r));
  check_episode_invariants(r);
}

TEST_CASE("run_episode needs a waypoint after the start") {
  const Mechanism m = revolute_mech();
  CHECK_THROWS_AS(run_episode(m, {m.t_initial}), Error);
}

TEST_CASE("tilted prismatic execution loses the grasp at the closed-form step") {
  Mechanism m = prismatic_mech();
  m.f_max = 1000.0;
  const double tilt = 30.0 * kPi / 180.0;
  const ScrewAxis executed = ScrewAxis::prismatic(Vec3(std::cos(tilt), std::sin(tilt), 0), Vec3::Zero());
  const EpisodeResult r = run_episode(m, generate_relative_waypoints(executed, plan_for(m, 0.4, 20)));
  // Step k sits 0.02 k sin(30 deg) = 0.01 k off the line.
  for (std::size_t i = 0; i < r.wrench_trace.size(); ++i) {
    const double k = static_cast<double>(i + 1);
    CHECK(r.wrench_trace[i] == doctest::Approx(m.k_pos * 0.01 * k + m.friction).epsilon(1e-6));
  }
  CHECK(r.failure == Failure::kGraspLost);
  CHECK(r.completed_waypoints == 5);
  CHECK(r.ungated_completed == 20);
  CHECK(r.ungated_failure == Failure::kNone);
  CHECK_FALSE(is_success(m, r));
  check_episode_invariants(r);
}

TEST_CASE("axis offset by 0.2 m loses the grasp") {
  Mechanism m = revolute_mech();
  m.f_max = 1000.0;
  const ScrewAxis executed = canonicalize_axis(ScrewAxis::revolute(Vec3::UnitZ(), Vec3(0.0, 0.2, 0)));
  const EpisodeResult r = run_episode(m, generate_relative_waypoints(executed, plan_for(m, kPi, 20)));
  CHECK(r.failure == Failure::kGraspLost);
  CHECK(r.completed_waypoints < 20);
}

TEST_CASE("stalled waypoints trigger low force") {
  Mechanism m = revolute_mech();
  m.theta_hi = kPi / 2;
  std::vector<Pose> w;
  for (int k = 0; k <= 20; ++k) {
    w.push_back(oracle_displace(m.true_axis, std::min(kPi * k / 20.0, kPi / 2), m.t_initial));
  }
  const EpisodeResult r = run_episode(m, w);
  CHECK(r.failure == Failure::kLowForce);
  CHECK(r.completed_waypoints == 10);
  CHECK(r.wrench_trace.back() < m.f_min);
  check_episode_invariants(r);
}

TEST_CASE("is_success examples") {
  const Mechanism m = revolute_mech();
  EpisodeResult r;
  r.total_waypoints = r.completed_waypoints = 10;
  r.theta_final = kPi;
  CHECK(is_success(m, r));
  r.failure = Failure::kGraspLost;
  CHECK_FALSE(is_success(m, r));
  r.failure = Failure::kNone;
  r.theta_final = 0.5 * kPi;
  CHECK_FALSE(is_success(m, r));
}

TEST_CASE("failure names roundtrip") {
  for (Failure f : {Failure::kNone, Failure::kLowForce, Failure::kHighForce, Failure::kGraspLost}) {
    CHECK(failure_from_string(to_string(f)) == f);
  }
  CHECK(to_string(Failure::kGraspLost) == "grasp_lost");
  CHECK_THROWS_AS(failure_from_string("slipped"), Error);
}

TEST_CASE("property: zero-error episodes on random mechanisms") {
  Rng rng = make_rng(42);
  for (int i = 0; i < 30; ++i) {
    Mechanism m;
    const JointType type = static_cast<JointType>(i % 3);
    m.t_initial = random_pose(rng, 0.3);
    if (type == JointType::kPrismatic) {
      m.true_axis = canonicalize_axis(ScrewAxis::prismatic(random_unit_vector(rng), m.t_initial.translation));
      m.theta_hi = 0.3;
    } else {
      const Vec3 s = random_unit_vector(rng);
      Vec3 perp = random_unit_vector(rng);
      perp = (perp - perp.dot(s) * s).normalized();
      const Vec3 q = m.t_initial.translation - uniform(rng, 0.05, 0.2) * perp;
      m.true_axis = type == JointType::kRevolute ? ScrewAxis::revolute(s, q) : ScrewAxis::revolute3d(s, q);
      m.theta_hi = uniform(rng, 1.0, 3.0);
    }
    const EpisodeResult r = run_episode(m, generate_relative_waypoints(m.true_axis, plan_for(m, m.theta_hi, 15)));
    CHECK(r.failure == Failure::kNone);
    for (double w : r.wrench_trace) CHECK(std::abs(w - m.friction) < 1e-9);
    CHECK(is_success(m, r));
  }
}

TEST_CASE("property: completion degrades with axis offset") {
  const ScenarioConfig sc = scenario_preset("bottle");
  std::vector<double> means, stds;
  for (double d : {0.0, 0.01, 0.02, 0.04, 0.08}) {
    std::vector<double> done;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
      Rng rng = make_rng(seed, 43);
      const ScrewAxis executed = offset_axis(sc.mechanism.true_axis, d, 0.0, rng);
      done.push_back(run_episode(sc.mechanism, generate_relative_waypoints(executed, sc.plan)).completed_waypoints);
    }
    means.push_back(mean(done));
    stds.push_back(sample_std(done));
  }
  int inversions = 0;
  for (std::size_t i = 0; i + 1 < means.size(); ++i) {
    if (means[i + 1] > means[i]) {
      ++inversions;
      CHECK(means[i + 1] - means[i] <= stds[i]);
    }
  }
  CHECK(inversions <= 1);
  CHECK(means.front() == sc.plan.k_steps);
  CHECK(means.back() < means.front());
}

TEST_CASE("property: episodes are deterministic and ungated runs last at least as long") {
  const ScenarioConfig sc = scenario_preset("zipper");
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng rng = make_rng(seed, 44);
    const ScrewAxis executed = offset_axis(sc.mechanism.true_axis, 0.03, 10.0, rng);
    const auto w = generate_relative_waypoints(executed, sc.plan);
    const EpisodeResult a = run_episode(sc.mechanism, w);
    const EpisodeResult b = run_episode(sc.mechanism, w);
    CHECK(a.wrench_trace == b.wrench_trace);
    CHECK(a.completed_waypoints == b.completed_waypoints);
    CHECK(a.failure == b.failure);
    CHECK(a.theta_final == b.theta_final);
    CHECK(a.ungated_completed >= a.completed_waypoints);
    check_episode_invariants(a);
  }
}

}  // TEST_SUITE
