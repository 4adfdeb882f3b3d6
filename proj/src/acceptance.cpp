#include "screwkit/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>

#include "screwkit/augment_predict.hpp"
#include "screwkit/axis_fit.hpp"
#include "screwkit/cem_opt.hpp"
#include "screwkit/error.hpp"
#include "screwkit/random.hpp"
#include "screwkit/report.hpp"
#include "screwkit/scenarios.hpp"

namespace screwkit {

namespace {

double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

Vec3 uniform_box(Rng& rng, double half) {
  const double x = uniform(rng, -half, half);
  const double y = uniform(rng, -half, half);
  const double z = uniform(rng, -half, half);
  return Vec3(x, y, z);
}

std::string fmt(double v) { return format_number(v); }

// One inversion allowed per metric, no larger than the std of the lower level.
bool monotone_within_std(const std::vector<double>& mean, const std::vector<double>& sd) {
  int inversions = 0;
  for (std::size_t i = 0; i + 1 < mean.size(); ++i) {
    if (mean[i + 1] < mean[i]) {
      ++inversions;
      if (mean[i] - mean[i + 1] > std::max(sd[i], sd[i + 1])) return false;
    }
  }
  return inversions <= 1;
}

struct GeneratedCase {
  ScrewAxis axis;
  WaypointPlan plan;
};

GeneratedCase random_case(JointType type, Rng& rng) {
  GeneratedCase c;
  const Vec3 s = random_unit_vector(rng);
  const Vec3 q = uniform_box(rng, 0.3);
  switch (type) {
    case JointType::kPrismatic: c.axis = ScrewAxis::prismatic(s, q); break;
    case JointType::kRevolute: c.axis = ScrewAxis::revolute(s, q); break;
    case JointType::kRevolute3d: c.axis = ScrewAxis::revolute3d(s, q); break;
  }
  c.axis = canonicalize_axis(c.axis);
  c.plan.t_initial.rotation = random_rotation(rng);
  if (type == JointType::kPrismatic) {
    // Prismatic ground truth runs through the hand start.
    c.plan.t_initial.translation = uniform_box(rng, 0.3);
    c.axis = canonicalize_axis(ScrewAxis::prismatic(c.axis.s_hat, c.plan.t_initial.translation));
    c.plan.theta_total = uniform(rng, 0.05, 0.5);
  } else {
    Vec3 perp = random_unit_vector(rng);
    perp = (perp - perp.dot(c.axis.s_hat) * c.axis.s_hat).normalized();
    const double radius = uniform(rng, 0.05, 0.3);
    const double height = uniform(rng, -0.1, 0.1);
    c.plan.t_initial.translation = c.axis.q + radius * perp + height * c.axis.s_hat;
    c.plan.theta_total = type == JointType::kRevolute ? uniform(rng, 0.5, 2.5) : uniform(rng, 0.5, 5.5);
  }
  c.plan.k_steps = std::uniform_int_distribution<int>(10, 30)(rng);
  return c;
}

// Example used by the correction-loop and equivariance criteria.
Example demo_example(const ScrewAxis& axis, const ScenarioConfig& scenario) {
  Example demo;
  demo.cloud = object_cloud(Vec3::Zero());
  demo.action.axis = axis;
  demo.action.g_l = Vec3(0.0, 0.0, 0.02);
  demo.action.g_r = scenario.mechanism.t_initial.translation;
  return demo;
}

ScrewAxis level5_fitted_axis(std::uint64_t seed, int trial) {
  const NoiseStudyGroundTruth gt = default_noise_study_ground_truth();
  const RelativeTrajectory clean = RelativeTrajectory::from_poses(generate_relative_waypoints(gt.axis, gt.plan));
  NoiseSpec spec = standard_noise_levels(seed)[4];
  spec.seed += static_cast<std::uint64_t>(trial);
  return oriented_axis(fit_revolute(perturb_trajectory(clean, spec))).axis;
}

CriterionResult make(int id, const char* name) {
  CriterionResult r;
  r.id = id;
  r.name = name;
  return r;
}

}  // namespace

CriterionResult criterion_screw_math(std::uint64_t seed) {
  CriterionResult r = make(1, "screw-math exactness");
  Rng rng = make_rng(seed, 1);
  const int n = 1000;
  double exp_log = 0.0;
  double log_exp = 0.0;
  double screw_twist = 0.0;
  for (int i = 0; i < n; ++i) {
    Twist xi;
    xi.omega = random_unit_vector(rng) * uniform(rng, 0.0, kPi - 0.01);
    xi.vee = gaussian_vec3(rng, 0.5);
    const Twist back = log_pose(exp_coords(xi));
    exp_log = std::max(exp_log, (back.vector() - xi.vector()).norm());

    Pose t;
    t.rotation = rotation_about(random_unit_vector(rng), uniform(rng, 0.01, 3.0));
    t.translation = uniform_box(rng, 1.0);
    const Pose again = exp_coords(log_pose(t));
    log_exp = std::max(log_exp, (again.rotation - t.rotation).norm() + (again.translation - t.translation).norm());

    const ScrewAxis axis = canonicalize_axis(ScrewAxis::revolute(random_unit_vector(rng), uniform_box(rng, 0.5)));
    const double theta = uniform(rng, 0.0, kPi - 0.01);
    if (theta <= 0.0) continue;
    const ScrewAxis rec = twist_to_screw(screw_to_twist(axis, theta));
    screw_twist = std::max(screw_twist, std::max((rec.q - axis.q).norm(), (rec.s_hat - axis.s_hat).norm()));
  }
  const double tol = 1e-9;
  r.passed = exp_log < tol && log_exp < tol && screw_twist < tol;
  r.data = {{"cases", n}, {"max_log_exp_twist_residual", exp_log}, {"max_exp_log_pose_residual", log_exp},
            {"max_screw_twist_residual", screw_twist}, {"tolerance", tol}};
  r.detail = "max residuals twist " + fmt(exp_log) + ", pose " + fmt(log_exp) + ", screw " + fmt(screw_twist) +
             " (< 1e-9, " + std::to_string(n) + " cases each)";
  return r;
}

CriterionResult criterion_noiseless_recovery(std::uint64_t seed) {
  CriterionResult r = make(2, "noiseless estimator recovery");
  const int n = 100;
  const double dist_tol = 1e-6;
  const double angle_tol = 1e-5;
  r.passed = true;
  Json per_type = Json::object();
  std::string detail;
  for (JointType type : {JointType::kPrismatic, JointType::kRevolute, JointType::kRevolute3d}) {
    Rng rng = make_rng(seed, 2, static_cast<std::uint64_t>(type));
    double max_dist = 0.0;
    double max_angle = 0.0;
    int correct = 0;
    int fit_failures = 0;
    for (int i = 0; i < n; ++i) {
      const GeneratedCase c = random_case(type, rng);
      const RelativeTrajectory traj = RelativeTrajectory::from_poses(generate_relative_waypoints(c.axis, c.plan));
      try {
        const AxisError err = axis_error(fit_joint(type, traj).axis, c.axis);
        max_dist = std::max(max_dist, err.distance);
        max_angle = std::max(max_angle, err.angle_deg);
      } catch (const Error&) {
        ++fit_failures;
      }
      try {
        if (select_joint_type(traj).axis.joint_type == type) ++correct;
      } catch (const Error&) {
      }
    }
    const bool ok = fit_failures == 0 && max_dist < dist_tol && max_angle < angle_tol && correct == n;
    r.passed = r.passed && ok;
    const std::string name(to_string(type));
    per_type[name] = {{"max_distance_m", max_dist}, {"max_angle_deg", max_angle}, {"selection_correct", correct},
                      {"fit_failures", fit_failures}, {"cases", n}};
    detail += (detail.empty() ? "" : "; ") + name + " dist " + fmt(max_dist) + " m, angle " + fmt(max_angle) +
              " deg, select " + std::to_string(correct) + "/" + std::to_string(n);
  }
  r.data = {{"per_type", per_type}, {"distance_tolerance_m", dist_tol}, {"angle_tolerance_deg", angle_tol}};
  r.detail = detail;
  return r;
}

CriterionResult criterion_noise_study(std::uint64_t seed) {
  CriterionResult r = make(3, "noise-study reproduction");
  const NoiseStudyGroundTruth gt = default_noise_study_ground_truth();
  const auto rows = run_noise_study(gt.axis, gt.plan, standard_noise_levels(seed), 20);
  std::vector<double> md, sd, ma, sa;
  Json table = Json::array();
  for (const auto& row : rows) {
    md.push_back(row.mean_dist);
    sd.push_back(row.std_dist);
    ma.push_back(row.mean_angle_deg);
    sa.push_back(row.std_angle_deg);
    table.push_back({{"level", row.level}, {"sigma_pos_m", row.sigma_pos}, {"sigma_rot_deg", row.sigma_rot_deg},
                     {"mean_dist_m", row.mean_dist}, {"std_dist_m", row.std_dist},
                     {"mean_angle_deg", row.mean_angle_deg}, {"std_angle_deg", row.std_angle_deg},
                     {"failures", row.failures}});
  }
  const bool monotone = monotone_within_std(md, sd) && monotone_within_std(ma, sa);
  const double l1d = md.front() * 100.0;
  const double l5d = md.back() * 100.0;
  const double l1a = ma.front();
  const double l5a = ma.back();
  const bool bands = l1a >= 1.0 && l1a <= 8.0 && l5a >= 7.0 && l5a <= 20.0 && l1d >= 0.2 && l1d <= 1.2 &&
                     l5d >= 1.0 && l5d <= 4.0;
  r.passed = monotone && bands;
  r.data = {{"rows", table}, {"monotone", monotone}, {"bands_ok", bands}};
  r.detail = "L1 " + fmt(l1d) + " cm / " + fmt(l1a) + " deg, L5 " + fmt(l5d) + " cm / " + fmt(l5a) +
             " deg, monotone " + (monotone ? "yes" : "no") +
             " (bands L1 [0.2,1.2] cm [1,8] deg, L5 [1,4] cm [7,20] deg)";
  return r;
}

CriterionResult criterion_noisy_init_finetune(std::uint64_t seed) {
  CriterionResult r = make(4, "noisy-init fine-tuning");
  const ScenarioConfig sc = scenario_preset("bottle");
  const int seeds = 10;
  int successes = 0;
  Json runs = Json::array();
  for (int s = 0; s < seeds; ++s) {
    const ScrewAxis init = level5_fitted_axis(seed, s);
    CemConfig config = sc.cem;
    config.seed = seed + static_cast<std::uint64_t>(s);
    const OptRun run = optimize(sc.mechanism, init, sc.plan, config);
    successes += run.succeeded ? 1 : 0;
    const AxisError err = axis_error(init, sc.mechanism.true_axis);
    runs.push_back({{"seed", s}, {"init_distance_m", err.distance}, {"init_angle_deg", err.angle_deg},
                    {"succeeded", run.succeeded},
                    {"episodes_to_success", run.episodes_to_success ? Json(*run.episodes_to_success) : Json(nullptr)}});
  }
  r.passed = successes >= 7;
  r.data = {{"runs", runs}, {"successes", successes}, {"seeds", seeds}, {"required", 7}};
  r.detail = std::to_string(successes) + "/" + std::to_string(seeds) + " seeds succeed within 5x5 (need >= 7)";
  return r;
}

CriterionResult criterion_representation_ablation(std::uint64_t seed) {
  CriterionResult r = make(5, "representation ablation");
  const int seeds = 10;
  r.passed = true;
  Json per = Json::object();
  std::string detail;
  for (const char* name : {"bottle", "zipper"}) {
    const ScenarioConfig sc = scenario_preset(name);
    int screw = 0;
    int waypoint = 0;
    for (int s = 0; s < seeds; ++s) {
      const ScrewAxis init = scenario_init_axis(sc, seed + static_cast<std::uint64_t>(s));
      CemConfig config = sc.cem;
      config.seed = seed + static_cast<std::uint64_t>(s);
      screw += optimize(sc.mechanism, init, sc.plan, config).succeeded ? 1 : 0;
      const auto wps = generate_relative_waypoints(init, sc.plan);
      waypoint += optimize_waypoint_space(sc.mechanism, wps, config, WaypointNoise{}).succeeded ? 1 : 0;
    }
    const double diff = static_cast<double>(screw - waypoint) / seeds;
    r.passed = r.passed && diff >= 0.5;
    per[name] = {{"screw_successes", screw}, {"waypoint_successes", waypoint}, {"rate_difference", diff}};
    detail += std::string(detail.empty() ? "" : "; ") + name + " screw " + std::to_string(screw) + "/10 vs waypoints " +
              std::to_string(waypoint) + "/10";
  }
  r.data = {{"scenarios", per}, {"seeds", seeds}, {"required_difference", 0.5}};
  r.detail = detail + " (need difference >= 0.5)";
  return r;
}

std::vector<AblationCounts> run_reward_ablation(std::uint64_t seed, int seeds) {
  std::vector<AblationCounts> out;
  for (const auto& [name, flag] : {std::pair<const char*, const char*>{"wrench-ablation", "use_mean_wrench"},
                                   std::pair<const char*, const char*>{"grasp-ablation", "use_grasp_lost"}}) {
    const ScenarioConfig sc = scenario_preset(name);
    AblationCounts counts{name, flag, seeds, 0, 0};
    for (int s = 0; s < seeds; ++s) {
      const ScrewAxis init = scenario_init_axis(sc, seed + static_cast<std::uint64_t>(s));
      CemConfig config = sc.cem;
      config.seed = seed + static_cast<std::uint64_t>(s);
      counts.success_on += optimize(sc.mechanism, init, sc.plan, config).succeeded ? 1 : 0;
      if (std::string(flag) == "use_mean_wrench") {
        config.reward_flags.use_mean_wrench = false;
      } else {
        config.reward_flags.use_grasp_lost = false;
      }
      counts.success_off += optimize(sc.mechanism, init, sc.plan, config).succeeded ? 1 : 0;
    }
    out.push_back(counts);
  }
  return out;
}

CriterionResult criterion_reward_ablation(std::uint64_t seed) {
  CriterionResult r = make(6, "reward ablation");
  r.passed = true;
  Json per = Json::object();
  std::string detail;
  for (const auto& c : run_reward_ablation(seed, 10)) {
    r.passed = r.passed && c.success_off < c.success_on;
    per[c.scenario] = {{"flag", c.flag}, {"success_on", c.success_on}, {"success_off", c.success_off},
                       {"seeds", c.seeds}};
    detail += std::string(detail.empty() ? "" : "; ") + c.flag + " on " + std::to_string(c.success_on) + " vs off " +
              std::to_string(c.success_off);
  }
  r.data = {{"scenarios", per}};
  r.detail = detail + " (need off < on)";
  return r;
}

CriterionResult criterion_correction_loop(std::uint64_t seed) {
  CriterionResult r = make(7, "correction loop");
  const ScenarioConfig sc = scenario_preset("bottle");
  const Example demo = demo_example(level5_fitted_axis(seed, 0), sc);
  AugmentSpec spec;
  spec.n_samples = 3;
  spec.seed = seed;
  const Dataset dataset = augment_dataset({demo}, spec);

  // The same object placed elsewhere on the table.
  const Similarity pose_change{Vec3(0.15, -0.1, 0.0), rotation_about(Vec3::UnitZ(), 40.0 * kPi / 180.0), 1.0,
                               demo.cloud.centroid()};
  const Example novel = apply_similarity(demo, pose_change.t, pose_change.rotation, 1.0);
  Mechanism mech = sc.mechanism;
  mech.true_axis = transform_axis(mech.true_axis, pose_change);
  mech.t_initial.translation = pose_change.apply(mech.t_initial.translation);
  mech.t_initial.rotation = pose_change.rotation * mech.t_initial.rotation;
  WaypointPlan plan = sc.plan;
  plan.t_initial = mech.t_initial;

  const Prediction first = predict_action(dataset, novel.cloud);
  CemConfig config = sc.cem;
  config.seed = seed;
  const OptRun tuning = optimize(mech, first.action.axis, plan, config);

  Example corrected;
  corrected.cloud = novel.cloud;
  corrected.action = first.action;
  corrected.action.axis = *tuning.history[tuning.best].candidate_axis;
  corrected.provenance = Provenance::kCorrected;
  corrected.parent_id = first.example_id;
  const Dataset extended = extend_with_corrected(dataset, corrected, spec);
  const std::string corrected_id = extended.examples[dataset.size()].id;

  const Prediction second = predict_action(extended, novel.cloud);
  const AxisError to_corrected = axis_error(second.action.axis, corrected.action.axis);
  CemConfig tiny = config;
  tiny.sigma0 = Eigen::VectorXd::Constant(6, 1e-6);
  const OptRun rerun = optimize(mech, second.action.axis, plan, tiny);
  const bool first_episode =
      rerun.succeeded && rerun.episodes_to_success && *rerun.episodes_to_success == 1 && rerun.history.front().epoch == 0;

  r.passed = tuning.succeeded && second.example_id == corrected_id && to_corrected.distance < 1e-6 &&
             to_corrected.angle_deg < 1e-5 && first_episode;
  r.data = {{"first_prediction_error", {{"distance_m", axis_error(first.action.axis, mech.true_axis).distance},
                                        {"angle_deg", axis_error(first.action.axis, mech.true_axis).angle_deg}}},
            {"tuning_succeeded", tuning.succeeded},
            {"tuning_episodes",
             tuning.episodes_to_success ? Json(*tuning.episodes_to_success) : Json(nullptr)},
            {"dataset_size_before", dataset.size()},
            {"dataset_size_after", extended.size()},
            {"retrieved_id", second.example_id},
            {"corrected_id", corrected_id},
            {"retrieved_vs_corrected", {{"distance_m", to_corrected.distance}, {"angle_deg", to_corrected.angle_deg}}},
            {"rerun_succeeded", rerun.succeeded},
            {"rerun_episodes", rerun.episodes_to_success ? Json(*rerun.episodes_to_success) : Json(nullptr)}};
  r.detail = std::string("tuning ") + (tuning.succeeded ? "succeeded" : "failed") + ", retrieved " +
             second.example_id + " (corrected " + corrected_id + "), rerun " +
             (first_episode ? "succeeds at epoch 0 episode 1" : "does not succeed at epoch 0 episode 1");
  return r;
}

CriterionResult criterion_augmentation_equivariance(std::uint64_t seed) {
  CriterionResult r = make(8, "augmentation equivariance");
  const ScenarioConfig sc = scenario_preset("bottle");
  const Example demo = demo_example(sc.mechanism.true_axis, sc);
  AugmentSpec spec;
  spec.n_samples = 3;
  spec.seed = seed;
  const Dataset dataset = augment_dataset({demo}, spec);
  Rng rng = make_rng(seed, 8);
  const int n = 200;
  int within = 0;
  double max_dist = 0.0;
  double max_angle = 0.0;
  for (int i = 0; i < n; ++i) {
    const Vec3 t = uniform_box(rng, spec.translation_range);
    const double yaw = uniform(rng, -1.0, 1.0) * spec.max_angle_deg * kPi / 180.0;
    const double s = uniform(rng, spec.scale_lo, spec.scale_hi);
    const Example moved = apply_similarity(demo, t, rotation_about(Vec3::UnitZ(), yaw), s);
    const AxisError err = axis_error(predict_action(dataset, moved.cloud).action.axis, moved.action.axis);
    max_dist = std::max(max_dist, err.distance);
    max_angle = std::max(max_angle, err.angle_deg);
    if (err.distance <= 0.01 && err.angle_deg <= 3.0) ++within;
  }
  r.passed = within == n;
  r.data = {{"transforms", n}, {"within_tolerance", within}, {"max_distance_m", max_dist},
            {"max_angle_deg", max_angle}, {"dataset_size", dataset.size()}};
  r.detail = std::to_string(within) + "/" + std::to_string(n) + " within 1 cm / 3 deg (max " + fmt(max_dist) +
             " m, " + fmt(max_angle) + " deg)";
  return r;
}

namespace {

CriterionResult run_by_id(int id, std::uint64_t seed) {
  switch (id) {
    case 1: return criterion_screw_math(seed);
    case 2: return criterion_noiseless_recovery(seed);
    case 3: return criterion_noise_study(seed);
    case 4: return criterion_noisy_init_finetune(seed);
    case 5: return criterion_representation_ablation(seed);
    case 6: return criterion_reward_ablation(seed);
    case 7: return criterion_correction_loop(seed);
    case 8: return criterion_augmentation_equivariance(seed);
  }
  throw Error(ErrorKind::kInvalidArgument, "no acceptance criterion " + std::to_string(id));
}

CriterionResult timed(const std::function<CriterionResult()>& f) {
  const auto start = std::chrono::steady_clock::now();
  CriterionResult r;
  try {
    r = f();
  } catch (const std::exception& e) {
    r.passed = false;
    r.detail = std::string("error: ") + e.what();
    r.data = {{"error", e.what()}};
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

}  // namespace

CriterionResult criterion_determinism(const std::vector<CriterionResult>& first_runs, std::uint64_t seed) {
  CriterionResult r = make(9, "determinism");
  Json compared = Json::array();
  std::vector<int> differing;
  for (const auto& first : first_runs) {
    if (first.id < 1 || first.id > 8) continue;
    CriterionResult again;
    try {
      again = run_by_id(first.id, seed);
    } catch (const std::exception& e) {
      again.data = {{"error", e.what()}};
    }
    const bool same = render_json(first.data) == render_json(again.data) && first.passed == again.passed;
    compared.push_back({{"id", first.id}, {"identical", same}});
    if (!same) differing.push_back(first.id);
  }
  r.passed = differing.empty() && !compared.empty();
  r.data = {{"compared", compared}};
  r.detail = std::to_string(compared.size() - differing.size()) + "/" + std::to_string(compared.size()) +
             " sub-results byte-identical on rerun";
  return r;
}

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options,
                                            const std::function<void(const CriterionResult&)>& on_result) {
  const auto wanted = [&](int id) {
    return options.only.empty() || std::find(options.only.begin(), options.only.end(), id) != options.only.end();
  };
  std::vector<CriterionResult> results;
  for (int id = 1; id <= 8; ++id) {
    if (!wanted(id)) continue;
    CriterionResult r = timed([&] { return run_by_id(id, options.seed); });
    r.id = id;
    if (r.name.empty()) r.name = "criterion " + std::to_string(id);
    if (on_result) on_result(r);
    results.push_back(std::move(r));
  }
  if (options.check_determinism && wanted(9)) {
    std::vector<CriterionResult> first = results;
    if (first.empty()) {
      for (int id = 1; id <= 8; ++id) first.push_back(timed([&] { return run_by_id(id, options.seed); }));
    }
    CriterionResult r = timed([&] { return criterion_determinism(first, options.seed); });
    r.id = 9;
    r.name = "determinism";
    if (on_result) on_result(r);
    results.push_back(std::move(r));
  }
  return results;
}

std::string format_criterion_line(const CriterionResult& result) {
  char secs[32];
  std::snprintf(secs, sizeof(secs), "%.1f", result.seconds);
  return std::string(result.passed ? "[PASS] " : "[FAIL] ") + std::to_string(result.id) + " " + result.name + ": " +
         result.detail + " [" + secs + " s]";
}

}  // namespace screwkit
