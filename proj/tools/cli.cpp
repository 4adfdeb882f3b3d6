#include "cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <sstream>

#include "screwkit/acceptance.hpp"
#include "screwkit/augment_predict.hpp"
#include "screwkit/axis_fit.hpp"
#include "screwkit/cem_opt.hpp"
#include "screwkit/error.hpp"
#include "screwkit/io.hpp"
#include "screwkit/report.hpp"
#include "screwkit/scenarios.hpp"

namespace screwkit::cli {

namespace {

namespace fs = std::filesystem;

using Files = std::map<std::string, std::string>;

struct Outcome {
  Report report;
  Files artifacts;
  int status = kExitOk;
};

struct Common {
  std::uint64_t seed = 0;
  std::string out;
};

Json read_json(const std::string& path) {
  try {
    return Json::parse(read_text_file(path));
  } catch (const Json::parse_error& e) {
    throw Error(ErrorKind::kParse, path + ": " + e.what());
  }
}

std::string dir_of(const std::string& path) { return fs::path(path).parent_path().string(); }

// A preset name or a scenario JSON file.
ScenarioConfig load_scenario(const std::string& name_or_path) {
  for (const auto& name : scenario_names()) {
    if (name == name_or_path) return scenario_preset(name);
  }
  if (!fs::exists(name_or_path)) {
    throw Error(ErrorKind::kValidation, "'" + name_or_path + "' is neither a scenario preset nor a file");
  }
  return scenario_from_json(read_json(name_or_path), dir_of(name_or_path));
}

// Accepts a bare axis object or any object holding one under "axis".
ScrewAxis load_axis(const std::string& path) {
  const Json j = read_json(path);
  if (j.is_object() && j.contains("axis")) return axis_from_json(j["axis"], path + ":axis");
  return axis_from_json(j, path);
}

Mechanism load_mechanism(const std::string& path) {
  const Json j = read_json(path);
  if (j.is_object() && j.contains("mechanism")) return mechanism_from_json(j["mechanism"]);
  return mechanism_from_json(j, path);
}

Files prefixed(const std::string& prefix, const Files& files) {
  Files out;
  for (const auto& [name, content] : files) out[prefix + name] = content;
  return out;
}

std::string yes_no(bool v) { return v ? "yes" : "no"; }

Table samples_table(const OptRun& run) {
  Table t{{"epoch", "index", "completed", "mean_wrench", "failure", "success"}, {}};
  for (const auto& s : run.history) {
    t.rows.push_back({std::to_string(s.epoch), std::to_string(s.index),
                      std::to_string(s.episode.completed_waypoints) + "/" + std::to_string(s.episode.total_waypoints),
                      format_number(s.episode.mean_wrench), std::string(to_string(s.episode.failure)),
                      yes_no(s.success)});
  }
  return t;
}

Outcome opt_run_outcome(const std::string& command, const ScenarioConfig& scenario, const OptRun& run,
                        const Json& init) {
  Outcome o;
  o.report.command = command;
  std::vector<Json> episodes;
  for (const auto& s : run.history) episodes.push_back(sample_to_json(s));
  o.report.results = {{"scenario", scenario.name},
                      {"init", init},
                      {"episodes", episodes},
                      {"summary", opt_run_summary_to_json(run)}};
  o.report.summary = samples_table(run);
  o.artifacts["optrun.jsonl"] = render_jsonl(episodes);
  if (!run.history.empty() && run.history[run.best].candidate_axis) {
    o.artifacts["best_axis.json"] = render_json(axis_to_json(*run.history[run.best].candidate_axis));
  }
  return o;
}

void add_augment_options(CLI::App* sub, AugmentSpec& spec) {
  sub->add_option("--n-samples", spec.n_samples, "Augmentations per seed example")->capture_default_str();
  sub->add_option("--translation-range", spec.translation_range, "Uniform translation half-range in meters")
      ->capture_default_str();
  sub->add_option("--max-angle-deg", spec.max_angle_deg, "Rotation half-range in degrees")->capture_default_str();
  sub->add_option("--scale-lo", spec.scale_lo)->capture_default_str();
  sub->add_option("--scale-hi", spec.scale_hi)->capture_default_str();
  sub->add_flag("--full-rotation", "Rotate about random axes instead of yaw only");
}

void finish_augment_spec(CLI::App* sub, AugmentSpec& spec, std::uint64_t seed) {
  spec.yaw_only = sub->count("--full-rotation") == 0;
  spec.seed = seed;
  validate_augment_spec(spec);
}

Table dataset_table(const Dataset& dataset) {
  Table t{{"id", "provenance", "parent", "type", "points"}, {}};
  for (const auto& e : dataset.examples) {
    t.rows.push_back({e.id, std::string(to_string(e.provenance)), e.parent_id.value_or("-"),
                      std::string(to_string(e.action.axis.joint_type)), std::to_string(e.cloud.size())});
  }
  return t;
}

Json dataset_summary(const Dataset& dataset) {
  Json examples = Json::array();
  for (const auto& e : dataset.examples) {
    examples.push_back({{"id", e.id},
                        {"provenance", std::string(to_string(e.provenance))},
                        {"parent_id", e.parent_id ? Json(*e.parent_id) : Json(nullptr)},
                        {"axis", axis_to_json(e.action.axis)}});
  }
  return {{"size", dataset.size()}, {"examples", examples}};
}

// Action JSON plus its left-hand trajectory file when present.
void add_action_files(Files& files, const ScrewAction& action) {
  std::optional<std::string> tau_path;
  if (action.tau_l) {
    tau_path = "tau_l.csv";
    files[*tau_path] = format_trajectory_csv(*action.tau_l);
  }
  files["action.json"] = render_json(action_to_json(action, tau_path));
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Screw-space bimanual manipulation toolkit", "screwkit"};
  app.require_subcommand(1);
  app.fallthrough(false);

  Common common;
  std::function<Outcome()> handler;
  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--seed", common.seed, "Random seed")->capture_default_str();
    sub->add_option("--out", common.out, "Output directory")->required();
  };

  // fit-axis
  std::string left, right, meta, type = "auto";
  bool keep_left = false;
  auto* fit = app.add_subcommand("fit-axis", "Fit a screw axis to a two-hand demonstration");
  add_common(fit);
  fit->add_option("--left", left, "Left-hand trajectory CSV")->required()->check(CLI::ExistingFile);
  fit->add_option("--right", right, "Right-hand trajectory CSV")->required()->check(CLI::ExistingFile);
  fit->add_option("--meta", meta, "Grasp-point metadata JSON")->required()->check(CLI::ExistingFile);
  fit->add_option("--type", type, "Joint type or auto")
      ->check(CLI::IsMember({"auto", "prismatic", "revolute", "revolute3d"}))
      ->capture_default_str();
  fit->add_flag("--keep-left-trajectory", keep_left, "Store the left-hand trajectory in the action");
  fit->callback([&] {
    handler = [&] {
      const Demo demo = load_demo(left, right, meta);
      const FitResult result = type == "auto" ? select_joint_type(demo.relative)
                                              : fit_joint(joint_type_from_string(type), demo.relative);
      const OrientedAxis oriented = oriented_axis(result);
      ScrewAction action;
      action.g_l = demo.g_l;
      action.g_r = demo.g_r;
      action.axis = oriented.axis;
      if (keep_left) action.tau_l = demo.left;
      WaypointPlan plan;
      plan.theta_total = oriented.theta_total;
      plan.k_steps = static_cast<int>(demo.relative.size()) - 1;
      plan.t_initial = demo.relative.initial();

      Outcome o;
      o.report.command = "fit-axis";
      o.report.results = {{"fit", fit_result_to_json(result)}, {"plan", plan_to_json(plan)}};
      o.report.summary.header = {"type", "score"};
      for (const auto& [t, score] : result.per_type_scores) {
        o.report.summary.rows.push_back({std::string(to_string(t)), format_number(score)});
      }
      o.artifacts["axis.json"] = render_json(fit_result_to_json(result));
      o.artifacts["plan.json"] = render_json(plan_to_json(plan));
      add_action_files(o.artifacts, action);
      return o;
    };
  });

  // gen-traj
  std::string action_path, axis_path, plan_path;
  auto* gen = app.add_subcommand("gen-traj", "Generate bimanual waypoints from a screw action");
  add_common(gen);
  auto* gen_action = gen->add_option("--action", action_path, "Action JSON")->check(CLI::ExistingFile);
  gen->add_option("--axis", axis_path, "Axis JSON (left hand held still at the origin)")
      ->check(CLI::ExistingFile)
      ->excludes(gen_action);
  gen->add_option("--plan", plan_path, "Plan JSON")->required()->check(CLI::ExistingFile);
  gen->callback([&] {
    handler = [&] {
      ScrewAction action;
      if (!action_path.empty()) {
        action = action_from_json(read_json(action_path), dir_of(action_path));
      } else if (!axis_path.empty()) {
        action.axis = load_axis(axis_path);
      } else {
        throw Error(ErrorKind::kValidation, "gen-traj needs --action or --axis");
      }
      const WaypointPlan plan = plan_from_json(read_json(plan_path), plan_path);
      validate_plan(plan);
      const BimanualWaypoints wps = compose_bimanual(action, plan, left_world_poses(action, plan));
      Outcome o;
      o.report.command = "gen-traj";
      o.report.results = {{"axis", axis_to_json(action.axis)}, {"plan", plan_to_json(plan)},
                          {"waypoints", wps.relative.size()}};
      o.report.summary = {{"k", "right_x", "right_y", "right_z"}, {}};
      for (std::size_t k = 0; k < wps.right.size(); ++k) {
        const Vec3& p = wps.right[k].translation;
        o.report.summary.rows.push_back(
            {std::to_string(k), format_number(p.x()), format_number(p.y()), format_number(p.z())});
      }
      o.artifacts["waypoints.csv"] = format_waypoints_csv(wps);
      return o;
    };
  });

  // simulate
  std::string waypoints_path, mechanism_path, scenario_arg;
  auto* sim = app.add_subcommand("simulate", "Run waypoints on a simulated mechanism");
  add_common(sim);
  sim->add_option("--waypoints", waypoints_path, "Waypoint CSV")->required()->check(CLI::ExistingFile);
  auto* sim_mech = sim->add_option("--mechanism", mechanism_path, "Mechanism JSON")->check(CLI::ExistingFile);
  sim->add_option("--scenario", scenario_arg, "Scenario preset name or JSON file")->excludes(sim_mech);
  sim->callback([&] {
    handler = [&] {
      Mechanism mech;
      if (!mechanism_path.empty()) {
        mech = load_mechanism(mechanism_path);
      } else if (!scenario_arg.empty()) {
        mech = load_scenario(scenario_arg).mechanism;
      } else {
        throw Error(ErrorKind::kValidation, "simulate needs --mechanism or --scenario");
      }
      const BimanualWaypoints wps = parse_waypoints_csv(read_text_file(waypoints_path), waypoints_path);
      const EpisodeResult episode = run_episode(mech, wps.relative);
      Json j = episode_to_json(episode);
      j["success"] = is_success(mech, episode);
      Outcome o;
      o.report.command = "simulate";
      o.report.results = j;
      o.report.summary = {{"step", "wrench"}, {}};
      for (std::size_t i = 0; i < episode.wrench_trace.size(); ++i) {
        o.report.summary.rows.push_back({std::to_string(i + 1), format_number(episode.wrench_trace[i])});
      }
      o.artifacts["episode.json"] = render_json(j);
      return o;
    };
  });

  // cem and cem-baseline share scenario loading
  std::string config_path, init_axis_path, space;
  bool no_mean_wrench = false, no_grasp_lost = false;
  WaypointNoise wp_noise;
  const auto resolve_scenario = [&]() {
    if (!config_path.empty()) return load_scenario(config_path);
    if (!scenario_arg.empty()) return load_scenario(scenario_arg);
    throw Error(ErrorKind::kValidation, "needs --scenario or --config");
  };
  const auto add_scenario_options = [&](CLI::App* sub) {
    auto* s = sub->add_option("--scenario", scenario_arg, "Scenario preset name or JSON file");
    sub->add_option("--config", config_path, "Scenario JSON file")->check(CLI::ExistingFile)->excludes(s);
    sub->add_option("--init-axis", init_axis_path, "Initial axis JSON (default: scenario perturbation)")
        ->check(CLI::ExistingFile);
    sub->add_flag("--no-mean-wrench", no_mean_wrench, "Rank without the mean-wrench tie-break");
    sub->add_flag("--no-grasp-lost", no_grasp_lost, "Disable the grasp-lost detector");
  };
  const auto prepare = [&](ScenarioConfig& sc, CemConfig& config, ScrewAxis& init) {
    sc = resolve_scenario();
    config = sc.cem;
    config.seed = common.seed;
    config.reward_flags.use_mean_wrench = !no_mean_wrench;
    config.reward_flags.use_grasp_lost = !no_grasp_lost;
    validate_cem_config(config);
    init = init_axis_path.empty() ? scenario_init_axis(sc, common.seed) : load_axis(init_axis_path);
  };

  auto* cem = app.add_subcommand("cem", "Fine-tune a screw axis with the cross-entropy method");
  add_common(cem);
  add_scenario_options(cem);
  cem->callback([&] {
    handler = [&] {
      ScenarioConfig sc;
      CemConfig config;
      ScrewAxis init;
      prepare(sc, config, init);
      const OptRun run = optimize(sc.mechanism, init, sc.plan, config);
      return opt_run_outcome("cem", sc, run, {{"axis", axis_to_json(init)}});
    };
  });

  auto* base = app.add_subcommand("cem-baseline", "Cross-entropy search over raw waypoints");
  add_common(base);
  add_scenario_options(base);
  base->add_option("--space", space, "Search space")->required()->check(CLI::IsMember({"waypoints"}));
  base->add_option("--sigma-pos", wp_noise.sigma_pos, "Initial position std in meters")->capture_default_str();
  base->add_option("--sigma-rot", wp_noise.sigma_rot, "Initial rotation std in radians")->capture_default_str();
  base->callback([&] {
    handler = [&] {
      ScenarioConfig sc;
      CemConfig config;
      ScrewAxis init;
      prepare(sc, config, init);
      const auto waypoints = generate_relative_waypoints(init, sc.plan);
      const OptRun run = optimize_waypoint_space(sc.mechanism, waypoints, config, wp_noise);
      return opt_run_outcome("cem-baseline", sc, run,
                             {{"axis", axis_to_json(init)},
                              {"space", space},
                              {"sigma_pos", wp_noise.sigma_pos},
                              {"sigma_rot", wp_noise.sigma_rot}});
    };
  });

  // noise-study
  std::string levels = "standard";
  int trials = 20;
  auto* noise = app.add_subcommand("noise-study", "Axis error under increasing demonstration noise");
  add_common(noise);
  noise->add_option("--levels", levels, "standard (five levels) or standard+zero")
      ->check(CLI::IsMember({"standard", "standard+zero"}))
      ->capture_default_str();
  noise->add_option("--trials", trials, "Trials per level")->check(CLI::PositiveNumber)->capture_default_str();
  noise->callback([&] {
    handler = [&] {
      std::vector<NoiseSpec> specs = standard_noise_levels(common.seed);
      const bool zero = levels.find("+zero") != std::string::npos;
      if (zero) specs.insert(specs.begin(), NoiseSpec{0.0, 0.0, common.seed});
      const NoiseStudyGroundTruth gt = default_noise_study_ground_truth();
      std::vector<NoiseStudyRow> rows = run_noise_study(gt.axis, gt.plan, specs, trials);
      if (zero) {
        for (auto& r : rows) r.level -= 1;
      }
      Outcome o;
      o.report.command = "noise-study";
      Json jrows = Json::array();
      o.report.summary.header = {"level", "sigma_pos_cm", "sigma_rot_deg", "dist_cm", "angle_deg", "failures"};
      for (const auto& r : rows) {
        jrows.push_back({{"level", r.level}, {"sigma_pos_m", r.sigma_pos}, {"sigma_rot_deg", r.sigma_rot_deg},
                         {"mean_dist_m", r.mean_dist}, {"std_dist_m", r.std_dist},
                         {"mean_angle_deg", r.mean_angle_deg}, {"std_angle_deg", r.std_angle_deg},
                         {"failures", r.failures}, {"trials", r.trials}});
        o.report.summary.rows.push_back(
            {std::to_string(r.level), format_number(r.sigma_pos * 100.0), format_number(r.sigma_rot_deg),
             format_number(r.mean_dist * 100.0) + " +- " + format_number(r.std_dist * 100.0),
             format_number(r.mean_angle_deg) + " +- " + format_number(r.std_angle_deg), std::to_string(r.failures)});
      }
      o.report.results = {{"ground_truth", {{"axis", axis_to_json(gt.axis)}, {"plan", plan_to_json(gt.plan)}}},
                          {"trials", trials},
                          {"rows", jrows}};
      o.artifacts["noise_study.csv"] = format_noise_study_csv(rows);
      return o;
    };
  });

  // augment / predict / extend
  std::string dataset_dir, cloud_path, parent_id;
  AugmentSpec aug_spec;
  auto* aug = app.add_subcommand("augment", "Grow a dataset with similarity-transformed copies");
  add_common(aug);
  auto* aug_ds = aug->add_option("--dataset", dataset_dir, "Existing dataset directory")->check(CLI::ExistingDirectory);
  aug->add_option("--cloud", cloud_path, "Demonstration point cloud")->check(CLI::ExistingFile)->excludes(aug_ds);
  aug->add_option("--action", action_path, "Demonstration action JSON")->check(CLI::ExistingFile)->excludes(aug_ds);
  add_augment_options(aug, aug_spec);
  aug->callback([&] {
    handler = [&] {
      finish_augment_spec(aug, aug_spec, common.seed);
      std::vector<Example> seeds;
      if (!dataset_dir.empty()) {
        for (const auto& e : load_dataset(dataset_dir).examples) {
          if (e.provenance != Provenance::kAugmented) seeds.push_back(e);
        }
      } else if (!cloud_path.empty() && !action_path.empty()) {
        Example demo;
        demo.cloud = parse_point_cloud(read_text_file(cloud_path), cloud_path);
        demo.action = action_from_json(read_json(action_path), dir_of(action_path));
        seeds.push_back(std::move(demo));
      } else {
        throw Error(ErrorKind::kValidation, "augment needs --dataset or both --cloud and --action");
      }
      const Dataset dataset = augment_dataset(seeds, aug_spec);
      Outcome o;
      o.report.command = "augment";
      o.report.results = dataset_summary(dataset);
      o.report.summary = dataset_table(dataset);
      o.artifacts = prefixed("dataset/", dataset_files(dataset));
      return o;
    };
  });

  auto* pred = app.add_subcommand("predict", "Predict a screw action for a point cloud");
  add_common(pred);
  pred->add_option("--dataset", dataset_dir, "Dataset directory")->required()->check(CLI::ExistingDirectory);
  pred->add_option("--cloud", cloud_path, "Query point cloud")->required()->check(CLI::ExistingFile);
  pred->callback([&] {
    handler = [&] {
      const Dataset dataset = load_dataset(dataset_dir);
      const Prediction p = predict_action(dataset, parse_point_cloud(read_text_file(cloud_path), cloud_path));
      Json j{{"example_id", p.example_id},
             {"match_score", p.match_score},
             {"yaw_rad", p.yaw},
             {"scale", p.scale},
             {"action", action_to_json(p.action, p.action.tau_l ? std::optional<std::string>("tau_l.csv")
                                                                  : std::nullopt)}};
      Outcome o;
      o.report.command = "predict";
      o.report.results = j;
      o.report.summary = {{"example", "match_score", "yaw_deg", "scale", "type"},
                          {{p.example_id, format_number(p.match_score), format_number(p.yaw * 180.0 / kPi),
                            format_number(p.scale), std::string(to_string(p.action.axis.joint_type))}}};
      o.artifacts["prediction.json"] = render_json(j);
      add_action_files(o.artifacts, p.action);
      return o;
    };
  });

  auto* ext = app.add_subcommand("extend", "Add a corrected example and its augmentations to a dataset");
  add_common(ext);
  ext->add_option("--dataset", dataset_dir, "Dataset directory")->required()->check(CLI::ExistingDirectory);
  ext->add_option("--cloud", cloud_path, "Point cloud of the corrected example")->required()->check(CLI::ExistingFile);
  ext->add_option("--action", action_path, "Action JSON of the corrected example")
      ->required()
      ->check(CLI::ExistingFile);
  ext->add_option("--axis", axis_path, "Corrected axis JSON replacing the action's axis")->check(CLI::ExistingFile);
  ext->add_option("--parent", parent_id, "Id of the example the correction started from");
  add_augment_options(ext, aug_spec);
  ext->callback([&] {
    handler = [&] {
      finish_augment_spec(ext, aug_spec, common.seed);
      const Dataset dataset = load_dataset(dataset_dir);
      Example corrected;
      corrected.cloud = parse_point_cloud(read_text_file(cloud_path), cloud_path);
      corrected.action = action_from_json(read_json(action_path), dir_of(action_path));
      if (!axis_path.empty()) corrected.action.axis = load_axis(axis_path);
      corrected.provenance = Provenance::kCorrected;
      if (!parent_id.empty()) {
        if (dataset.find(parent_id) == nullptr) {
          throw Error(ErrorKind::kValidation, "--parent: no example '" + parent_id + "' in the dataset");
        }
        corrected.parent_id = parent_id;
      }
      const Dataset extended = extend_with_corrected(dataset, corrected, aug_spec);
      Outcome o;
      o.report.command = "extend";
      o.report.results = dataset_summary(extended);
      o.report.summary = dataset_table(extended);
      o.artifacts = prefixed("dataset/", dataset_files(extended));
      return o;
    };
  });

  // reward-ablation
  int ablation_seeds = 10;
  auto* abl = app.add_subcommand("reward-ablation", "Success counts with each reward component on and off");
  add_common(abl);
  abl->add_option("--seeds", ablation_seeds, "Seeds per setting")->check(CLI::PositiveNumber)->capture_default_str();
  abl->callback([&] {
    handler = [&] {
      Outcome o;
      o.report.command = "reward-ablation";
      o.report.summary.header = {"scenario", "flag", "on", "off", "seeds"};
      Json rows = Json::array();
      for (const auto& c : run_reward_ablation(common.seed, ablation_seeds)) {
        rows.push_back({{"scenario", c.scenario}, {"flag", c.flag}, {"seeds", c.seeds},
                        {"success_on", c.success_on}, {"success_off", c.success_off}});
        o.report.summary.rows.push_back({c.scenario, c.flag, std::to_string(c.success_on),
                                         std::to_string(c.success_off), std::to_string(c.seeds)});
      }
      o.report.results = {{"rows", rows}};
      return o;
    };
  });

  // repro
  std::vector<int> only;
  bool no_determinism = false;
  auto* repro = app.add_subcommand("repro", "Run the acceptance suite");
  add_common(repro);
  repro->add_option("--only", only, "Criterion ids to run")->check(CLI::Range(1, 9));
  repro->add_flag("--no-determinism", no_determinism, "Skip the rerun comparison");
  repro->callback([&] {
    handler = [&] {
      AcceptanceOptions options;
      options.seed = common.seed;
      options.only = only;
      options.check_determinism = !no_determinism;
      const auto results =
          run_acceptance(options, [&](const CriterionResult& r) { out << format_criterion_line(r) << std::endl; });
      Outcome o;
      o.report.command = "repro";
      Json criteria = Json::array();
      bool all = true;
      o.report.summary.header = {"id", "criterion", "result", "detail"};
      for (const auto& r : results) {
        all = all && r.passed;
        criteria.push_back({{"id", r.id}, {"name", r.name}, {"passed", r.passed}, {"detail", r.detail},
                            {"data", r.data}});
        o.report.summary.rows.push_back({std::to_string(r.id), r.name, r.passed ? "PASS" : "FAIL", r.detail});
      }
      o.report.results = {{"seed", common.seed}, {"all_passed", all}, {"criteria", criteria}};
      o.status = all ? kExitOk : kExitFailure;
      return o;
    };
  });

  std::vector<std::string> argv_storage{"screwkit"};
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_storage) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
  }

  try {
    const Outcome o = handler();
    Files files = report_files(o.report);
    files.insert(o.artifacts.begin(), o.artifacts.end());
    write_files(common.out, files);
    out << render_table(o.report.summary);
    out << "wrote " << files.size() << " files to " << common.out << "\n";
    return o.status;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    switch (e.kind()) {
      case ErrorKind::kValidation:
      case ErrorKind::kParse:
      case ErrorKind::kInvalidArgument:
        return kExitUsage;
      default:
        return kExitFailure;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
}

int run_main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace screwkit::cli
