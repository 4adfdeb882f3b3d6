#include <doctest.h>

#include <filesystem>
#include <sstream>

#include "cli.hpp"
#include "helpers.hpp"
#include "screwkit/io.hpp"
#include "screwkit/scenarios.hpp"

using namespace screwkit;
using namespace testutil;
namespace fs = std::filesystem;

namespace {

struct Run {
  int status = 0;
  std::string out;
  std::string err;
};

Run invoke(std::vector<std::string> args) {
  std::ostringstream out, err;
  Run r;
  r.status = cli::run(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string fresh(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("screwkit_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir.string();
}

// Clean revolute demo: static left hand, right hand turning a quarter circle.
void write_demo(const std::string& dir) {
  const ScrewAxis axis = ScrewAxis::revolute(Vec3::UnitZ(), Vec3(0.3, 0.0, 0.1));
  WaypointPlan plan;
  plan.theta_total = kPi / 2;
  plan.k_steps = 30;
  plan.t_initial.translation = Vec3(0.45, 0.0, 0.1);
  HandTrajectory left, right;
  const auto poses = generate_relative_waypoints(axis, plan);
  for (std::size_t i = 0; i < poses.size(); ++i) {
    left.samples.push_back({0.1 * i, Pose::identity()});
    right.samples.push_back({0.1 * i, poses[i]});
  }
  write_text_file(dir + "/left.csv", format_trajectory_csv(left));
  write_text_file(dir + "/right.csv", format_trajectory_csv(right));
  write_text_file(dir + "/meta.json", Json{{"g_l", {0, 0, 0}}, {"g_r", {0.45, 0, 0.1}}}.dump());
}

std::string slurp(const std::string& path) { return read_text_file(path); }

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("fit-axis recovers a clean revolute demo") {
  const std::string dir = fresh("fit");
  write_demo(dir);
  const Run r = invoke({"fit-axis", "--left", dir + "/left.csv", "--right", dir + "/right.csv", "--meta",
                        dir + "/meta.json", "--out", dir + "/out"});
  REQUIRE(r.status == 0);
  const Json axis = Json::parse(slurp(dir + "/out/axis.json"));
  const ScrewAxis fitted = axis_from_json(axis.at("axis"));
  CHECK(fitted.joint_type == JointType::kRevolute);
  CHECK(axis_error(fitted, ScrewAxis::revolute(Vec3::UnitZ(), Vec3(0.3, 0.0, 0.1))).distance < 1e-6);
  CHECK(fs::exists(dir + "/out/action.json"));
  CHECK(fs::exists(dir + "/out/plan.json"));
  CHECK(fs::exists(dir + "/out/report.json"));

  const Run g = invoke({"gen-traj", "--action", dir + "/out/action.json", "--plan", dir + "/out/plan.json", "--out",
                     dir + "/gen"});
  REQUIRE(g.status == 0);
  const BimanualWaypoints w = parse_waypoints_csv(slurp(dir + "/gen/waypoints.csv"), "waypoints");
  CHECK(w.left.size() == 31);
}

TEST_CASE("noise-study writes one row per level") {
  const std::string dir = fresh("noise");
  const Run r = invoke({"noise-study", "--levels", "standard", "--trials", "20", "--out", dir});
  REQUIRE(r.status == 0);
  const std::string csv = slurp(dir + "/noise_study.csv");
  int lines = 0;
  for (char c : csv) lines += c == '\n' ? 1 : 0;
  CHECK(lines == 6);
}

TEST_CASE("simulate reports no failure for on-manifold waypoints") {
  const std::string dir = fresh("sim");
  const ScenarioConfig sc = scenario_preset("bottle");
  BimanualWaypoints w;
  w.relative = generate_relative_waypoints(sc.mechanism.true_axis, sc.plan);
  w.left.assign(w.relative.size(), Pose::identity());
  w.right = w.relative;
  write_text_file(dir + "/w.csv", format_waypoints_csv(w));
  const Run r = invoke({"simulate", "--waypoints", dir + "/w.csv", "--scenario", "bottle", "--out", dir + "/out"});
  REQUIRE(r.status == 0);
  const Json ep = Json::parse(slurp(dir + "/out/episode.json"));
  CHECK(ep.dump().find("\"failure\":\"none\"") != std::string::npos);
}

TEST_CASE("exit codes and no artifacts on validation failure") {
  CHECK(invoke({}).status == 2);
  CHECK(invoke({"frobnicate"}).status == 2);
  CHECK(invoke({"--help"}).status == 0);
  const std::string dir = fresh("codes");
  CHECK(invoke({"cem", "--scenario", "toaster", "--out", dir + "/out"}).status == 2);
  CHECK_FALSE(fs::exists(dir + "/out"));

  write_text_file(dir + "/bad.csv", "t,px,py,pz,qw,qx,qy,qz\n0,0,0,0,0.5,0,0,0\n1,0,0,0,1,0,0,0\n");
  write_text_file(dir + "/meta.json", R"({"g_l": [0, 0, 0], "g_r": [0, 0, 0]})");
  const Run bad = invoke({"fit-axis", "--left", dir + "/bad.csv", "--right", dir + "/bad.csv", "--meta",
                       dir + "/meta.json", "--out", dir + "/fit"});
  CHECK(bad.status == 2);
  CHECK(bad.err.find("row 1") != std::string::npos);
  CHECK_FALSE(fs::exists(dir + "/fit"));

  write_text_file(dir + "/blocker", "x");
  CHECK(invoke({"noise-study", "--trials", "2", "--out", dir + "/blocker"}).status == 1);
}

TEST_CASE("cem output is deterministic and complete") {
  const std::string a = fresh("cem_a");
  const std::string b = fresh("cem_b");
  REQUIRE(invoke({"cem", "--scenario", "zipper", "--seed", "3", "--out", a}).status == 0);
  REQUIRE(invoke({"cem", "--scenario", "zipper", "--seed", "3", "--out", b}).status == 0);
  for (const std::string f : {"optrun.jsonl", "best_axis.json", "report.json", "summary.txt"}) {
    CHECK(slurp(a + "/" + f) == slurp(b + "/" + f));
  }
  const Json report = Json::parse(slurp(a + "/report.json"));
  const std::string jsonl = slurp(a + "/optrun.jsonl");
  int lines = 0;
  for (char c : jsonl) lines += c == '\n' ? 1 : 0;
  CHECK(lines >= 1);
  CHECK(lines <= 25);
  if (report.dump().find("\"succeeded\":false") != std::string::npos) CHECK(lines == 25);

  const std::string w = fresh("cem_wp");
  CHECK(invoke({"cem-baseline", "--space", "waypoints", "--scenario", "bottle", "--out", w}).status == 0);
  CHECK(invoke({"cem-baseline", "--space", "joints", "--scenario", "bottle", "--out", w + "/x"}).status == 2);
}

TEST_CASE("augment, predict and extend loop") {
  const std::string dir = fresh("loop");
  write_text_file(dir + "/cloud.xyz", format_point_cloud(object_cloud(Vec3::Zero())));
  ScrewAction action;
  action.axis = ScrewAxis::revolute(Vec3::UnitZ(), Vec3::Zero());
  action.g_r = Vec3(0.04, 0, 0.2);
  write_text_file(dir + "/action.json", action_to_json(action).dump());
  REQUIRE(invoke({"augment", "--cloud", dir + "/cloud.xyz", "--action", dir + "/action.json", "--n-samples", "3",
               "--out", dir + "/aug"})
              .status == 0);
  CHECK(load_dataset(dir + "/aug/dataset").size() == 4);

  const Run p = invoke({"predict", "--dataset", dir + "/aug/dataset", "--cloud", dir + "/cloud.xyz", "--out",
                     dir + "/pred"});
  REQUIRE(p.status == 0);
  CHECK(fs::exists(dir + "/pred/prediction.json"));
  CHECK(fs::exists(dir + "/pred/action.json"));

  const ScrewAxis fixed = ScrewAxis::revolute(Vec3::UnitZ(), Vec3(0.01, 0, 0));
  write_text_file(dir + "/axis.json", axis_to_json(fixed).dump());
  REQUIRE(invoke({"extend", "--dataset", dir + "/aug/dataset", "--cloud", dir + "/cloud.xyz", "--action",
               dir + "/pred/action.json", "--axis", dir + "/axis.json", "--parent", "ex000000", "--n-samples", "2",
               "--out", dir + "/ext"})
              .status == 0);
  const Dataset extended = load_dataset(dir + "/ext/dataset");
  CHECK(extended.size() == 7);
  CHECK(extended.examples[4].provenance == Provenance::kCorrected);

  const Run again = invoke({"predict", "--dataset", dir + "/ext/dataset", "--cloud", dir + "/cloud.xyz", "--out",
                         dir + "/pred2"});
  REQUIRE(again.status == 0);
  const Json pa = Json::parse(slurp(dir + "/pred2/action.json"));
  CHECK(axis_error(action_from_json(pa).axis, fixed).distance < 1e-6);

  CHECK(invoke({"extend", "--dataset", dir + "/aug/dataset", "--cloud", dir + "/cloud.xyz", "--action",
             dir + "/action.json", "--parent", "ex999999", "--out", dir + "/bad"})
            .status == 2);
}

}  // TEST_SUITE
