#include "screwkit/io.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "screwkit/error.hpp"

namespace screwkit {

namespace fs = std::filesystem;

namespace {

[[noreturn]] void invalid(const std::string& key, const std::string& msg) {
  throw Error(ErrorKind::kValidation, "'" + key + "': " + msg);
}

const Json& require(const Json& j, const std::string& key, const std::string& ctx) {
  if (!j.is_object()) invalid(ctx, "expected an object");
  const auto it = j.find(key);
  if (it == j.end()) invalid(ctx.empty() ? key : ctx + "." + key, "missing");
  return *it;
}

double number(const Json& j, const std::string& key) {
  if (!j.is_number()) invalid(key, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) invalid(key, "must be finite");
  return v;
}

int integer(const Json& j, const std::string& key) {
  if (!j.is_number_integer()) invalid(key, "expected an integer");
  return j.get<int>();
}

bool boolean(const Json& j, const std::string& key) {
  if (!j.is_boolean()) invalid(key, "expected true or false");
  return j.get<bool>();
}

std::string string_value(const Json& j, const std::string& key) {
  if (!j.is_string()) invalid(key, "expected a string");
  return j.get<std::string>();
}

Eigen::VectorXd vector_value(const Json& j, const std::string& key, Eigen::Index size) {
  if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != size) {
    invalid(key, "expected an array of " + std::to_string(size) + " numbers");
  }
  Eigen::VectorXd v(size);
  for (Eigen::Index i = 0; i < size; ++i) v[i] = number(j[static_cast<std::size_t>(i)], key);
  return v;
}

Json vector_to_json(const Eigen::VectorXd& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

void reject_unknown(const Json& j, const std::set<std::string>& allowed, const std::string& ctx) {
  for (const auto& item : j.items()) {
    if (allowed.count(item.key()) == 0) invalid(ctx + "." + item.key(), "unknown key");
  }
}

std::string resolve(const std::string& path, const std::string& base_dir) {
  if (base_dir.empty() || fs::path(path).is_absolute()) return path;
  return (fs::path(base_dir) / path).string();
}

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string fmt9(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) {
    const auto b = cell.find_first_not_of(" \t\r");
    const auto e = cell.find_last_not_of(" \t\r");
    cells.push_back(b == std::string::npos ? "" : cell.substr(b, e - b + 1));
  }
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

double parse_cell(const std::string& cell, const std::string& source, std::size_t row, const std::string& column) {
  const char* begin = cell.c_str();
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(begin, &end);
  if (cell.empty() || end != begin + cell.size() || errno == ERANGE || !std::isfinite(v)) {
    throw Error(ErrorKind::kParse, source + ": row " + std::to_string(row) + ", column " + column +
                                       ": '" + cell + "' is not a finite number");
  }
  return v;
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  return lines;
}

void check_header(const std::vector<std::string>& lines, const std::vector<std::string>& expected,
                  const std::string& source) {
  std::string want;
  for (std::size_t i = 0; i < expected.size(); ++i) want += (i ? "," : "") + expected[i];
  if (lines.empty() || split_csv(lines.front()) != expected) {
    throw Error(ErrorKind::kParse, source + ": header must be '" + want + "'");
  }
}

Rotation parse_quaternion(const std::vector<double>& wxyz, const std::string& source, std::size_t row) {
  Eigen::Quaterniond q(wxyz[0], wxyz[1], wxyz[2], wxyz[3]);
  const double n = q.norm();
  if (n < 0.99 || n > 1.01) {
    throw Error(ErrorKind::kValidation, source + ": row " + std::to_string(row) + ": quaternion norm " +
                                            fmt9(n) + " outside [0.99, 1.01]");
  }
  q.normalize();
  return q.toRotationMatrix();
}

std::string pose_cells(const Pose& pose) {
  const Eigen::Quaterniond q = pose.quaternion();
  const Vec3& t = pose.translation;
  return fmt17(t.x()) + "," + fmt17(t.y()) + "," + fmt17(t.z()) + "," + fmt17(q.w()) + "," + fmt17(q.x()) +
         "," + fmt17(q.y()) + "," + fmt17(q.z());
}

}  // namespace

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kIo, "cannot open '" + path + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  const fs::path target(path);
  std::error_code ec;
  if (target.has_parent_path()) fs::create_directories(target.parent_path(), ec);
  if (ec) throw Error(ErrorKind::kIo, "cannot create directory for '" + path + "': " + ec.message());
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::kIo, "cannot open '" + path + "' for writing");
    out << content;
    if (!out.flush()) throw Error(ErrorKind::kIo, "write to '" + path + "' failed");
  }
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw Error(ErrorKind::kIo, "cannot move output into '" + path + "'");
  }
}

Json vec_to_json(const Vec3& v) { return Json::array({v.x(), v.y(), v.z()}); }

Vec3 vec_from_json(const Json& j, const std::string& key) { return vector_value(j, key, 3); }

Json pose_to_json(const Pose& pose) {
  const Eigen::Quaterniond q = pose.quaternion();
  return {{"translation", vec_to_json(pose.translation)}, {"quaternion", {q.w(), q.x(), q.y(), q.z()}}};
}

Pose pose_from_json(const Json& j, const std::string& key) {
  if (!j.is_object()) invalid(key, "expected an object");
  reject_unknown(j, {"translation", "quaternion"}, key);
  const Vec3 t = vec_from_json(require(j, "translation", key), key + ".translation");
  const Eigen::VectorXd q = vector_value(require(j, "quaternion", key), key + ".quaternion", 4);
  const Eigen::Quaterniond quat(q[0], q[1], q[2], q[3]);
  const double n = quat.norm();
  if (n < 0.99 || n > 1.01) invalid(key + ".quaternion", "norm " + fmt9(n) + " outside [0.99, 1.01]");
  return Pose::from_quaternion(quat.normalized(), t);
}

Json axis_to_json(const ScrewAxis& axis) {
  Json j;
  j["type"] = std::string(to_string(axis.joint_type));
  j["q"] = vec_to_json(axis.q);
  j["s_hat"] = vec_to_json(axis.s_hat);
  if (std::isinf(axis.pitch)) {
    j["pitch"] = "inf";
  } else {
    j["pitch"] = axis.pitch;
  }
  return j;
}

ScrewAxis axis_from_json(const Json& j, const std::string& key) {
  if (!j.is_object()) invalid(key, "expected an object");
  reject_unknown(j, {"type", "q", "s_hat", "pitch"}, key);
  ScrewAxis axis;
  try {
    axis.joint_type = joint_type_from_string(string_value(require(j, "type", key), key + ".type"));
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::kValidation) invalid(key + ".type", "expected prismatic, revolute or revolute3d");
    throw;
  }
  axis.q = vec_from_json(require(j, "q", key), key + ".q");
  axis.s_hat = vec_from_json(require(j, "s_hat", key), key + ".s_hat");
  const double n = axis.s_hat.norm();
  if (!(n > 1e-8)) invalid(key + ".s_hat", "zero direction");
  if (std::abs(n - 1.0) > 1e-6) invalid(key + ".s_hat", "must be a unit vector (norm " + fmt9(n) + ")");
  axis.s_hat /= n;
  const bool prismatic = axis.joint_type == JointType::kPrismatic;
  if (j.contains("pitch")) {
    const Json& p = j["pitch"];
    if (p.is_string()) {
      if (p.get<std::string>() != "inf") invalid(key + ".pitch", "expected a number or \"inf\"");
      axis.pitch = kInf;
    } else {
      axis.pitch = number(p, key + ".pitch");
      if (axis.pitch < 0.0) invalid(key + ".pitch", "must be non-negative");
    }
  } else {
    axis.pitch = prismatic ? kInf : 0.0;
  }
  if (prismatic != std::isinf(axis.pitch)) invalid(key + ".pitch", "must be \"inf\" exactly for prismatic axes");
  return axis;
}

Json plan_to_json(const WaypointPlan& plan) {
  return {{"theta_total", plan.theta_total}, {"k_steps", plan.k_steps}, {"t_initial", pose_to_json(plan.t_initial)}};
}

WaypointPlan plan_from_json(const Json& j, const std::string& key) {
  if (!j.is_object()) invalid(key, "expected an object");
  reject_unknown(j, {"theta_total", "k_steps", "t_initial"}, key);
  WaypointPlan plan;
  plan.theta_total = number(require(j, "theta_total", key), key + ".theta_total");
  plan.k_steps = integer(require(j, "k_steps", key), key + ".k_steps");
  if (j.contains("t_initial")) plan.t_initial = pose_from_json(j["t_initial"], key + ".t_initial");
  if (plan.k_steps < 1) invalid(key + ".k_steps", "must be >= 1");
  return plan;
}

Json mechanism_to_json(const Mechanism& m) {
  return {{"true_axis", axis_to_json(m.true_axis)},
          {"t_initial", pose_to_json(m.t_initial)},
          {"theta_range", {m.theta_lo, m.theta_hi}},
          {"friction", m.friction},
          {"k_pos_per_m", m.k_pos},
          {"k_rot_per_rad", m.k_rot},
          {"f_min", m.f_min},
          {"f_max", m.f_max},
          {"d_grasp_m", m.d_grasp},
          {"slip_wrench", m.slip_wrench},
          {"theta_success_fraction", m.theta_success_fraction},
          {"lambda_m_per_rad", m.lambda}};
}

Mechanism mechanism_from_json(const Json& j, const std::string& key) {
  if (!j.is_object()) invalid(key, "expected an object");
  reject_unknown(j,
                 {"true_axis", "t_initial", "theta_range", "friction", "k_pos_per_m", "k_rot_per_rad", "f_min",
                  "f_max", "d_grasp_m", "slip_wrench", "theta_success_fraction", "lambda_m_per_rad"},
                 key);
  Mechanism m;
  m.true_axis = axis_from_json(require(j, "true_axis", key), key + ".true_axis");
  if (j.contains("t_initial")) m.t_initial = pose_from_json(j["t_initial"], key + ".t_initial");
  if (j.contains("theta_range")) {
    const Eigen::VectorXd r = vector_value(j["theta_range"], key + ".theta_range", 2);
    m.theta_lo = r[0];
    m.theta_hi = r[1];
  }
  const auto opt = [&](const char* name, double& field) {
    if (j.contains(name)) field = number(j[name], key + "." + name);
  };
  opt("friction", m.friction);
  opt("k_pos_per_m", m.k_pos);
  opt("k_rot_per_rad", m.k_rot);
  opt("f_min", m.f_min);
  opt("f_max", m.f_max);
  opt("d_grasp_m", m.d_grasp);
  opt("slip_wrench", m.slip_wrench);
  opt("theta_success_fraction", m.theta_success_fraction);
  opt("lambda_m_per_rad", m.lambda);
  validate_mechanism(m);
  return m;
}

Json cem_config_to_json(const CemConfig& c) {
  return {{"n_epochs", c.n_epochs},
          {"episodes_per_epoch", c.episodes_per_epoch},
          {"elite_count", c.elite_count},
          {"sigma0", vector_to_json(c.sigma0)},
          {"sigma_floor", vector_to_json(c.sigma_floor)},
          {"seed", c.seed},
          {"stop_on_success", c.stop_on_success},
          {"reward_flags",
           {{"use_grasp_lost", c.reward_flags.use_grasp_lost}, {"use_mean_wrench", c.reward_flags.use_mean_wrench}}}};
}

CemConfig cem_config_from_json(const Json& j, const std::string& key, const CemConfig& base) {
  CemConfig c = base;
  if (!j.is_object()) invalid(key, "expected an object");
  reject_unknown(j,
                 {"n_epochs", "episodes_per_epoch", "elite_count", "sigma0", "sigma_floor", "seed",
                  "stop_on_success", "reward_flags"},
                 key);
  if (j.contains("n_epochs")) c.n_epochs = integer(j["n_epochs"], key + ".n_epochs");
  if (j.contains("episodes_per_epoch")) c.episodes_per_epoch = integer(j["episodes_per_epoch"], key + ".episodes_per_epoch");
  if (j.contains("elite_count")) c.elite_count = integer(j["elite_count"], key + ".elite_count");
  if (j.contains("sigma0")) c.sigma0 = vector_value(j["sigma0"], key + ".sigma0", 6);
  if (j.contains("sigma_floor")) c.sigma_floor = vector_value(j["sigma_floor"], key + ".sigma_floor", 6);
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned() && !(j["seed"].is_number_integer() && j["seed"].get<long long>() >= 0)) {
      invalid(key + ".seed", "expected a non-negative integer");
    }
    c.seed = j["seed"].get<std::uint64_t>();
  }
  if (j.contains("stop_on_success")) c.stop_on_success = boolean(j["stop_on_success"], key + ".stop_on_success");
  if (j.contains("reward_flags")) {
    const Json& f = j["reward_flags"];
    const std::string fk = key + ".reward_flags";
    if (!f.is_object()) invalid(fk, "expected an object");
    reject_unknown(f, {"use_grasp_lost", "use_mean_wrench"}, fk);
    if (f.contains("use_grasp_lost")) c.reward_flags.use_grasp_lost = boolean(f["use_grasp_lost"], fk + ".use_grasp_lost");
    if (f.contains("use_mean_wrench")) c.reward_flags.use_mean_wrench = boolean(f["use_mean_wrench"], fk + ".use_mean_wrench");
  }
  try {
    validate_cem_config(c);
  } catch (const Error& e) {
    invalid(key, e.what());
  }
  return c;
}

Json scenario_to_json(const ScenarioConfig& s) {
  Json j{{"name", s.name},
         {"mechanism", mechanism_to_json(s.mechanism)},
         {"plan", plan_to_json(s.plan)},
         {"init_perturbation", {{"dq_m", s.init_perturbation.dq}, {"dangle_deg", s.init_perturbation.dangle_deg}}},
         {"cem", cem_config_to_json(s.cem)}};
  Json demo = Json::object();
  if (s.demo.left) demo["left"] = *s.demo.left;
  if (s.demo.right) demo["right"] = *s.demo.right;
  if (s.demo.meta) demo["meta"] = *s.demo.meta;
  if (s.demo.cloud) demo["cloud"] = *s.demo.cloud;
  if (!demo.empty()) j["demo"] = demo;
  return j;
}

ScenarioConfig scenario_from_json(const Json& j, const std::string& base_dir) {
  if (!j.is_object()) invalid("scenario", "expected an object");
  reject_unknown(j, {"name", "mechanism", "plan", "init_perturbation", "cem", "demo"}, "scenario");
  const std::string name = string_value(require(j, "name", ""), "name");
  ScenarioConfig s;
  bool preset = false;
  for (const auto& n : scenario_names()) preset = preset || n == name;
  if (preset) s = scenario_preset(name);
  s.name = name;
  if (j.contains("mechanism")) {
    s.mechanism = mechanism_from_json(j["mechanism"]);
  } else if (!preset) {
    invalid("mechanism", "missing (required unless name is a preset)");
  }
  if (j.contains("plan")) {
    s.plan = plan_from_json(j["plan"]);
    if (!j["plan"].contains("t_initial")) s.plan.t_initial = s.mechanism.t_initial;
  } else if (!preset) {
    invalid("plan", "missing (required unless name is a preset)");
  }
  if (j.contains("init_perturbation")) {
    const Json& p = j["init_perturbation"];
    if (!p.is_object()) invalid("init_perturbation", "expected an object");
    reject_unknown(p, {"dq_m", "dangle_deg"}, "init_perturbation");
    if (p.contains("dq_m")) s.init_perturbation.dq = number(p["dq_m"], "init_perturbation.dq_m");
    if (p.contains("dangle_deg")) s.init_perturbation.dangle_deg = number(p["dangle_deg"], "init_perturbation.dangle_deg");
  }
  if (j.contains("cem")) s.cem = cem_config_from_json(j["cem"], "cem", s.cem);
  if (j.contains("demo")) {
    const Json& d = j["demo"];
    if (!d.is_object()) invalid("demo", "expected an object");
    reject_unknown(d, {"left", "right", "meta", "cloud"}, "demo");
    const auto path = [&](const char* k, std::optional<std::string>& field) {
      if (!d.contains(k)) return;
      const std::string p = resolve(string_value(d[k], std::string("demo.") + k), base_dir);
      if (!fs::exists(p)) invalid(std::string("demo.") + k, "file '" + p + "' does not exist");
      field = p;
    };
    path("left", s.demo.left);
    path("right", s.demo.right);
    path("meta", s.demo.meta);
    path("cloud", s.demo.cloud);
  }
  validate_scenario(s);
  return s;
}

Json action_to_json(const ScrewAction& action, const std::optional<std::string>& tau_l_path) {
  Json j{{"g_l", vec_to_json(action.g_l)}, {"g_r", vec_to_json(action.g_r)}, {"axis", axis_to_json(action.axis)}};
  if (tau_l_path) j["tau_l"] = *tau_l_path;
  return j;
}

ScrewAction action_from_json(const Json& j, const std::string& base_dir) {
  if (!j.is_object()) invalid("action", "expected an object");
  reject_unknown(j, {"g_l", "g_r", "axis", "tau_l"}, "action");
  ScrewAction a;
  a.g_l = vec_from_json(require(j, "g_l", "action"), "action.g_l");
  a.g_r = vec_from_json(require(j, "g_r", "action"), "action.g_r");
  a.axis = axis_from_json(require(j, "axis", "action"), "action.axis");
  if (j.contains("tau_l") && !j["tau_l"].is_null()) {
    a.tau_l = read_trajectory_csv(resolve(string_value(j["tau_l"], "action.tau_l"), base_dir));
  }
  return a;
}

Json fit_result_to_json(const FitResult& fit) {
  Json scores = Json::object();
  for (const auto& [type, score] : fit.per_type_scores) scores[std::string(to_string(type))] = score;
  return {{"axis", axis_to_json(fit.axis)},
          {"score", fit.score},
          {"per_type_scores", scores},
          {"theta_extent", fit.theta_extent},
          {"skipped_samples", fit.skipped_samples}};
}

Json episode_to_json(const EpisodeResult& e) {
  return {{"total_waypoints", e.total_waypoints},
          {"completed_waypoints", e.completed_waypoints},
          {"wrench_trace", e.wrench_trace},
          {"mean_wrench", e.mean_wrench},
          {"failure", std::string(to_string(e.failure))},
          {"theta_final", e.theta_final},
          {"ungated_completed", e.ungated_completed},
          {"ungated_mean_wrench", e.ungated_mean_wrench},
          {"ungated_failure", std::string(to_string(e.ungated_failure))}};
}

Json sample_to_json(const CemSample& s) {
  return {{"epoch", s.epoch},
          {"index", s.index},
          {"epsilon", vector_to_json(s.epsilon)},
          {"axis", s.candidate_axis ? axis_to_json(*s.candidate_axis) : Json(nullptr)},
          {"completed_waypoints", s.episode.completed_waypoints},
          {"mean_wrench", s.episode.mean_wrench},
          {"failure", std::string(to_string(s.episode.failure))},
          {"success", s.success}};
}

Json opt_run_summary_to_json(const OptRun& run) {
  Json j{{"succeeded", run.succeeded},
         {"episodes_to_success", run.episodes_to_success ? Json(*run.episodes_to_success) : Json(nullptr)},
         {"history_length", run.history.size()},
         {"final_distribution",
          {{"mean", vector_to_json(run.final_distribution.mean)}, {"std", vector_to_json(run.final_distribution.std)}}}};
  if (!run.history.empty()) {
    const CemSample& best = run.history[run.best];
    j["best"] = {{"epoch", best.epoch}, {"index", best.index}, {"success", best.success},
                 {"completed_waypoints", best.episode.completed_waypoints}, {"mean_wrench", best.episode.mean_wrench}};
    if (best.candidate_axis) j["best"]["axis"] = axis_to_json(*best.candidate_axis);
  }
  return j;
}

HandTrajectory parse_trajectory_csv(const std::string& text, const std::string& source) {
  static const std::vector<std::string> kHeader{"t", "px", "py", "pz", "qw", "qx", "qy", "qz"};
  const auto lines = lines_of(text);
  check_header(lines, kHeader, source);
  HandTrajectory traj;
  std::size_t row = 0;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].find_first_not_of(" \t") == std::string::npos) continue;
    ++row;
    const auto cells = split_csv(lines[i]);
    if (cells.size() != kHeader.size()) {
      throw Error(ErrorKind::kParse, source + ": row " + std::to_string(row) + ": expected 8 columns, got " +
                                         std::to_string(cells.size()));
    }
    std::vector<double> v(8);
    for (std::size_t c = 0; c < 8; ++c) v[c] = parse_cell(cells[c], source, row, kHeader[c]);
    Pose pose;
    pose.translation = Vec3(v[1], v[2], v[3]);
    pose.rotation = parse_quaternion({v[4], v[5], v[6], v[7]}, source, row);
    traj.samples.push_back({v[0], pose});
  }
  validate_timestamps(traj.samples, source);
  return traj;
}

HandTrajectory read_trajectory_csv(const std::string& path) { return parse_trajectory_csv(read_text_file(path), path); }

std::string format_trajectory_csv(const HandTrajectory& traj) {
  std::string out = "t,px,py,pz,qw,qx,qy,qz\n";
  for (const auto& s : traj.samples) out += fmt17(s.t) + "," + pose_cells(s.pose) + "\n";
  return out;
}

std::string format_waypoints_csv(const BimanualWaypoints& w) {
  std::string out = "k,side,px,py,pz,qw,qx,qy,qz\n";
  for (std::size_t k = 0; k < w.left.size(); ++k) {
    out += std::to_string(k) + ",left," + pose_cells(w.left[k]) + "\n";
    out += std::to_string(k) + ",right," + pose_cells(w.right[k]) + "\n";
  }
  return out;
}

BimanualWaypoints parse_waypoints_csv(const std::string& text, const std::string& source) {
  static const std::vector<std::string> kHeader{"k", "side", "px", "py", "pz", "qw", "qx", "qy", "qz"};
  const auto lines = lines_of(text);
  check_header(lines, kHeader, source);
  std::map<long, std::pair<std::optional<Pose>, std::optional<Pose>>> by_k;
  std::size_t row = 0;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].find_first_not_of(" \t") == std::string::npos) continue;
    ++row;
    const auto cells = split_csv(lines[i]);
    if (cells.size() != kHeader.size()) {
      throw Error(ErrorKind::kParse, source + ": row " + std::to_string(row) + ": expected 9 columns, got " +
                                         std::to_string(cells.size()));
    }
    const double kd = parse_cell(cells[0], source, row, "k");
    if (kd < 0 || kd != std::floor(kd)) {
      throw Error(ErrorKind::kParse, source + ": row " + std::to_string(row) + ", column k: not a non-negative integer");
    }
    std::vector<double> v(7);
    for (std::size_t c = 0; c < 7; ++c) v[c] = parse_cell(cells[c + 2], source, row, kHeader[c + 2]);
    Pose pose;
    pose.translation = Vec3(v[0], v[1], v[2]);
    pose.rotation = parse_quaternion({v[3], v[4], v[5], v[6]}, source, row);
    auto& slot = by_k[static_cast<long>(kd)];
    std::optional<Pose>* target = nullptr;
    if (cells[1] == "left") {
      target = &slot.first;
    } else if (cells[1] == "right") {
      target = &slot.second;
    } else {
      throw Error(ErrorKind::kParse, source + ": row " + std::to_string(row) + ", column side: expected left or right");
    }
    if (target->has_value()) {
      throw Error(ErrorKind::kValidation, source + ": row " + std::to_string(row) + ": duplicate " + cells[1] +
                                              " pose for k = " + cells[0]);
    }
    *target = pose;
  }
  BimanualWaypoints w;
  long expect = 0;
  for (const auto& [k, pair] : by_k) {
    if (k != expect++ || !pair.first || !pair.second) {
      throw Error(ErrorKind::kValidation, source + ": need one left and one right pose for every k = 0.." +
                                              std::to_string(by_k.size() - 1));
    }
    w.left.push_back(*pair.first);
    w.right.push_back(*pair.second);
    w.relative.push_back(pair.first->inverse() * *pair.second);
  }
  if (w.left.size() < 2) throw Error(ErrorKind::kValidation, source + ": need at least 2 waypoints");
  return w;
}

std::string format_noise_study_csv(const std::vector<NoiseStudyRow>& rows) {
  std::string out = "level,sigma_pos_m,sigma_rot_deg,mean_dist_m,std_dist_m,mean_angle_deg,std_angle_deg,failures\n";
  for (const auto& r : rows) {
    out += std::to_string(r.level) + "," + fmt9(r.sigma_pos) + "," + fmt9(r.sigma_rot_deg) + "," + fmt9(r.mean_dist) +
           "," + fmt9(r.std_dist) + "," + fmt9(r.mean_angle_deg) + "," + fmt9(r.std_angle_deg) + "," +
           std::to_string(r.failures) + "\n";
  }
  return out;
}

PointCloud parse_point_cloud(const std::string& text, const std::string& source) {
  PointCloud cloud;
  const auto lines = lines_of(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const auto& line = lines[i];
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream in(line);
    std::vector<std::string> tokens;
    std::string tok;
    while (in >> tok) tokens.push_back(tok);
    if (tokens.size() != 3) {
      throw Error(ErrorKind::kParse, source + ": line " + std::to_string(i + 1) + ": expected 'x y z'");
    }
    const char* names[3] = {"x", "y", "z"};
    Vec3 p;
    for (int c = 0; c < 3; ++c) {
      const std::string col = names[c];
      try {
        p[c] = parse_cell(tokens[static_cast<std::size_t>(c)], source, i + 1, col);
      } catch (const Error&) {
        throw Error(ErrorKind::kParse, source + ": line " + std::to_string(i + 1) + ", column " + col +
                                           ": not a finite number");
      }
    }
    cloud.points.push_back(p);
  }
  return cloud;
}

std::string format_point_cloud(const PointCloud& cloud) {
  std::string out;
  for (const auto& p : cloud.points) out += fmt17(p.x()) + " " + fmt17(p.y()) + " " + fmt17(p.z()) + "\n";
  return out;
}

std::string format_opt_run_jsonl(const OptRun& run) {
  std::string out;
  for (const auto& s : run.history) out += sample_to_json(s).dump() + "\n";
  return out;
}

Demo load_demo(const std::string& left_path, const std::string& right_path, const std::string& meta_path) {
  Demo demo;
  demo.left = read_trajectory_csv(left_path);
  demo.right = read_trajectory_csv(right_path);
  Json meta;
  try {
    meta = Json::parse(read_text_file(meta_path));
  } catch (const Json::parse_error& e) {
    throw Error(ErrorKind::kParse, meta_path + ": " + e.what());
  }
  if (!meta.is_object()) invalid(meta_path, "expected an object");
  demo.g_l = vec_from_json(require(meta, "g_l", ""), "g_l");
  demo.g_r = vec_from_json(require(meta, "g_r", ""), "g_r");
  demo.relative = relative_trajectory(demo.left, demo.right);
  return demo;
}

std::map<std::string, std::string> dataset_files(const Dataset& dataset) {
  std::map<std::string, std::string> files;
  std::string index;
  for (const auto& e : dataset.examples) {
    index += e.id + "\n";
    std::optional<std::string> tau;
    if (e.action.tau_l) {
      tau = e.id + "_tau_l.csv";
      files["examples/" + *tau] = format_trajectory_csv(*e.action.tau_l);
    }
    Json j{{"id", e.id},
           {"provenance", std::string(to_string(e.provenance))},
           {"parent_id", e.parent_id ? Json(*e.parent_id) : Json(nullptr)},
           {"cloud", e.id + ".xyz"},
           {"action", action_to_json(e.action, tau)}};
    files["examples/" + e.id + ".json"] = j.dump(2) + "\n";
    files["examples/" + e.id + ".xyz"] = format_point_cloud(e.cloud);
  }
  files["index.txt"] = index;
  return files;
}

Dataset load_dataset(const std::string& dir) {
  Dataset dataset;
  const std::string examples_dir = (fs::path(dir) / "examples").string();
  for (const auto& line : lines_of(read_text_file((fs::path(dir) / "index.txt").string()))) {
    if (line.empty()) continue;
    const std::string path = (fs::path(examples_dir) / (line + ".json")).string();
    Json j;
    try {
      j = Json::parse(read_text_file(path));
    } catch (const Json::parse_error& e) {
      throw Error(ErrorKind::kParse, path + ": " + e.what());
    }
    Example e;
    e.id = string_value(require(j, "id", path), path + ".id");
    if (e.id != line) invalid(path + ".id", "does not match the index entry '" + line + "'");
    e.provenance = provenance_from_string(string_value(require(j, "provenance", path), path + ".provenance"));
    if (j.contains("parent_id") && !j["parent_id"].is_null()) e.parent_id = string_value(j["parent_id"], path + ".parent_id");
    const std::string cloud_path =
        (fs::path(examples_dir) / string_value(require(j, "cloud", path), path + ".cloud")).string();
    e.cloud = parse_point_cloud(read_text_file(cloud_path), cloud_path);
    e.action = action_from_json(require(j, "action", path), examples_dir);
    dataset.append(std::move(e));
  }
  return dataset;
}

}  // namespace screwkit
