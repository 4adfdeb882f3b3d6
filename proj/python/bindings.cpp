#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <filesystem>

#include "screwkit/acceptance.hpp"
#include "screwkit/axis_fit.hpp"
#include "screwkit/error.hpp"
#include "screwkit/io.hpp"
#include "screwkit/report.hpp"
#include "screwkit/scenarios.hpp"

namespace py = pybind11;
using namespace screwkit;

namespace {

using Mat4 = Eigen::Matrix4d;
using PoseArray = py::array_t<double, py::array::c_style | py::array::forcecast>;

Pose pose_from_matrix(const Mat4& m) {
  if (!m.allFinite()) throw Error(ErrorKind::kValidation, "pose matrix has non-finite entries");
  const Rotation r = m.block<3, 3>(0, 0);
  if ((r.transpose() * r - Rotation::Identity()).norm() > 1e-6 || r.determinant() < 0.0) {
    throw Error(ErrorKind::kValidation, "pose matrix rotation block is not a rotation");
  }
  Pose p;
  p.rotation = r;
  p.translation = m.block<3, 1>(0, 3);
  return p;
}

Mat4 matrix_from_pose(const Pose& p) {
  Mat4 m = Mat4::Identity();
  m.block<3, 3>(0, 0) = p.rotation;
  m.block<3, 1>(0, 3) = p.translation;
  return m;
}

std::vector<Pose> poses_from_array(const PoseArray& a, const char* what) {
  if (a.ndim() != 3 || a.shape(1) != 4 || a.shape(2) != 4) {
    throw Error(ErrorKind::kValidation, std::string(what) + " must have shape (N, 4, 4)");
  }
  std::vector<Pose> out;
  const auto v = a.unchecked<3>();
  for (py::ssize_t i = 0; i < a.shape(0); ++i) {
    Mat4 m;
    for (int r = 0; r < 4; ++r) {
      for (int c = 0; c < 4; ++c) m(r, c) = v(i, r, c);
    }
    out.push_back(pose_from_matrix(m));
  }
  return out;
}

py::array_t<double> array_from_poses(const std::vector<Pose>& poses) {
  py::array_t<double> out({static_cast<py::ssize_t>(poses.size()), py::ssize_t{4}, py::ssize_t{4}});
  auto v = out.mutable_unchecked<3>();
  for (std::size_t i = 0; i < poses.size(); ++i) {
    const Mat4 m = matrix_from_pose(poses[i]);
    for (int r = 0; r < 4; ++r) {
      for (int c = 0; c < 4; ++c) v(static_cast<py::ssize_t>(i), r, c) = m(r, c);
    }
  }
  return out;
}

py::object to_python(const Json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

py::dict fit_to_dict(const FitResult& fit) {
  py::dict scores;
  for (const auto& [type, score] : fit.per_type_scores) scores[py::str(std::string(to_string(type)))] = score;
  py::dict d;
  d["axis"] = fit.axis;
  d["score"] = fit.score;
  d["per_type_scores"] = scores;
  d["theta_extent"] = fit.theta_extent;
  d["skipped_samples"] = fit.skipped_samples;
  return d;
}

ScenarioConfig scenario_by_name_or_file(const std::string& name) {
  if (!std::filesystem::is_regular_file(name)) return scenario_preset(name);
  const std::string dir = std::filesystem::path(name).parent_path().string();
  return scenario_from_json(Json::parse(read_text_file(name)), dir);
}

}  // namespace

PYBIND11_MODULE(_screwkit, m) {
  m.doc() = "Screw-axis demonstration fitting, execution and fine-tuning";

  static py::handle error_type = py::exception<Error>(m, "ScrewkitError", PyExc_ValueError).release();
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object err = py::reinterpret_borrow<py::object>(error_type)(e.what());
      err.attr("kind") = to_string(e.kind());
      PyErr_SetObject(error_type.ptr(), err.ptr());
    }
  });

  py::class_<ScrewAxis>(m, "ScrewAxis")
      .def(py::init([](const std::string& joint_type, const Vec3& s_hat, const Vec3& q) {
             const JointType type = joint_type_from_string(joint_type);
             if (type == JointType::kPrismatic) return ScrewAxis::prismatic(s_hat, q);
             return type == JointType::kRevolute ? ScrewAxis::revolute(s_hat, q) : ScrewAxis::revolute3d(s_hat, q);
           }),
           py::arg("joint_type"), py::arg("s_hat"), py::arg("q") = Vec3::Zero())
      .def_property(
          "joint_type", [](const ScrewAxis& a) { return std::string(to_string(a.joint_type)); },
          [](ScrewAxis& a, const std::string& name) { a.joint_type = joint_type_from_string(name); })
      .def_readwrite("q", &ScrewAxis::q)
      .def_readwrite("s_hat", &ScrewAxis::s_hat)
      .def_readwrite("pitch", &ScrewAxis::pitch)
      .def("to_dict", [](const ScrewAxis& a) { return to_python(axis_to_json(a)); })
      .def_static("from_dict",
                  [](const py::object& d) {
                    const std::string text = py::str(py::module_::import("json").attr("dumps")(d));
                    return axis_from_json(Json::parse(text));
                  })
      .def("__repr__", [](const ScrewAxis& a) {
        return "ScrewAxis(" + std::string(to_string(a.joint_type)) + ", s_hat=[" + format_number(a.s_hat.x()) + ", " +
               format_number(a.s_hat.y()) + ", " + format_number(a.s_hat.z()) + "], q=[" + format_number(a.q.x()) +
               ", " + format_number(a.q.y()) + ", " + format_number(a.q.z()) + "])";
      });

  m.def("canonicalize_axis", &canonicalize_axis, py::arg("axis"));
  m.def(
      "axis_error",
      [](const ScrewAxis& a, const ScrewAxis& b) {
        const AxisError e = axis_error(a, b);
        return py::make_tuple(e.distance, e.angle_deg);
      },
      py::arg("a"), py::arg("b"), "(distance in m, angle in degrees) between two axis lines.");

  m.def(
      "exp_coords",
      [](const Vec3& omega, const Vec3& v) { return matrix_from_pose(exp_coords(Twist{omega, v})); },
      py::arg("omega"), py::arg("v"));
  m.def(
      "log_pose",
      [](const Mat4& pose) {
        const Twist xi = log_pose(pose_from_matrix(pose));
        return py::make_tuple(xi.omega, xi.vee);
      },
      py::arg("pose"));
  m.def(
      "screw_to_twist",
      [](const ScrewAxis& axis, double theta) {
        const Twist xi = screw_to_twist(axis, theta);
        return py::make_tuple(xi.omega, xi.vee);
      },
      py::arg("axis"), py::arg("theta"));
  m.def(
      "twist_to_screw", [](const Vec3& omega, const Vec3& v) { return twist_to_screw(Twist{omega, v}); },
      py::arg("omega"), py::arg("v"));

  m.def(
      "relative_poses",
      [](const PoseArray& left, const PoseArray& right) {
        const auto l = poses_from_array(left, "left");
        const auto r = poses_from_array(right, "right");
        if (l.size() != r.size()) throw Error(ErrorKind::kAlignment, "left and right need the same length");
        std::vector<Pose> out;
        for (std::size_t i = 0; i < l.size(); ++i) out.push_back(l[i].inverse() * r[i]);
        return array_from_poses(out);
      },
      py::arg("left"), py::arg("right"));

  m.def(
      "fit_axis",
      [](const PoseArray& relative, const std::string& joint_type) {
        const RelativeTrajectory traj = RelativeTrajectory::from_poses(poses_from_array(relative, "relative"));
        if (joint_type == "auto") return fit_to_dict(select_joint_type(traj));
        return fit_to_dict(fit_joint(joint_type_from_string(joint_type), traj));
      },
      py::arg("relative"), py::arg("joint_type") = "auto",
      "Fits a screw axis to relative poses of shape (N, 4, 4).");

  m.def(
      "generate_waypoints",
      [](const ScrewAxis& axis, double theta_total, int k_steps, const Mat4& t_initial) {
        WaypointPlan plan;
        plan.theta_total = theta_total;
        plan.k_steps = k_steps;
        plan.t_initial = pose_from_matrix(t_initial);
        return array_from_poses(generate_relative_waypoints(axis, plan));
      },
      py::arg("axis"), py::arg("theta_total"), py::arg("k_steps"), py::arg("t_initial") = Mat4::Identity());

  m.def("scenario_names", &scenario_names);
  m.def(
      "scenario",
      [](const std::string& name) { return to_python(scenario_to_json(scenario_by_name_or_file(name))); },
      py::arg("name"));

  m.def(
      "simulate",
      [](const PoseArray& waypoints, const std::string& scenario) {
        const ScenarioConfig sc = scenario_by_name_or_file(scenario);
        const EpisodeResult r = run_episode(sc.mechanism, poses_from_array(waypoints, "waypoints"));
        py::dict d = to_python(episode_to_json(r));
        d["success"] = is_success(sc.mechanism, r);
        return d;
      },
      py::arg("waypoints"), py::arg("scenario") = "bottle");

  m.def(
      "optimize",
      [](const std::string& scenario, std::uint64_t seed, std::optional<ScrewAxis> init_axis, bool stop_on_success) {
        const ScenarioConfig sc = scenario_by_name_or_file(scenario);
        CemConfig config = sc.cem;
        config.seed = seed;
        config.stop_on_success = stop_on_success;
        const ScrewAxis init = init_axis ? *init_axis : scenario_init_axis(sc, seed);
        OptRun run;
        {
          py::gil_scoped_release release;
          run = optimize(sc.mechanism, init, sc.plan, config);
        }
        py::dict d = to_python(opt_run_summary_to_json(run));
        d["episodes"] = run.history.size();
        d["init_axis"] = init;
        if (run.history[run.best].candidate_axis) d["best_axis"] = *run.history[run.best].candidate_axis;
        return d;
      },
      py::arg("scenario") = "bottle", py::arg("seed") = 0, py::arg("init_axis") = py::none(),
      py::arg("stop_on_success") = true);

  m.def(
      "noise_study",
      [](int trials, std::uint64_t seed) {
        const NoiseStudyGroundTruth gt = default_noise_study_ground_truth();
        std::vector<NoiseStudyRow> rows;
        {
          py::gil_scoped_release release;
          rows = run_noise_study(gt.axis, gt.plan, standard_noise_levels(seed), trials);
        }
        py::list out;
        for (const auto& r : rows) {
          py::dict d;
          d["level"] = r.level;
          d["sigma_pos"] = r.sigma_pos;
          d["sigma_rot_deg"] = r.sigma_rot_deg;
          d["mean_dist"] = r.mean_dist;
          d["std_dist"] = r.std_dist;
          d["mean_angle_deg"] = r.mean_angle_deg;
          d["std_angle_deg"] = r.std_angle_deg;
          d["failures"] = r.failures;
          out.append(d);
        }
        return out;
      },
      py::arg("trials") = 20, py::arg("seed") = 0);

  m.def(
      "predict",
      [](const std::string& dataset_dir, const Eigen::Matrix<double, Eigen::Dynamic, 3, Eigen::RowMajor>& cloud) {
        PointCloud query;
        for (Eigen::Index i = 0; i < cloud.rows(); ++i) query.points.push_back(cloud.row(i).transpose());
        const Dataset dataset = load_dataset(dataset_dir);
        const Prediction p = predict_action(dataset, query);
        py::dict d;
        d["axis"] = p.action.axis;
        d["g_l"] = p.action.g_l;
        d["g_r"] = p.action.g_r;
        d["match_score"] = p.match_score;
        d["example_id"] = p.example_id;
        d["yaw"] = p.yaw;
        d["scale"] = p.scale;
        return d;
      },
      py::arg("dataset_dir"), py::arg("cloud"), "Retrieves an action for an (N, 3) point cloud.");

  m.def(
      "run_acceptance",
      [](std::vector<int> only, std::uint64_t seed, bool check_determinism) {
        AcceptanceOptions options;
        options.only = std::move(only);
        options.seed = seed;
        options.check_determinism = check_determinism;
        std::vector<CriterionResult> results;
        {
          py::gil_scoped_release release;
          results = run_acceptance(options);
        }
        py::list out;
        for (const auto& r : results) {
          py::dict d;
          d["id"] = r.id;
          d["name"] = r.name;
          d["passed"] = r.passed;
          d["detail"] = r.detail;
          d["line"] = format_criterion_line(r);
          out.append(d);
        }
        return out;
      },
      py::arg("only") = std::vector<int>{}, py::arg("seed") = 0, py::arg("check_determinism") = true);
}
