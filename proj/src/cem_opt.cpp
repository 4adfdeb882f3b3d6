#include "screwkit/cem_opt.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

#include "screwkit/error.hpp"

namespace screwkit {

Eigen::VectorXd CemConfig::default_sigma0() {
  Eigen::VectorXd s(6);
  s << 0.02, 0.02, 0.02, 0.1, 0.1, 0.1;
  return s;
}

void validate_cem_config(const CemConfig& config) {
  const auto fail = [](const std::string& msg) { throw Error(ErrorKind::kValidation, "cem config: " + msg); };
  if (config.n_epochs < 1 || config.episodes_per_epoch < 1) fail("n_epochs and episodes_per_epoch must be >= 1");
  if (config.elite_count < 1 || config.elite_count > config.n_epochs * config.episodes_per_epoch) {
    fail("elite_count must lie in [1, n_epochs * episodes_per_epoch]");
  }
  if ((config.sigma0.array() <= 0.0).any()) fail("sigma0 entries must be positive");
  if ((config.sigma_floor.array() <= 0.0).any()) fail("sigma_floor entries must be positive");
}

namespace {

Eigen::VectorXd draw(const Distribution& d, Rng& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Eigen::VectorXd eps(d.mean.size());
  for (Eigen::Index i = 0; i < eps.size(); ++i) eps[i] = d.mean[i] + d.std[i] * n(rng);
  return eps;
}

int ranked_length(const CemSample& s, const RewardFlags& flags) {
  return flags.use_grasp_lost ? s.episode.completed_waypoints : s.episode.ungated_completed;
}

double ranked_wrench(const CemSample& s, const RewardFlags& flags) {
  return flags.use_grasp_lost ? s.episode.mean_wrench : s.episode.ungated_mean_wrench;
}

bool submitted_before(const CemSample& a, const CemSample& b) {
  return a.epoch != b.epoch ? a.epoch < b.epoch : a.index < b.index;
}

// Shared epoch loop. `candidate` turns a drawn perturbation into a sample with
// its episode filled in.
OptRun run_cem(const Mechanism& mech, Distribution dist, const CemConfig& config,
               const Eigen::VectorXd& floor,
               const std::function<CemSample(const Distribution&, Rng&)>& candidate) {
  OptRun run;
  for (int epoch = 0; epoch < config.n_epochs; ++epoch) {
    for (int e = 0; e < config.episodes_per_epoch; ++e) {
      Rng rng = make_rng(config.seed, static_cast<std::uint64_t>(epoch), static_cast<std::uint64_t>(e));
      CemSample sample = candidate(dist, rng);
      sample.epoch = epoch;
      sample.index = e;
      sample.success = is_success(mech, sample.episode);
      run.history.push_back(std::move(sample));
      const std::size_t last = run.history.size() - 1;
      if (last == 0 || better_sample(run.history[last], run.history[run.best])) run.best = last;
      if (run.history[last].success && !run.succeeded) {
        run.succeeded = true;
        run.episodes_to_success = static_cast<int>(run.history.size());
      }
      if (run.succeeded && config.stop_on_success) {
        run.final_distribution = dist;
        return run;
      }
    }
    dist = fit_distribution(rank_and_elite(run.history, config.elite_count, config.reward_flags), floor);
  }
  run.final_distribution = dist;
  return run;
}

}  // namespace

ScrewAxis apply_perturbation(const ScrewAxis& init_axis, const Eigen::VectorXd& epsilon) {
  if (epsilon.size() != 6) {
    throw Error(ErrorKind::kInvalidArgument, "screw perturbation must have 6 components");
  }
  ScrewAxis out = init_axis;
  out.q = init_axis.q + epsilon.head<3>();
  out.s_hat = init_axis.s_hat + epsilon.tail<3>();
  return reproject_axis(out);
}

CemSample sample_candidate(const ScrewAxis& init_axis, const Distribution& distribution, Rng& rng) {
  for (int attempt = 0; attempt < 100; ++attempt) {
    Eigen::VectorXd eps = draw(distribution, rng);
    if ((init_axis.s_hat + eps.tail<3>()).norm() < 1e-8) continue;
    CemSample s;
    s.candidate_axis = apply_perturbation(init_axis, eps);
    s.epsilon = std::move(eps);
    return s;
  }
  throw Error(ErrorKind::kInvalidArgument, "sample_candidate: direction perturbation keeps cancelling the axis");
}

std::vector<CemSample> rank_and_elite(const std::vector<CemSample>& history, int elite_count,
                                      const RewardFlags& flags) {
  std::vector<const CemSample*> order;
  order.reserve(history.size());
  for (const auto& s : history) order.push_back(&s);

  std::stable_sort(order.begin(), order.end(), [&](const CemSample* a, const CemSample* b) {
    const int la = ranked_length(*a, flags);
    const int lb = ranked_length(*b, flags);
    if (la != lb) return la > lb;
    if (flags.use_mean_wrench) {
      const double wa = ranked_wrench(*a, flags);
      const double wb = ranked_wrench(*b, flags);
      if (wa != wb) return wa < wb;
    }
    return submitted_before(*a, *b);
  });
  order.resize(std::min(order.size(), static_cast<std::size_t>(std::max(elite_count, 0))));

  if (flags.use_mean_wrench) {
    std::stable_sort(order.begin(), order.end(), [&](const CemSample* a, const CemSample* b) {
      const double wa = ranked_wrench(*a, flags);
      const double wb = ranked_wrench(*b, flags);
      if (wa != wb) return wa < wb;
      return submitted_before(*a, *b);
    });
  }
  std::vector<CemSample> elite;
  elite.reserve(order.size());
  for (const auto* s : order) elite.push_back(*s);
  return elite;
}

Distribution fit_distribution(const std::vector<CemSample>& elite, const Eigen::VectorXd& sigma_floor) {
  if (elite.empty()) throw Error(ErrorKind::kInvalidArgument, "fit_distribution: empty elite set");
  const Eigen::Index dim = elite.front().epsilon.size();
  // Welford accumulation.
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(dim);
  Eigen::VectorXd m2 = Eigen::VectorXd::Zero(dim);
  double n = 0.0;
  for (const auto& s : elite) {
    n += 1.0;
    const Eigen::VectorXd delta = s.epsilon - mean;
    mean += delta / n;
    m2 += delta.cwiseProduct(s.epsilon - mean);
  }
  Distribution d;
  d.mean = mean;
  d.std = elite.size() > 1 ? Eigen::VectorXd((m2 / (n - 1.0)).cwiseSqrt()) : Eigen::VectorXd::Zero(dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    const double f = sigma_floor.size() == dim ? sigma_floor[i] : sigma_floor[0];
    d.std[i] = std::max(d.std[i], f);
  }
  return d;
}

bool better_sample(const CemSample& a, const CemSample& b) {
  if (a.success != b.success) return a.success;
  if (a.episode.completed_waypoints != b.episode.completed_waypoints) {
    return a.episode.completed_waypoints > b.episode.completed_waypoints;
  }
  return a.episode.mean_wrench < b.episode.mean_wrench;
}

OptRun optimize(const Mechanism& mech, const ScrewAxis& init_axis, const WaypointPlan& plan,
                const CemConfig& config) {
  validate_cem_config(config);
  if (config.sigma0.size() != 6) throw Error(ErrorKind::kValidation, "cem config: sigma0 needs 6 entries");
  if (init_axis.joint_type != mech.true_axis.joint_type) {
    throw Error(ErrorKind::kInvalidArgument, "optimize: initial axis joint type differs from the mechanism's");
  }
  Distribution dist{Eigen::VectorXd::Zero(6), config.sigma0};
  return run_cem(mech, dist, config, config.sigma_floor, [&](const Distribution& d, Rng& rng) {
    CemSample s = sample_candidate(init_axis, d, rng);
    s.episode = run_episode(mech, generate_relative_waypoints(*s.candidate_axis, plan));
    return s;
  });
}

std::vector<Pose> perturb_waypoints(const std::vector<Pose>& waypoints, const Eigen::VectorXd& epsilon) {
  if (epsilon.size() != static_cast<Eigen::Index>(6 * waypoints.size())) {
    throw Error(ErrorKind::kInvalidArgument, "waypoint perturbation must have 6 components per waypoint");
  }
  std::vector<Pose> out = waypoints;
  for (std::size_t j = 0; j < out.size(); ++j) {
    const auto base = static_cast<Eigen::Index>(6 * j);
    out[j].translation += epsilon.segment<3>(base);
    out[j].rotation = out[j].rotation * exp_so3(epsilon.segment<3>(base + 3));
  }
  return out;
}

OptRun optimize_waypoint_space(const Mechanism& mech, const std::vector<Pose>& init_waypoints,
                               const CemConfig& config, const WaypointNoise& noise) {
  validate_cem_config(config);
  if (init_waypoints.size() < 2) {
    throw Error(ErrorKind::kInvalidArgument, "optimize_waypoint_space needs at least 2 waypoints");
  }
  const auto dim = static_cast<Eigen::Index>(6 * init_waypoints.size());
  Distribution dist{Eigen::VectorXd::Zero(dim), Eigen::VectorXd(dim)};
  for (Eigen::Index i = 0; i < dim; ++i) dist.std[i] = (i % 6) < 3 ? noise.sigma_pos : noise.sigma_rot;
  const Eigen::VectorXd floor = Eigen::VectorXd::Constant(dim, config.sigma_floor[0]);
  return run_cem(mech, dist, config, floor, [&](const Distribution& d, Rng& rng) {
    CemSample s;
    s.epsilon = draw(d, rng);
    s.episode = run_episode(mech, perturb_waypoints(init_waypoints, s.epsilon));
    return s;
  });
}

}  // namespace screwkit
