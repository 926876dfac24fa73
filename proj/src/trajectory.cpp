#include <wristsim/trajectory.hpp>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace wristsim {

const char* cause_name(EventCause cause) {
  switch (cause) {
    case EventCause::joint_limit: return "joint_limit";
    case EventCause::singularity: return "singularity";
    case EventCause::workspace_bound: return "workspace_bound";
    case EventCause::no_convergence: return "no_convergence";
  }
  return "unknown";
}

namespace {

void account_step(const Chain<double>& chain, const VectorX<double>& from,
                  const VectorX<double>& to, TrackResult& log) {
  double step_time = 0.0;
  for (int j = 0; j < chain.dof(); ++j) {
    const double dq = std::abs(to[j] - from[j]);
    log.travel[j] += dq;
    log.max_excursion[j] =
        std::max(log.max_excursion[j], std::abs(to[j] - log.q0[j]));
    step_time = std::max(step_time,
                         dq / chain.max_speed[static_cast<size_t>(j)]);
  }
  log.time_proxy_s += step_time;
}

TrackResult empty_log(const VectorX<double>& q0) {
  TrackResult r;
  r.q0 = q0;
  r.travel = VectorX<double>::Zero(q0.size());
  r.max_excursion = VectorX<double>::Zero(q0.size());
  return r;
}

}  // namespace

TrackResult track_trajectory(const Chain<double>& chain,
                             const std::vector<Isometry3d>& poses,
                             const VectorX<double>& q0,
                             const TrackOptions& opts) {
  validate(chain);
  const int n = chain.dof();
  if (q0.size() != n) {
    throw std::invalid_argument("track start size does not match chain dof");
  }
  const bool window =
      opts.task_min.size() == n && opts.task_max.size() == n;
  if ((opts.task_min.size() != 0 || opts.task_max.size() != 0) && !window) {
    throw std::invalid_argument("task window must be empty or sized to dof");
  }

  TrackResult r = empty_log(q0);
  std::vector<bool> at_limit(static_cast<size_t>(n), false);
  bool singular = false;
  bool outside = false;

  VectorX<double> q = q0;
  for (size_t i = 0; i < poses.size(); ++i) {
    const int step = static_cast<int>(i);
    const IkResult sol = solve_ik(chain, poses[i], q, opts.locked, opts.ik);
    if (!sol.converged) {
      r.events.push_back({step, EventCause::no_convergence, -1});
      r.completed = false;
      return r;
    }
    account_step(chain, q, sol.q, r);
    q = sol.q;
    r.joints.push_back(q);

    for (int j = 0; j < std::min(n, opts.monitored_dof); ++j) {
      bool hit = false;
      if (window) {
        hit = q[j] <= opts.task_min[j] + opts.limit_margin_rad ||
              q[j] >= opts.task_max[j] - opts.limit_margin_rad;
      }
      if (hit && !at_limit[static_cast<size_t>(j)]) {
        r.events.push_back({step, EventCause::joint_limit, j});
      }
      at_limit[static_cast<size_t>(j)] = hit;
    }

    if (n >= 6) {
      const bool now = manipulability(chain, q) < opts.singularity_threshold;
      if (now && !singular) {
        r.events.push_back({step, EventCause::singularity, -1});
      }
      singular = now;
    }

    if (opts.monitor_bounds) {
      const Eigen::Vector3d p = forward_kinematics(chain, q).translation();
      const bool now = !opts.bounds.contains(p);
      if (now && !outside) {
        r.events.push_back({step, EventCause::workspace_bound, -1});
      }
      outside = now;
    }
  }
  return r;
}

void record_transition(const Chain<double>& chain, const VectorX<double>& to,
                       TrackResult& log) {
  if (to.size() != chain.dof()) {
    throw std::invalid_argument("transition size does not match chain dof");
  }
  const VectorX<double> from = log.joints.empty() ? log.q0 : log.joints.back();
  account_step(chain, from, to, log);
  log.joints.push_back(to);
}

void merge_into(TrackResult& base, const TrackResult& extra) {
  const VectorX<double> tail = base.joints.empty() ? base.q0 : base.joints.back();
  if ((extra.q0 - tail).lpNorm<Eigen::Infinity>() > 1e-12) {
    throw std::invalid_argument("merged segment does not start where the "
                                "previous one ended");
  }
  const int offset = static_cast<int>(base.joints.size());
  base.travel += extra.travel;
  base.time_proxy_s += extra.time_proxy_s;
  for (const auto& q : extra.joints) {
    base.max_excursion =
        base.max_excursion.cwiseMax((q - base.q0).cwiseAbs());
    base.joints.push_back(q);
  }
  for (ConfigChangeEvent e : extra.events) {
    e.step += offset;
    base.events.push_back(e);
  }
  base.completed = base.completed && extra.completed;
}

}  // namespace wristsim
