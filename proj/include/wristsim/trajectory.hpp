#pragma once

#include <wristsim/ik.hpp>

#include <vector>

// Pose-path following with configuration monitoring. The tracker solves
// each waypoint from the previous solution and reports where the
// configuration ran into trouble; deciding how to react (regrasp, abort,
// re-plan) is the caller's business.

namespace wristsim {

enum class EventCause { joint_limit, singularity, workspace_bound,
                        no_convergence };

const char* cause_name(EventCause cause);

/// A point along the path where the tracked configuration hit a monitor.
struct ConfigChangeEvent {
  int step = 0;
  EventCause cause = EventCause::joint_limit;
  int joint_index = -1;  ///< offending joint, -1 when not joint specific
};

struct TrackOptions {
  IkOptions ik;
  std::vector<int> locked;

  /// Optional task-specific joint windows (size dof, or empty to monitor
  /// nothing). Narrower than the chain limits; used for grasp-friendly
  /// operating ranges.
  VectorX<double> task_min, task_max;
  double limit_margin_rad = deg2rad(2.0);

  double singularity_threshold = 1e-4;

  bool monitor_bounds = false;
  Eigen::AlignedBox3d bounds;  ///< allowed tool positions, mm

  /// Monitors apply to joints below this index (the arm); wrist joints may
  /// ride their range stops by design.
  int monitored_dof = 6;
};

struct TrackResult {
  VectorX<double> q0;
  std::vector<VectorX<double>> joints;  ///< one entry per completed waypoint
  std::vector<ConfigChangeEvent> events;
  bool completed = true;

  VectorX<double> travel;          ///< per-joint cumulative |dq|, rad
  VectorX<double> max_excursion;   ///< per-joint max |q - q0|, rad
  double time_proxy_s = 0.0;       ///< sum over steps of max_j |dq_j|/speed_j
};

/// Follows the waypoints from q0. Stops at the first waypoint that fails to
/// converge (completed=false, waypoint recorded as a no_convergence event).
TrackResult track_trajectory(const Chain<double>& chain,
                             const std::vector<Isometry3d>& poses,
                             const VectorX<double>& q0,
                             const TrackOptions& opts = {});

/// Accounts one directly-commanded joint transition (no IK) in `log`.
void record_transition(const Chain<double>& chain, const VectorX<double>& to,
                       TrackResult& log);

/// Appends `extra` to `base`: joint rows, travel, time, events (with the
/// step offset applied) and excursion relative to base.q0. `extra` must
/// start where `base` ended.
void merge_into(TrackResult& base, const TrackResult& extra);

}  // namespace wristsim
