#pragma once

#include <wristsim/scenario.hpp>
#include <wristsim/trajectory.hpp>

#include <string>
#include <vector>

// The two benchtop manipulation studies, each run twice: wrist active vs
// wrist locked at neutral. Both start from the same home posture and
// account joint travel, excursion and a time proxy over the whole run.
//
// Grasp convention: the palm faces the bench (fingers down), the grip
// closes on the object's +-y faces, and the object centre sits
// grasp_offset_mm ahead of the palm along the palm x axis. The feeder
// walls force this heading at every pick, so twist budgets always start
// from a neutral hand.

namespace wristsim {

struct RotationReport {
  bool wrist_enabled = false;
  double target_deg = 0.0;
  double delivered_deg = 0.0;
  double residual_deg = 0.0;
  double tilt_deg = 0.0;              ///< grasp tilt preset (flexion)
  double usable_per_grasp_deg = 0.0;  ///< planned twist capacity per grasp
  std::vector<double> twists_deg;     ///< planned per-grasp twist amounts
  int grasp_count = 0;
  int regrasp_events = 0;
  double grasp_time_s = 0.0;          ///< dwell part of the time proxy
  TrackResult log;
  bool completed = false;
};

struct CubeOutcome {
  int index = 0;                 ///< 1-based
  std::string rotation_label;    ///< e.g. "z+90", "x-90"
  double requested_deg = 0.0;
  double delivered_deg = 0.0;
  double tilt_preset_deg = 0.0;  ///< flexion preset used at the grasp
  double pos_err_mm = 0.0;       ///< horizontal distance to the slot centre
  double ori_err_deg = 0.0;      ///< full geodesic orientation error
  double tilt_err_deg = 0.0;     ///< up-axis misalignment only
  double drop_mm = 0.0;          ///< release height above the slot seat
  bool reoriented = false;
  bool stacked = false;
  std::vector<ConfigChangeEvent> events;  ///< steps local to the whole run
};

struct StackingReport {
  bool wrist_enabled = false;
  std::vector<CubeOutcome> cubes;
  int reoriented_count = 0;
  int stacked_count = 0;
  double grasp_time_s = 0.0;
  TrackResult log;
  bool completed = false;
};

/// Fixed joint-space seed used to solve the home posture.
VectorX<double> home_seed();

/// Palm pose at the start and end of every task run.
Isometry3d home_palm_pose(const TaskScenario& sc);

RotationReport run_rotation_task(const TaskScenario& sc, bool wrist_enabled);
StackingReport run_stacking_task(const TaskScenario& sc, bool wrist_enabled);

}  // namespace wristsim
