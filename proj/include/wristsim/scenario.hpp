#pragma once

#include <array>
#include <cstdint>
#include <string>

// Desk-scale task setups shared by the rotation and stacking runs. World
// frame: arm base at the origin, z up, the bench surface at z = 0 on the
// +y side. All compiled-in values here are the source of truth; JSON
// configs override individual fields.

namespace wristsim {

struct RotationScenario {
  // Disc flat on the bench, spun about its vertical axis by twisting a hub
  // knob at the centre. The centre is given in world mm.
  double disc_center_x_mm = 0.0;
  double disc_center_y_mm = 350.0;
  double disc_radius_mm = 60.0;
  double hub_z_mm = 30.0;         ///< knob centre height
  double target_deg = 90.0;       ///< signed, positive is ccw from above
  // Allowed forearm roll excursion while holding the knob, measured from
  // the posture where the twist begins.
  double twist_span_neg_deg = -40.0;
  double twist_span_pos_deg = 40.0;
  // Grasp tilt search (wrist condition only).
  double tilt_max_deg = 90.0;
  double tilt_step_deg = 1.0;
};

struct StackingScenario {
  double cube_mm = 50.0;
  // Forearm roll window while holding a cube, measured from the posture
  // where the reorientation begins. Asymmetric: cable wrap tolerates more
  // positive roll. A ccw object rotation consumes negative roll here
  // because the mount axis points down through the palm.
  double twist_span_neg_deg = -82.0;
  double twist_span_pos_deg = 95.0;
  // Feeder grid: three columns by two rows of cubes, walls along +-x, so
  // every pick happens at the canonical heading. x in world mm, y measured
  // from the bench front edge.
  std::array<double, 3> pick_x_mm{-60.0, 0.0, 60.0};
  std::array<double, 2> pick_y_mm{40.0, 100.0};
  // Two tower slots behind the feeder, same coordinates.
  std::array<double, 2> slot_x_mm{-26.0, 26.0};
  double slot_y_mm = 160.0;
  double carry_z_mm = 230.0;      ///< object centre height for transfers
  double place_tol_mm = 5.0;
  double place_tol_deg = 5.0;
};

struct TaskScenario {
  uint32_t seed = 0;

  // Bench surface extent in world mm (x across, y away from the base).
  double bench_x_min_mm = -100.0;
  double bench_x_max_mm = 100.0;
  double bench_y_min_mm = 250.0;
  double bench_y_max_mm = 450.0;
  double bench_margin_mm = 20.0;  ///< tool excursion allowed past the edge

  double grasp_offset_mm = 30.0;  ///< object centre ahead of the palm
  double approach_clearance_mm = 80.0;
  double retreat_mm = 50.0;
  double grasp_event_s = 2.0;     ///< charged per grasp and per release

  double limit_margin_deg = 2.0;
  double singularity_threshold = 1e-4;

  // Forearm-structure keep-out: the flange may not dip low in front of the
  // bench edge, and never below a hard floor.
  double flange_y_clearance_mm = 20.0;
  double flange_safe_z_mm = 200.0;
  double flange_min_z_mm = 40.0;

  std::string wrist_rom = "standard";  ///< or "extended_deviation"

  RotationScenario rotation;
  StackingScenario stacking;
};

/// Throws config_error when a field is out of range or inconsistent.
void validate_scenario(const TaskScenario& sc);

TaskScenario parse_scenario(const std::string& json_text);
TaskScenario load_scenario(const std::string& path);
std::string scenario_to_json(const TaskScenario& sc);

}  // namespace wristsim
