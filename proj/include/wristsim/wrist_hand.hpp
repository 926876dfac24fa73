#pragma once

#include <wristsim/kinematics.hpp>

#include <array>
#include <string>
#include <vector>

// 2-DoF wrist (radial/ulnar deviation, then flexion/extension) carrying an
// underactuated five-finger hand driven by a single open/close synergy.

namespace wristsim {

/// Wrist joint angles, rad. Positive deviation is toward the little finger
/// (ulnar); positive flexion folds toward the palm.
struct WristState {
  double deviation = 0.0;
  double flexion = 0.0;
};

/// Range of motion box for the two wrist joints.
struct RomLimits {
  double deviation_min, deviation_max;
  double flexion_min, flexion_max;

  /// Shipped hardware range: +-30 deg deviation, +-90 deg flexion.
  static RomLimits standard() {
    return {deg2rad(-30.0), deg2rad(30.0), deg2rad(-90.0), deg2rad(90.0)};
  }
  /// Alternative preset with the deviation range widened to +-45 deg.
  static RomLimits extended_deviation() {
    return {deg2rad(-45.0), deg2rad(45.0), deg2rad(-90.0), deg2rad(90.0)};
  }
};

/// True when both joints lie inside the (closed) range box.
bool in_rom(const WristState& w, const RomLimits& rom = RomLimits::standard());

/// Throws std::domain_error naming the offending joint when out of range.
void require_in_rom(const WristState& w,
                    const RomLimits& rom = RomLimits::standard());

/// Palm-centre pose in the wrist base frame. Range is NOT enforced here:
/// workspace sampling deliberately sweeps the boundary.
Isometry3d wrist_fk(const WristState& w);

/// Fixed geometry of the hand. Lengths mm, angles rad.
struct HandGeometry {
  double height_mm = 164.6;
  double finger_length_mm = 81.6;
  /// Metacarpal splay of thumb, index, middle, ring, little.
  std::array<double, 5> finger_base_angles{deg2rad(-146.8), deg2rad(-10.0),
                                           deg2rad(0.0), deg2rad(8.0),
                                           deg2rad(12.2)};
  /// Full-close angles of the MCP, PIP and DIP joints of every finger.
  std::array<double, 3> joint_close_angles{deg2rad(90.0), deg2rad(100.0),
                                           deg2rad(80.0)};
};

/// Finger joint angles produced by the single grasp synergy s in [0, 1].
/// 15 values: five fingers (thumb..little) times (MCP, PIP, DIP), each a
/// linear, monotone ramp from 0 to its close angle. s outside [0, 1] throws.
std::array<double, 15> synergy_expand(double s,
                                      const HandGeometry& hand = HandGeometry{});

/// One sampled wrist pose: joint angles (rad) and palm-centre position (mm).
struct WorkspaceSample {
  double deviation = 0.0;
  double flexion = 0.0;
  Eigen::Vector3d p = Eigen::Vector3d::Zero();
};

/// Samples the palm-centre workspace over the range box on a regular grid.
/// The grid on each axis starts at the lower bound and ascends by `step_rad`;
/// zero and the upper bound are always included so the extremes of the sweep
/// are exact for any step. Samples are ordered lexicographically by
/// (deviation, flexion). step_rad must lie in (0, pi].
std::vector<WorkspaceSample> palm_workspace(
    double step_rad, const RomLimits& rom = RomLimits::standard());

struct WorkspaceExtent {
  double max_norm_mm = 0.0;   ///< farthest palm centre from the wrist base
  double z_min_mm = 0.0;
  double z_max_mm = 0.0;
};

WorkspaceExtent workspace_extent(const std::vector<WorkspaceSample>& samples);

/// CSV with header theta1_deg,theta2_deg,x_mm,y_mm,z_mm, one row per sample
/// in the sampled order, all values printed with six decimals.
std::string workspace_csv(const std::vector<WorkspaceSample>& samples);

/// Standalone SVG with top (x-y) and side (x-z) projections of the samples.
std::string workspace_svg(const std::vector<WorkspaceSample>& samples);

/// Comparison of an achieved range against the functional target range for
/// activities of daily living (flexion 54, extension 60, ulnar 40, radial
/// 17 deg). Direction mapping assumes positive deviation is ulnar and
/// positive flexion is palmar flexion.
struct RomCoverage {
  std::string direction;
  double achieved_deg = 0.0;
  double target_deg = 0.0;
  bool met = false;
};

std::array<RomCoverage, 4> ideal_rom_coverage(
    const RomLimits& rom = RomLimits::standard());

}  // namespace wristsim
