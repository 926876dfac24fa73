#pragma once

#include <wristsim/wrist_hand.hpp>

#include <array>
#include <string>

// Mapping between joint space and the four bus servos that drive the hand:
// an antagonistic flexor/extensor pair sharing one grasp stroke, plus one
// servo per wrist joint.

namespace wristsim {

enum class ServoRole { finger_flex, finger_ext, wrist_dev, wrist_flex };

const char* role_name(ServoRole role);

/// Per-servo conversion between raw position ticks and joint angle.
struct ServoCalibration {
  int id = 0;
  ServoRole role = ServoRole::finger_flex;
  int center_ticks = 2048;            ///< tick count at zero angle
  double gain_rad_per_tick = pi_v<double> * 2.0 / 4096.0;
  double speed_ticks_per_s = 500.0;
};

/// Tick position to joint angle. Ticks outside [0, 4095] throw
/// std::out_of_range naming the servo role.
double servo_to_angle(const ServoCalibration& cal, int ticks);

/// Joint angle to the nearest tick position, rounding halfway cases away
/// from zero offset so the map is odd around the centre. Angles whose tick
/// lands outside [0, 4095] throw std::out_of_range naming the servo role.
int angle_to_servo(const ServoCalibration& cal, double angle_rad);

/// The four servos of the shipped hand, ids 1..4.
struct ServoBank {
  std::array<ServoCalibration, 4> servos;

  static ServoBank defaults();
  const ServoCalibration& by_role(ServoRole role) const;
  void validate() const;  ///< unique ids in [0, 253], every role exactly once
};

ServoBank parse_calibration(const std::string& json_text);
ServoBank load_calibration(const std::string& path);
std::string calibration_to_json(const ServoBank& bank);

/// Cable routing parameters. The antagonistic pair shares one stroke, so
/// flexor + extensor displacement is the stroke length for every state.
/// k1/k2 couple wrist deviation/flexion into the finger tendons; sheathed
/// routing removes that coupling entirely.
struct TendonParams {
  double stroke_mm = 40.0;
  double k1_mm_per_rad = 0.0;
  double k2_mm_per_rad = 0.0;

  static TendonParams sheathed() { return {40.0, 0.0, 0.0}; }
  static TendonParams unsheathed() { return {40.0, 2.0, 5.0}; }
};

struct TendonState {
  double flexor_mm = 0.0;
  double extensor_mm = 0.0;
};

/// Finger tendon displacement for grasp synergy s in [0, 1] at the given
/// wrist posture. s outside [0, 1] throws.
TendonState finger_tendon_displacement(
    double s, const WristState& w,
    const TendonParams& params = TendonParams::sheathed());

struct WristCommand {
  int deviation_ticks = 0;
  int flexion_ticks = 0;
};

/// Tick targets for the two wrist servos at the given posture.
WristCommand wrist_command(const WristState& w,
                           const ServoBank& bank = ServoBank::defaults());

}  // namespace wristsim
