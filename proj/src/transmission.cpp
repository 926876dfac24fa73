#include <wristsim/transmission.hpp>

#include <nlohmann/json.hpp>
#include <wristsim/chain_io.hpp>

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace wristsim {

const char* role_name(ServoRole role) {
  switch (role) {
    case ServoRole::finger_flex: return "finger_flex";
    case ServoRole::finger_ext: return "finger_ext";
    case ServoRole::wrist_dev: return "wrist_dev";
    case ServoRole::wrist_flex: return "wrist_flex";
  }
  return "unknown";
}

namespace {

ServoRole role_from_name(const std::string& name) {
  if (name == "finger_flex") return ServoRole::finger_flex;
  if (name == "finger_ext") return ServoRole::finger_ext;
  if (name == "wrist_dev") return ServoRole::wrist_dev;
  if (name == "wrist_flex") return ServoRole::wrist_flex;
  throw config_error("unknown servo role: " + name);
}

[[noreturn]] void throw_tick_range(ServoRole role, long long ticks) {
  throw std::out_of_range(std::string(role_name(role)) +
                          ": tick position " + std::to_string(ticks) +
                          " outside [0, 4095]");
}

}  // namespace

double servo_to_angle(const ServoCalibration& cal, int ticks) {
  if (ticks < 0 || ticks > 4095) throw_tick_range(cal.role, ticks);
  return (ticks - cal.center_ticks) * cal.gain_rad_per_tick;
}

int angle_to_servo(const ServoCalibration& cal, double angle_rad) {
  if (!std::isfinite(angle_rad)) {
    throw std::out_of_range(std::string(role_name(cal.role)) +
                            ": non-finite angle");
  }
  const long long ticks =
      cal.center_ticks + std::llround(angle_rad / cal.gain_rad_per_tick);
  if (ticks < 0 || ticks > 4095) throw_tick_range(cal.role, ticks);
  return static_cast<int>(ticks);
}

ServoBank ServoBank::defaults() {
  ServoBank bank;
  bank.servos[0].id = 1;
  bank.servos[0].role = ServoRole::finger_flex;
  bank.servos[1].id = 2;
  bank.servos[1].role = ServoRole::finger_ext;
  bank.servos[2].id = 3;
  bank.servos[2].role = ServoRole::wrist_dev;
  bank.servos[3].id = 4;
  bank.servos[3].role = ServoRole::wrist_flex;
  return bank;
}

const ServoCalibration& ServoBank::by_role(ServoRole role) const {
  for (const auto& s : servos) {
    if (s.role == role) return s;
  }
  throw std::logic_error(std::string("no servo with role ") + role_name(role));
}

void ServoBank::validate() const {
  bool role_seen[4] = {};
  for (const auto& s : servos) {
    if (s.id < 0 || s.id > 253) {
      throw config_error("servo id outside [0, 253]: " + std::to_string(s.id));
    }
    if (!(s.gain_rad_per_tick != 0.0) || !std::isfinite(s.gain_rad_per_tick)) {
      throw config_error(std::string(role_name(s.role)) + ": bad gain");
    }
    if (s.center_ticks < 0 || s.center_ticks > 4095) {
      throw config_error(std::string(role_name(s.role)) + ": bad center");
    }
    if (!(s.speed_ticks_per_s > 0.0)) {
      throw config_error(std::string(role_name(s.role)) + ": bad speed");
    }
    for (const auto& t : servos) {
      if (&s != &t && s.id == t.id) {
        throw config_error("duplicate servo id: " + std::to_string(s.id));
      }
    }
    role_seen[static_cast<int>(s.role)] = true;
  }
  for (int r = 0; r < 4; ++r) {
    if (!role_seen[r]) {
      throw config_error(std::string("missing servo role: ") +
                         role_name(static_cast<ServoRole>(r)));
    }
  }
}

ServoBank parse_calibration(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw config_error(std::string("calibration parse: ") + e.what());
  }
  if (!j.contains("servos") || !j["servos"].is_array() ||
      j["servos"].size() != 4) {
    throw config_error("calibration needs a 4-entry \"servos\" array");
  }
  ServoBank bank;
  for (size_t i = 0; i < 4; ++i) {
    const auto& e = j["servos"][i];
    ServoCalibration& cal = bank.servos[i];
    try {
      cal.id = e.at("id").get<int>();
      cal.role = role_from_name(e.at("role").get<std::string>());
      if (e.contains("center_ticks")) cal.center_ticks = e["center_ticks"];
      if (e.contains("gain_rad_per_tick")) {
        cal.gain_rad_per_tick = e["gain_rad_per_tick"];
      }
      if (e.contains("speed_ticks_per_s")) {
        cal.speed_ticks_per_s = e["speed_ticks_per_s"];
      }
    } catch (const nlohmann::json::exception& ex) {
      throw config_error("calibration servo " + std::to_string(i) + ": " +
                         ex.what());
    }
  }
  bank.validate();
  return bank;
}

ServoBank load_calibration(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open calibration file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_calibration(buf.str());
}

std::string calibration_to_json(const ServoBank& bank) {
  nlohmann::json j;
  j["servos"] = nlohmann::json::array();
  for (const auto& s : bank.servos) {
    j["servos"].push_back({{"id", s.id},
                           {"role", role_name(s.role)},
                           {"center_ticks", s.center_ticks},
                           {"gain_rad_per_tick", s.gain_rad_per_tick},
                           {"speed_ticks_per_s", s.speed_ticks_per_s}});
  }
  return j.dump(2) + "\n";
}

TendonState finger_tendon_displacement(double s, const WristState& w,
                                       const TendonParams& params) {
  if (!(s >= 0.0 && s <= 1.0)) {
    throw std::domain_error("synergy value out of [0, 1]: " +
                            std::to_string(s));
  }
  const double wrist_pull =
      params.k1_mm_per_rad * w.deviation + params.k2_mm_per_rad * w.flexion;
  TendonState t;
  t.flexor_mm = s * params.stroke_mm + wrist_pull;
  t.extensor_mm = (1.0 - s) * params.stroke_mm - wrist_pull;
  return t;
}

WristCommand wrist_command(const WristState& w, const ServoBank& bank) {
  WristCommand cmd;
  cmd.deviation_ticks =
      angle_to_servo(bank.by_role(ServoRole::wrist_dev), w.deviation);
  cmd.flexion_ticks =
      angle_to_servo(bank.by_role(ServoRole::wrist_flex), w.flexion);
  return cmd;
}

}  // namespace wristsim
