#include <wristsim/chain_io.hpp>

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <sstream>

namespace wristsim {

using nlohmann::json;

namespace {

double require_number(const json& j, const char* key, size_t row) {
  if (!j.contains(key) || !j[key].is_number())
    throw config_error("chain joint " + std::to_string(row) +
                       ": missing numeric field '" + key + "'");
  return j[key].get<double>();
}

}  // namespace

Chaind parse_chain(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw config_error(std::string("chain: invalid JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("joints") || !j["joints"].is_array() ||
      j["joints"].empty())
    throw config_error("chain: expected an object with a non-empty 'joints' array");

  const auto& joints = j["joints"];
  const auto n = Eigen::Index(joints.size());
  Chaind c;
  c.limit_min.resize(n);
  c.limit_max.resize(n);
  c.max_speed.resize(n);
  for (size_t i = 0; i < joints.size(); ++i) {
    const auto& row = joints[i];
    c.rows.push_back({require_number(row, "a", i), require_number(row, "alpha", i),
                      require_number(row, "d", i),
                      require_number(row, "theta_offset", i)});
    c.limit_min[Eigen::Index(i)] = require_number(row, "limit_min", i);
    c.limit_max[Eigen::Index(i)] = require_number(row, "limit_max", i);
    c.max_speed[Eigen::Index(i)] = require_number(row, "speed", i);
  }
  try {
    validate(c);
  } catch (const std::invalid_argument& e) {
    throw config_error(std::string("chain: ") + e.what());
  }
  return c;
}

Chaind load_chain(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("chain: cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_chain(ss.str());
}

std::string chain_to_json(const Chaind& chain) {
  json joints = json::array();
  for (Eigen::Index i = 0; i < chain.dof(); ++i) {
    const auto& r = chain.rows[size_t(i)];
    joints.push_back({{"a", r.a},
                      {"alpha", r.alpha},
                      {"d", r.d},
                      {"theta_offset", r.theta_offset},
                      {"limit_min", chain.limit_min[i]},
                      {"limit_max", chain.limit_max[i]},
                      {"speed", chain.max_speed[i]}});
  }
  return json{{"joints", joints}}.dump(2) + "\n";
}

Chaind default_arm_chain() {
  constexpr double kPi = pi_v<double>;
  Chaind c;
  // a, alpha, d, theta_offset (mm / rad)
  c.rows = {{0.0, kPi / 2, 89.159, 0.0}, {425.0, 0.0, 0.0, 0.0},
            {392.25, 0.0, 0.0, 0.0},     {0.0, kPi / 2, 109.15, 0.0},
            {0.0, -kPi / 2, 94.65, 0.0}, {0.0, 0.0, 82.3, 0.0}};
  c.limit_min = VectorX<double>::Constant(6, -2 * kPi);
  c.limit_max = VectorX<double>::Constant(6, 2 * kPi);
  c.max_speed = VectorX<double>::Constant(6, kPi);  // 180 deg/s
  return c;
}

Chaind default_wrist_chain() {
  constexpr double kPi = pi_v<double>;
  Chaind c;
  c.rows = {{34.0, kPi / 2, 0.0, 0.0}, {48.0, 0.0, 0.0, 0.0}};
  c.limit_min = VectorX<double>(2);
  c.limit_min << deg2rad(-30.0), deg2rad(-90.0);
  c.limit_max = VectorX<double>(2);
  c.limit_max << deg2rad(30.0), deg2rad(90.0);
  c.max_speed = VectorX<double>::Constant(2, deg2rad(270.0));
  return c;
}

Chaind mount_wrist_on_arm(const Chaind& arm, const Chaind& wrist,
                          double mount_length_mm) {
  validate(arm);
  validate(wrist);
  if (!(mount_length_mm >= 0.0) || !std::isfinite(mount_length_mm))
    throw std::invalid_argument("mount_wrist_on_arm: mount length must be finite and >= 0");
  const DHRowd& last = arm.rows.back();
  if (last.a != 0.0 || last.alpha != 0.0)
    throw std::invalid_argument(
        "mount_wrist_on_arm: arm's last row must have a == 0 and alpha == 0 "
        "for the mount frame change to fold into it");

  constexpr double kPi = pi_v<double>;
  auto wrap = [](double x) {
    while (x > kPi) x -= 2 * kPi;
    while (x <= -kPi) x += 2 * kPi;
    return x;
  };

  Chaind arm_m = arm;
  arm_m.rows.back().theta_offset = wrap(last.theta_offset + kPi / 2);
  arm_m.rows.back().alpha = kPi / 2;
  arm_m.rows.back().d += mount_length_mm;

  Chaind wrist_m = wrist;
  wrist_m.rows.front().theta_offset =
      wrap(wrist.rows.front().theta_offset + kPi / 2);

  return compose_chains(arm_m, wrist_m);
}

}  // namespace wristsim
