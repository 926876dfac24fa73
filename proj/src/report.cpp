#include <wristsim/report.hpp>

#include <wristsim/trajectory.hpp>

#include <json.hpp>

#include <cstdio>

namespace wristsim {
namespace {

using nlohmann::json;

json events_json(const std::vector<ConfigChangeEvent>& events) {
  json arr = json::array();
  for (const auto& e : events) {
    json ev;
    ev["step"] = e.step;
    ev["cause"] = cause_name(e.cause);
    ev["joint"] = e.joint_index;
    arr.push_back(ev);
  }
  return arr;
}

json deg_array(const VectorX<double>& v) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(rad2deg(v[i]));
  return arr;
}

json log_json(const TrackResult& log) {
  json j;
  j["waypoints"] = log.joints.size();
  j["time_proxy_s"] = log.time_proxy_s;
  j["completed"] = log.completed;
  j["events"] = events_json(log.events);
  j["travel_deg"] = deg_array(log.travel);
  j["max_excursion_deg"] = deg_array(log.max_excursion);
  return j;
}

json rotation_json(const RotationReport& r) {
  json j;
  j["task"] = "rotation";
  j["wrist"] = r.wrist_enabled ? "on" : "off";
  j["target_deg"] = r.target_deg;
  j["delivered_deg"] = r.delivered_deg;
  j["residual_deg"] = r.residual_deg;
  j["tilt_deg"] = r.tilt_deg;
  j["usable_per_grasp_deg"] = r.usable_per_grasp_deg;
  j["twists_deg"] = r.twists_deg;
  j["grasp_count"] = r.grasp_count;
  j["regrasp_events"] = r.regrasp_events;
  j["grasp_time_s"] = r.grasp_time_s;
  j["completed"] = r.completed;
  j["motion"] = log_json(r.log);
  return j;
}

json cube_json(const CubeOutcome& c) {
  json j;
  j["index"] = c.index;
  j["rotation"] = c.rotation_label;
  j["requested_deg"] = c.requested_deg;
  j["delivered_deg"] = c.delivered_deg;
  j["tilt_preset_deg"] = c.tilt_preset_deg;
  j["pos_err_mm"] = c.pos_err_mm;
  j["ori_err_deg"] = c.ori_err_deg;
  j["tilt_err_deg"] = c.tilt_err_deg;
  j["drop_mm"] = c.drop_mm;
  j["reoriented"] = c.reoriented;
  j["stacked"] = c.stacked;
  j["events"] = events_json(c.events);
  return j;
}

json stacking_json(const StackingReport& r) {
  json j;
  j["task"] = "stacking";
  j["wrist"] = r.wrist_enabled ? "on" : "off";
  json cubes = json::array();
  for (const auto& c : r.cubes) cubes.push_back(cube_json(c));
  j["cubes"] = cubes;
  j["reoriented_count"] = r.reoriented_count;
  j["stacked_count"] = r.stacked_count;
  j["grasp_time_s"] = r.grasp_time_s;
  j["completed"] = r.completed;
  j["motion"] = log_json(r.log);
  return j;
}

int count_joint_limits(const TrackResult& log) {
  int n = 0;
  for (const auto& e : log.events)
    if (e.cause == EventCause::joint_limit) ++n;
  return n;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace

std::string rotation_report_to_json(const RotationReport& r) {
  return dump(rotation_json(r));
}

std::string stacking_report_to_json(const StackingReport& r) {
  return dump(stacking_json(r));
}

std::string rotation_compare_to_json(const RotationReport& off,
                                     const RotationReport& on) {
  json j;
  j["task"] = "rotation";
  j["wrist_off"] = rotation_json(off);
  j["wrist_on"] = rotation_json(on);
  json s;
  s["grasps_off"] = off.grasp_count;
  s["grasps_on"] = on.grasp_count;
  s["regrasps_off"] = off.regrasp_events;
  s["regrasps_on"] = on.regrasp_events;
  s["joint_limit_events_off"] = count_joint_limits(off.log);
  s["joint_limit_events_on"] = count_joint_limits(on.log);
  s["time_proxy_ratio_on_over_off"] =
      off.log.time_proxy_s > 0.0 ? on.log.time_proxy_s / off.log.time_proxy_s
                                 : 0.0;
  j["summary"] = s;
  return dump(j);
}

std::string stacking_compare_to_json(const StackingReport& off,
                                     const StackingReport& on) {
  json j;
  j["task"] = "stacking";
  j["wrist_off"] = stacking_json(off);
  j["wrist_on"] = stacking_json(on);
  json s;
  s["reoriented_off"] = off.reoriented_count;
  s["reoriented_on"] = on.reoriented_count;
  s["stacked_off"] = off.stacked_count;
  s["stacked_on"] = on.stacked_count;
  // Joint 4 drives the elbow swing; its excursion is the posture cost of
  // reorienting without the wrist.
  const double eo = off.log.max_excursion.size() > 3
                        ? rad2deg(off.log.max_excursion[3])
                        : 0.0;
  const double en =
      on.log.max_excursion.size() > 3 ? rad2deg(on.log.max_excursion[3]) : 0.0;
  s["elbow_excursion_deg_off"] = eo;
  s["elbow_excursion_deg_on"] = en;
  s["elbow_excursion_ratio_on_over_off"] = eo > 0.0 ? en / eo : 0.0;
  s["time_proxy_ratio_on_over_off"] =
      off.log.time_proxy_s > 0.0 ? on.log.time_proxy_s / off.log.time_proxy_s
                                 : 0.0;
  j["summary"] = s;
  return dump(j);
}

std::string joints_csv(const TrackResult& log) {
  const Eigen::Index n = log.q0.size();
  std::string out = "step";
  char buf[64];
  for (Eigen::Index j = 0; j < n; ++j) {
    std::snprintf(buf, sizeof buf, ",q%lld_deg", static_cast<long long>(j + 1));
    out += buf;
  }
  out += "\n";
  auto row = [&](size_t step, const VectorX<double>& q) {
    std::snprintf(buf, sizeof buf, "%zu", step);
    out += buf;
    for (Eigen::Index j = 0; j < n; ++j) {
      std::snprintf(buf, sizeof buf, ",%.6f", rad2deg(q[j]));
      out += buf;
    }
    out += "\n";
  };
  row(0, log.q0);
  for (size_t i = 0; i < log.joints.size(); ++i) row(i + 1, log.joints[i]);
  return out;
}

}  // namespace wristsim
