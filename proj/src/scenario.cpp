#include "wristsim/scenario.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "wristsim/chain_io.hpp"

namespace wristsim {
namespace {

using nlohmann::json;

bool finite(double v) { return std::isfinite(v); }

void get_if(const json& j, const char* key, double& out) {
  if (!j.contains(key)) return;
  if (!j[key].is_number()) throw config_error(std::string(key) + ": expected a number");
  out = j[key].get<double>();
}

void get_if(const json& j, const char* key, uint32_t& out) {
  if (!j.contains(key)) return;
  if (!j[key].is_number_unsigned()) throw config_error(std::string(key) + ": expected a non-negative integer");
  out = j[key].get<uint32_t>();
}

void get_if(const json& j, const char* key, std::string& out) {
  if (!j.contains(key)) return;
  if (!j[key].is_string()) throw config_error(std::string(key) + ": expected a string");
  out = j[key].get<std::string>();
}

template <size_t N>
void get_if(const json& j, const char* key, std::array<double, N>& out) {
  if (!j.contains(key)) return;
  if (!j[key].is_array() || j[key].size() != N)
    throw config_error(std::string(key) + ": expected an array of " + std::to_string(N) + " numbers");
  for (size_t i = 0; i < N; ++i) {
    if (!j[key][i].is_number()) throw config_error(std::string(key) + ": expected numbers");
    out[i] = j[key][i].get<double>();
  }
}

void parse_rotation(const json& j, RotationScenario& r) {
  get_if(j, "disc_center_x_mm", r.disc_center_x_mm);
  get_if(j, "disc_center_y_mm", r.disc_center_y_mm);
  get_if(j, "disc_radius_mm", r.disc_radius_mm);
  get_if(j, "hub_z_mm", r.hub_z_mm);
  get_if(j, "target_deg", r.target_deg);
  get_if(j, "twist_span_neg_deg", r.twist_span_neg_deg);
  get_if(j, "twist_span_pos_deg", r.twist_span_pos_deg);
  get_if(j, "tilt_max_deg", r.tilt_max_deg);
  get_if(j, "tilt_step_deg", r.tilt_step_deg);
}

void parse_stacking(const json& j, StackingScenario& s) {
  get_if(j, "cube_mm", s.cube_mm);
  get_if(j, "twist_span_neg_deg", s.twist_span_neg_deg);
  get_if(j, "twist_span_pos_deg", s.twist_span_pos_deg);
  get_if(j, "pick_x_mm", s.pick_x_mm);
  get_if(j, "pick_y_mm", s.pick_y_mm);
  get_if(j, "slot_x_mm", s.slot_x_mm);
  get_if(j, "slot_y_mm", s.slot_y_mm);
  get_if(j, "carry_z_mm", s.carry_z_mm);
  get_if(j, "place_tol_mm", s.place_tol_mm);
  get_if(j, "place_tol_deg", s.place_tol_deg);
}

}  // namespace

void validate_scenario(const TaskScenario& sc) {
  auto need = [](bool ok, const char* what) {
    if (!ok) throw config_error(what);
  };

  need(finite(sc.bench_x_min_mm) && finite(sc.bench_x_max_mm) && sc.bench_x_min_mm < sc.bench_x_max_mm,
       "bench x extent must be finite with min < max");
  need(finite(sc.bench_y_min_mm) && finite(sc.bench_y_max_mm) && sc.bench_y_min_mm < sc.bench_y_max_mm,
       "bench y extent must be finite with min < max");
  need(finite(sc.bench_margin_mm) && sc.bench_margin_mm >= 0.0, "bench_margin_mm must be >= 0");
  need(finite(sc.grasp_offset_mm) && sc.grasp_offset_mm > 0.0, "grasp_offset_mm must be > 0");
  need(finite(sc.approach_clearance_mm) && sc.approach_clearance_mm > 0.0, "approach_clearance_mm must be > 0");
  need(finite(sc.retreat_mm) && sc.retreat_mm > 0.0, "retreat_mm must be > 0");
  need(finite(sc.grasp_event_s) && sc.grasp_event_s >= 0.0, "grasp_event_s must be >= 0");
  need(finite(sc.limit_margin_deg) && sc.limit_margin_deg >= 0.0, "limit_margin_deg must be >= 0");
  need(finite(sc.singularity_threshold) && sc.singularity_threshold >= 0.0, "singularity_threshold must be >= 0");
  need(finite(sc.flange_y_clearance_mm), "flange_y_clearance_mm must be finite");
  need(finite(sc.flange_safe_z_mm) && sc.flange_safe_z_mm >= 0.0, "flange_safe_z_mm must be >= 0");
  need(finite(sc.flange_min_z_mm) && sc.flange_min_z_mm >= 0.0, "flange_min_z_mm must be >= 0");
  need(sc.wrist_rom == "standard" || sc.wrist_rom == "extended_deviation",
       "wrist_rom must be \"standard\" or \"extended_deviation\"");

  const RotationScenario& r = sc.rotation;
  need(finite(r.disc_radius_mm) && r.disc_radius_mm > 0.0, "rotation.disc_radius_mm must be > 0");
  need(finite(r.hub_z_mm) && r.hub_z_mm > 0.0, "rotation.hub_z_mm must be > 0");
  need(finite(r.target_deg), "rotation.target_deg must be finite");
  need(finite(r.twist_span_neg_deg) && r.twist_span_neg_deg < 0.0, "rotation.twist_span_neg_deg must be < 0");
  need(finite(r.twist_span_pos_deg) && r.twist_span_pos_deg > 0.0, "rotation.twist_span_pos_deg must be > 0");
  need(finite(r.tilt_max_deg) && r.tilt_max_deg >= 0.0 && r.tilt_max_deg <= 90.0,
       "rotation.tilt_max_deg must be in [0, 90]");
  need(finite(r.tilt_step_deg) && r.tilt_step_deg > 0.0, "rotation.tilt_step_deg must be > 0");

  const StackingScenario& s = sc.stacking;
  need(finite(s.cube_mm) && s.cube_mm > 0.0, "stacking.cube_mm must be > 0");
  need(finite(s.twist_span_neg_deg) && s.twist_span_neg_deg < 0.0, "stacking.twist_span_neg_deg must be < 0");
  need(finite(s.twist_span_pos_deg) && s.twist_span_pos_deg > 0.0, "stacking.twist_span_pos_deg must be > 0");
  for (double v : s.pick_x_mm) need(finite(v), "stacking.pick_x_mm must be finite");
  for (double v : s.pick_y_mm) need(finite(v), "stacking.pick_y_mm must be finite");
  for (double v : s.slot_x_mm) need(finite(v), "stacking.slot_x_mm must be finite");
  need(finite(s.slot_y_mm), "stacking.slot_y_mm must be finite");
  need(finite(s.carry_z_mm) && s.carry_z_mm > 0.0, "stacking.carry_z_mm must be > 0");
  need(finite(s.place_tol_mm) && s.place_tol_mm > 0.0, "stacking.place_tol_mm must be > 0");
  need(finite(s.place_tol_deg) && s.place_tol_deg > 0.0, "stacking.place_tol_deg must be > 0");

  // The disc centre is given in world coordinates and must sit on the bench.
  need(r.disc_center_x_mm - r.disc_radius_mm >= sc.bench_x_min_mm &&
           r.disc_center_x_mm + r.disc_radius_mm <= sc.bench_x_max_mm &&
           r.disc_center_y_mm - r.disc_radius_mm >= sc.bench_y_min_mm &&
           r.disc_center_y_mm + r.disc_radius_mm <= sc.bench_y_max_mm,
       "rotation disc overflows the bench");

  // Picks and slots must sit on the bench; neighbouring cubes may not overlap.
  const double by = sc.bench_y_max_mm - sc.bench_y_min_mm;
  const double half = s.cube_mm / 2.0;
  for (double x : s.pick_x_mm)
    need(x - half >= sc.bench_x_min_mm && x + half <= sc.bench_x_max_mm,
         "stacking picks overflow the bench in x");
  for (double y : s.pick_y_mm)
    need(y - half >= 0.0 && y + half <= by, "stacking picks overflow the bench in y");
  need(std::abs(s.pick_x_mm[1] - s.pick_x_mm[0]) >= s.cube_mm &&
           std::abs(s.pick_x_mm[2] - s.pick_x_mm[1]) >= s.cube_mm,
       "stacking pick columns closer than one cube width");
  need(std::abs(s.pick_y_mm[1] - s.pick_y_mm[0]) >= s.cube_mm,
       "stacking pick rows closer than one cube width");
  for (double x : s.slot_x_mm)
    need(x - half >= sc.bench_x_min_mm && x + half <= sc.bench_x_max_mm,
         "stacking slots overflow the bench in x");
  need(s.slot_y_mm - half >= 0.0 && s.slot_y_mm + half <= by, "stacking slots overflow the bench in y");
  need(std::abs(s.slot_x_mm[1] - s.slot_x_mm[0]) >= s.cube_mm, "stacking towers closer than one cube width");
  need(s.carry_z_mm >= 3.0 * s.cube_mm + sc.retreat_mm, "stacking.carry_z_mm too low to clear a full tower");
}

TaskScenario parse_scenario(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw config_error(std::string("scenario: ") + e.what());
  }
  if (!j.is_object()) throw config_error("scenario: top level must be an object");

  TaskScenario sc;
  get_if(j, "seed", sc.seed);
  get_if(j, "bench_x_min_mm", sc.bench_x_min_mm);
  get_if(j, "bench_x_max_mm", sc.bench_x_max_mm);
  get_if(j, "bench_y_min_mm", sc.bench_y_min_mm);
  get_if(j, "bench_y_max_mm", sc.bench_y_max_mm);
  get_if(j, "bench_margin_mm", sc.bench_margin_mm);
  get_if(j, "grasp_offset_mm", sc.grasp_offset_mm);
  get_if(j, "approach_clearance_mm", sc.approach_clearance_mm);
  get_if(j, "retreat_mm", sc.retreat_mm);
  get_if(j, "grasp_event_s", sc.grasp_event_s);
  get_if(j, "limit_margin_deg", sc.limit_margin_deg);
  get_if(j, "singularity_threshold", sc.singularity_threshold);
  get_if(j, "flange_y_clearance_mm", sc.flange_y_clearance_mm);
  get_if(j, "flange_safe_z_mm", sc.flange_safe_z_mm);
  get_if(j, "flange_min_z_mm", sc.flange_min_z_mm);
  get_if(j, "wrist_rom", sc.wrist_rom);
  if (j.contains("rotation")) {
    if (!j["rotation"].is_object()) throw config_error("rotation: expected an object");
    parse_rotation(j["rotation"], sc.rotation);
  }
  if (j.contains("stacking")) {
    if (!j["stacking"].is_object()) throw config_error("stacking: expected an object");
    parse_stacking(j["stacking"], sc.stacking);
  }

  validate_scenario(sc);
  return sc;
}

TaskScenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open scenario file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str());
}

std::string scenario_to_json(const TaskScenario& sc) {
  json j;
  j["seed"] = sc.seed;
  j["bench_x_min_mm"] = sc.bench_x_min_mm;
  j["bench_x_max_mm"] = sc.bench_x_max_mm;
  j["bench_y_min_mm"] = sc.bench_y_min_mm;
  j["bench_y_max_mm"] = sc.bench_y_max_mm;
  j["bench_margin_mm"] = sc.bench_margin_mm;
  j["grasp_offset_mm"] = sc.grasp_offset_mm;
  j["approach_clearance_mm"] = sc.approach_clearance_mm;
  j["retreat_mm"] = sc.retreat_mm;
  j["grasp_event_s"] = sc.grasp_event_s;
  j["limit_margin_deg"] = sc.limit_margin_deg;
  j["singularity_threshold"] = sc.singularity_threshold;
  j["flange_y_clearance_mm"] = sc.flange_y_clearance_mm;
  j["flange_safe_z_mm"] = sc.flange_safe_z_mm;
  j["flange_min_z_mm"] = sc.flange_min_z_mm;
  j["wrist_rom"] = sc.wrist_rom;

  json r;
  r["disc_center_x_mm"] = sc.rotation.disc_center_x_mm;
  r["disc_center_y_mm"] = sc.rotation.disc_center_y_mm;
  r["disc_radius_mm"] = sc.rotation.disc_radius_mm;
  r["hub_z_mm"] = sc.rotation.hub_z_mm;
  r["target_deg"] = sc.rotation.target_deg;
  r["twist_span_neg_deg"] = sc.rotation.twist_span_neg_deg;
  r["twist_span_pos_deg"] = sc.rotation.twist_span_pos_deg;
  r["tilt_max_deg"] = sc.rotation.tilt_max_deg;
  r["tilt_step_deg"] = sc.rotation.tilt_step_deg;
  j["rotation"] = r;

  json s;
  s["cube_mm"] = sc.stacking.cube_mm;
  s["twist_span_neg_deg"] = sc.stacking.twist_span_neg_deg;
  s["twist_span_pos_deg"] = sc.stacking.twist_span_pos_deg;
  s["pick_x_mm"] = sc.stacking.pick_x_mm;
  s["pick_y_mm"] = sc.stacking.pick_y_mm;
  s["slot_x_mm"] = sc.stacking.slot_x_mm;
  s["slot_y_mm"] = sc.stacking.slot_y_mm;
  s["carry_z_mm"] = sc.stacking.carry_z_mm;
  s["place_tol_mm"] = sc.stacking.place_tol_mm;
  s["place_tol_deg"] = sc.stacking.place_tol_deg;
  j["stacking"] = s;

  return j.dump(2) + "\n";
}

}  // namespace wristsim
