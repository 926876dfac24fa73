#include <wristsim/chain_io.hpp>
#include <wristsim/report.hpp>
#include <wristsim/scenario.hpp>
#include <wristsim/servo_bus.hpp>
#include <wristsim/tasks.hpp>
#include <wristsim/transmission.hpp>
#include <wristsim/wrist_hand.hpp>

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

// Command line front end. All outputs are deterministic: fixed file names,
// no timestamps, stable field order, so identical invocations produce byte
// identical files.
//
// Exit codes: 0 success, 2 bad command line or configuration, 3 the
// simulation ran but did not meet its objective, 4 filesystem trouble.

namespace fs = std::filesystem;
using namespace wristsim;

namespace {

struct io_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw io_error("cannot open for writing: " + path.string());
  out << content;
  if (!out) throw io_error("write failed: " + path.string());
  std::printf("wrote %s\n", path.string().c_str());
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot read: " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path prepare_out_dir(const std::string& out) {
  fs::path dir(out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw io_error("cannot create output directory: " + out);
  return dir;
}

void require_readable(const std::string& path) {
  if (!fs::exists(fs::path(path)))
    throw io_error("cannot read: " + path);
}

TaskScenario load_or_default(const std::string& config, uint32_t seed,
                             bool seed_set) {
  if (!config.empty()) require_readable(config);
  TaskScenario sc = config.empty() ? TaskScenario{} : load_scenario(config);
  if (seed_set) sc.seed = seed;
  validate_scenario(sc);
  return sc;
}

int run_workspace(double step_deg, const std::string& rom_name,
                  const std::string& format, const fs::path& out) {
  const RomLimits rom = rom_name == "extended_deviation"
                            ? RomLimits::extended_deviation()
                            : RomLimits::standard();
  const auto samples = palm_workspace(deg2rad(step_deg), rom);
  const WorkspaceExtent ext = workspace_extent(samples);

  if (format == "csv") {
    write_file(out / "workspace.csv", workspace_csv(samples));
  } else if (format == "svg") {
    write_file(out / "workspace.svg", workspace_svg(samples));
  } else {
    std::string j = "{\n";
    char buf[160];
    std::snprintf(buf, sizeof buf, "  \"samples\": %zu,\n", samples.size());
    j += buf;
    j += "  \"rom\": \"" + rom_name + "\",\n";
    std::snprintf(buf, sizeof buf, "  \"step_deg\": %.6f,\n", step_deg);
    j += buf;
    std::snprintf(buf, sizeof buf,
                  "  \"extent\": {\"max_norm_mm\": %.6f, \"z_min_mm\": %.6f, "
                  "\"z_max_mm\": %.6f},\n",
                  ext.max_norm_mm, ext.z_min_mm, ext.z_max_mm);
    j += buf;
    j += "  \"coverage\": [\n";
    const auto cover = ideal_rom_coverage(rom);
    for (size_t i = 0; i < cover.size(); ++i) {
      std::snprintf(buf, sizeof buf,
                    "    {\"direction\": \"%s\", \"achieved_deg\": %.6f, "
                    "\"target_deg\": %.6f, \"met\": %s}%s\n",
                    cover[i].direction.c_str(), cover[i].achieved_deg,
                    cover[i].target_deg, cover[i].met ? "true" : "false",
                    i + 1 < cover.size() ? "," : "");
      j += buf;
    }
    j += "  ]\n}\n";
    write_file(out / "workspace.json", j);
  }
  std::printf("workspace: %zu samples, reach %.1f mm, z [%.1f, %.1f] mm\n",
              samples.size(), ext.max_norm_mm, ext.z_min_mm, ext.z_max_mm);
  return 0;
}

int run_task_cmd(const std::string& which, bool wrist_on,
                 const TaskScenario& sc, const fs::path& out) {
  const char* cond = wrist_on ? "on" : "off";
  if (which == "rotate") {
    const RotationReport r = run_rotation_task(sc, wrist_on);
    const std::string stem = std::string("rotation_") + cond;
    write_file(out / (stem + ".json"), rotation_report_to_json(r));
    write_file(out / (stem + "_joints.csv"), joints_csv(r.log));
    std::printf(
        "rotation wrist=%s: delivered %.2f of %.2f deg in %d grasps "
        "(%d regrasps), time proxy %.2f s\n",
        cond, r.delivered_deg, r.target_deg, r.grasp_count, r.regrasp_events,
        r.log.time_proxy_s);
    return r.completed ? 0 : 3;
  }
  const StackingReport r = run_stacking_task(sc, wrist_on);
  const std::string stem = std::string("stacking_") + cond;
  write_file(out / (stem + ".json"), stacking_report_to_json(r));
  write_file(out / (stem + "_joints.csv"), joints_csv(r.log));
  std::printf(
      "stacking wrist=%s: reoriented %d/6, stacked %d/6, time proxy %.2f s\n",
      cond, r.reoriented_count, r.stacked_count, r.log.time_proxy_s);
  return r.completed &&
                 r.stacked_count == static_cast<int>(r.cubes.size())
             ? 0
             : 3;
}

int run_compare(const std::string& which, const TaskScenario& sc,
                const fs::path& out) {
  if (which == "rotate") {
    const RotationReport off = run_rotation_task(sc, false);
    const RotationReport on = run_rotation_task(sc, true);
    write_file(out / "rotation_compare.json",
               rotation_compare_to_json(off, on));
    std::printf("rotation: grasps %d -> %d, time proxy ratio %.3f\n",
                off.grasp_count, on.grasp_count,
                off.log.time_proxy_s > 0.0
                    ? on.log.time_proxy_s / off.log.time_proxy_s
                    : 0.0);
    return off.completed && on.completed ? 0 : 3;
  }
  const StackingReport off = run_stacking_task(sc, false);
  const StackingReport on = run_stacking_task(sc, true);
  write_file(out / "stacking_compare.json", stacking_compare_to_json(off, on));
  std::printf("stacking: reoriented %d/6 -> %d/6, stacked %d/6 -> %d/6\n",
              off.reoriented_count, on.reoriented_count, off.stacked_count,
              on.stacked_count);
  return off.completed && on.completed ? 0 : 3;
}

int run_servo_sim(const std::string& script_path, const std::string& config,
                  const fs::path& out) {
  require_readable(script_path);
  if (!config.empty()) require_readable(config);
  const ServoBank bank =
      config.empty() ? ServoBank::defaults() : load_calibration(config);
  std::vector<SimServo> units;
  for (const ServoCalibration& cal : bank.servos) {
    SimServo s;
    s.id = static_cast<uint8_t>(cal.id);
    s.position_ticks = cal.center_ticks;
    s.goal_ticks = cal.center_ticks;
    s.speed_ticks_per_s = cal.speed_ticks_per_s;
    units.push_back(s);
  }
  SimBus bus(units);
  const std::string script = read_file(script_path);
  const auto transcript = run_bus_script(bus, script);
  std::string text;
  for (const auto& line : transcript) text += line + "\n";
  write_file(out / "servo_transcript.txt", text);
  std::printf("servo-sim: %zu transcript lines\n", transcript.size());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Kinematic simulation of a two axis wrist and tendon driven hand on a "
      "six axis arm"};
  app.require_subcommand(1);

  std::string out_dir = ".";
  std::string config;
  uint32_t seed = 0;

  auto* ws = app.add_subcommand(
      "workspace", "Sample the wrist-only palm workspace over its range");
  double step_deg = 5.0;
  std::string rom_name = "standard";
  std::string ws_format = "csv";
  ws->add_option("--step-deg", step_deg, "Grid step, degrees")
      ->check(CLI::Range(1e-3, 10.0));
  ws->add_option("--rom", rom_name, "Range of motion preset")
      ->check(CLI::IsMember({"standard", "extended_deviation"}));
  ws->add_option("--format", ws_format, "Output format")
      ->check(CLI::IsMember({"csv", "json", "svg"}));
  ws->add_option("--out", out_dir, "Output directory");

  auto* task = app.add_subcommand(
      "task", "Run one manipulation task under one wrist condition");
  std::string task_which;
  std::string wrist = "on";
  task->add_option("which", task_which, "rotate or stack")
      ->required()
      ->check(CLI::IsMember({"rotate", "stack"}));
  auto* wrist_opt =
      task->add_option("--wrist", wrist, "Wrist condition")->required();
  wrist_opt->check(CLI::IsMember({"on", "off"}));
  task->add_option("--config", config, "Scenario JSON file");
  auto* task_seed = task->add_option("--seed", seed, "Override scenario seed");
  task->add_option("--out", out_dir, "Output directory");

  auto* cmp = app.add_subcommand(
      "compare", "Run a task under both wrist conditions and summarize");
  std::string cmp_which;
  cmp->add_option("which", cmp_which, "rotate or stack")
      ->required()
      ->check(CLI::IsMember({"rotate", "stack"}));
  cmp->add_option("--config", config, "Scenario JSON file");
  auto* cmp_seed = cmp->add_option("--seed", seed, "Override scenario seed");
  cmp->add_option("--out", out_dir, "Output directory");

  auto* servo = app.add_subcommand(
      "servo-sim", "Replay a bus script against the servo simulator");
  std::string script_path;
  servo->add_option("--script", script_path, "Bus script file")->required();
  servo->add_option("--config", config, "Servo calibration JSON file");
  servo->add_option("--out", out_dir, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return 2;
  }

  try {
    const fs::path out = prepare_out_dir(out_dir);
    if (ws->parsed()) return run_workspace(step_deg, rom_name, ws_format, out);
    if (task->parsed()) {
      const TaskScenario sc =
          load_or_default(config, seed, task_seed->count() > 0);
      return run_task_cmd(task_which, wrist == "on", sc, out);
    }
    if (cmp->parsed()) {
      const TaskScenario sc =
          load_or_default(config, seed, cmp_seed->count() > 0);
      return run_compare(cmp_which, sc, out);
    }
    if (servo->parsed()) return run_servo_sim(script_path, config, out);
  } catch (const io_error& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return 4;
  } catch (const config_error& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return 2;
  } catch (const protocol_error& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return 2;
  }
  return 0;
}
