#include <wristsim/chain_io.hpp>
#include <wristsim/kinematics.hpp>
#include <wristsim/scenario.hpp>
#include <wristsim/servo_bus.hpp>
#include <wristsim/tasks.hpp>
#include <wristsim/transmission.hpp>
#include <wristsim/wrist_hand.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

// End-to-end acceptance gate. Each numbered check prints exactly one
// PASS/FAIL line; the process fails if any check does.

namespace fs = std::filesystem;
using namespace wristsim;

namespace {

int g_failures = 0;

void verdict(int idx, bool ok, const char* what) {
  std::printf("%s criterion %d: %s\n", ok ? "PASS" : "FAIL", idx, what);
  if (!ok) ++g_failures;
}

// 1: palm position against the closed form over the full range box.
bool check_wrist_fk() {
  double worst = 0.0;
  for (int d = -30; d <= 30; ++d) {
    for (int f = -90; f <= 90; ++f) {
      const double dev = deg2rad(double(d)), flex = deg2rad(double(f));
      const Eigen::Vector3d p = wrist_fk({dev, flex}).translation();
      const Eigen::Vector3d ref(std::cos(dev) * (34.0 + 48.0 * std::cos(flex)),
                                std::sin(dev) * (34.0 + 48.0 * std::cos(flex)),
                                48.0 * std::sin(flex));
      worst = std::max(worst, (p - ref).cwiseAbs().maxCoeff());
    }
  }
  return worst < 1e-9;
}

// 2: geometric jacobian of the full arm+wrist chain against central finite
// differences at 1000 random in-range configurations.
bool check_jacobian() {
  const Chaind chain =
      mount_wrist_on_arm(default_arm_chain(), default_wrist_chain());
  std::mt19937 rng(2024);
  double worst = 0.0;
  const double h = 1e-6;
  for (int trial = 0; trial < 1000; ++trial) {
    VectorX<double> q(chain.dof());
    for (int j = 0; j < chain.dof(); ++j) {
      std::uniform_real_distribution<double> pick(chain.limit_min[j],
                                                  chain.limit_max[j]);
      q[j] = pick(rng);
    }
    const Matrix6X<double> jac = jacobian(chain, q);
    const Eigen::Matrix3d r0 = forward_kinematics(chain, q).linear();
    for (int j = 0; j < chain.dof(); ++j) {
      VectorX<double> qp = q, qm = q;
      qp[j] += h;
      qm[j] -= h;
      const Isometry3d tp = forward_kinematics(chain, qp);
      const Isometry3d tm = forward_kinematics(chain, qm);
      const Eigen::Vector3d dv =
          (tp.translation() - tm.translation()) / (2 * h);
      const Eigen::Matrix3d dr =
          (tp.linear() - tm.linear()) * r0.transpose() / (2 * h);
      const Eigen::Vector3d dw(dr(2, 1), dr(0, 2), dr(1, 0));
      worst = std::max(worst, (jac.block<3, 1>(0, j) - dv).cwiseAbs().maxCoeff());
      worst = std::max(worst, (jac.block<3, 1>(3, j) - dw).cwiseAbs().maxCoeff());
    }
  }
  return worst < 1e-6;
}

// 3: with sheathed routing the finger tendon displacement depends only on
// the grasp synergy, and the antagonistic pair always shares the stroke.
bool check_sheathed_tendons() {
  const TendonParams sheathed = TendonParams::sheathed();
  for (int si = 0; si <= 10; ++si) {
    const double s = si / 10.0;
    const TendonState neutral = finger_tendon_displacement(s, {0.0, 0.0}, sheathed);
    for (int d = -30; d <= 30; d += 5) {
      for (int f = -90; f <= 90; f += 5) {
        const WristState w{deg2rad(double(d)), deg2rad(double(f))};
        const TendonState t = finger_tendon_displacement(s, w, sheathed);
        if (std::abs(t.flexor_mm - neutral.flexor_mm) > 1e-12) return false;
        if (std::abs(t.extensor_mm - neutral.extensor_mm) > 1e-12) return false;
        if (std::abs(t.flexor_mm + t.extensor_mm - sheathed.stroke_mm) > 1e-12)
          return false;
      }
    }
  }
  return true;
}

// 4: tick -> angle -> tick is the identity across the whole encoder range.
bool check_tick_roundtrip() {
  for (const ServoCalibration& cal : ServoBank::defaults().servos) {
    for (int t = 0; t < 4096; ++t) {
      if (angle_to_servo(cal, servo_to_angle(cal, t)) != t) return false;
    }
  }
  return true;
}

// 9: frame corpus round trips; every single-bit corruption of every frame
// is rejected; the canonical ping for unit 1 matches its golden bytes.
bool check_bus_frames() {
  std::vector<std::vector<uint8_t>> corpus = {
      make_ping(1),
      make_read(2, kRegPresentPosition, 2),
      make_write16(3, kRegGoalPosition, 2458),
      make_sync_write16(kRegGoalPosition, {{3, 2048}, {4, 2048}}),
      encode_frame({7, kStatusOk, {0x00, 0x08}}),
  };
  const std::vector<uint8_t> golden_ping = {0xff, 0xff, 0x01, 0x02, 0x01, 0xfb};
  if (corpus[0] != golden_ping) return false;

  for (const auto& bytes : corpus) {
    const Frame f = decode_frame(bytes);
    if (encode_frame(f) != bytes) return false;
    for (size_t i = 0; i < bytes.size(); ++i) {
      for (int b = 0; b < 8; ++b) {
        std::vector<uint8_t> corrupt = bytes;
        corrupt[i] = static_cast<uint8_t>(corrupt[i] ^ (1u << b));
        try {
          (void)decode_frame(corrupt);
          return false;  // a bit flip slipped through
        } catch (const protocol_error&) {
        }
      }
    }
  }
  return true;
}

int run_cli(const std::string& cli, const std::string& args) {
  const std::string cmd = "\"" + cli + "\" " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return status == -1 ? -1 : WEXITSTATUS(status);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// 10: a fixed command list, run twice into fresh directories, leaves two
// byte-identical output trees.
bool check_cli_determinism(const std::string& cli) {
  const std::string script =
      WRISTSIM_SOURCE_DIR "/config/examples/bus_script.txt";
  const std::vector<std::pair<std::string, int>> commands = {
      {"workspace", 0},
      {"workspace --format json", 0},
      {"workspace --format svg", 0},
      {"task rotate --wrist on", 0},
      {"task rotate --wrist off", 0},
      {"task stack --wrist on", 0},
      {"task stack --wrist off", 3},
      {"compare rotate", 0},
      {"compare stack", 0},
      {"servo-sim --script " + script, 0},
  };
  for (const char* dir : {"acc_run_a", "acc_run_b"}) {
    fs::remove_all(dir);
    fs::create_directories(dir);
    for (const auto& [args, expected] : commands) {
      if (run_cli(cli, args + " --out " + dir) != expected) return false;
    }
  }
  std::map<std::string, std::string> tree_a;
  for (const auto& entry : fs::recursive_directory_iterator("acc_run_a")) {
    if (entry.is_regular_file())
      tree_a[entry.path().filename().string()] = slurp(entry.path());
  }
  size_t seen = 0;
  for (const auto& entry : fs::recursive_directory_iterator("acc_run_b")) {
    if (!entry.is_regular_file()) continue;
    ++seen;
    const auto it = tree_a.find(entry.path().filename().string());
    if (it == tree_a.end() || it->second != slurp(entry.path())) return false;
  }
  return seen == tree_a.size() && seen >= 12;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::fputs("usage: acceptance <path-to-wristsim-binary>\n", stderr);
    return 1;
  }
  const std::string cli = argv[1];

  verdict(1, check_wrist_fk(),
          "wrist palm position matches the closed form everywhere in range");
  verdict(2, check_jacobian(),
          "full-chain jacobian matches finite differences at 1000 configs");
  verdict(3, check_sheathed_tendons(),
          "sheathed routing decouples finger tendons from wrist posture");
  verdict(4, check_tick_roundtrip(),
          "servo tick/angle conversion round trips all 4096 positions");

  const TaskScenario sc;
  const RotationReport rot_off = run_rotation_task(sc, false);
  const RotationReport rot_on = run_rotation_task(sc, true);
  verdict(5,
          rot_off.completed && rot_on.completed && rot_off.grasp_count == 3 &&
              rot_on.grasp_count == 2 && rot_off.regrasp_events == 2 &&
              rot_on.regrasp_events == 1,
          "disc rotation takes 3 grasps without the wrist, 2 with it");
  verdict(6,
          rot_off.log.time_proxy_s > 0.0 &&
              rot_on.log.time_proxy_s <= 0.85 * rot_off.log.time_proxy_s,
          "wrist cuts the rotation time proxy to 0.85x or less");

  const StackingReport st_off = run_stacking_task(sc, false);
  const StackingReport st_on = run_stacking_task(sc, true);
  const bool on_clean = st_on.completed && st_on.reoriented_count == 6 &&
                        st_on.stacked_count == 6;
  const bool off_short = st_off.completed && st_off.reoriented_count <= 4 &&
                         st_off.stacked_count <= 5;
  const bool cube5_fails = st_off.cubes.size() == 6 &&
                           !st_off.cubes[4].reoriented &&
                           !st_off.cubes[4].stacked;
  verdict(7, on_clean && off_short && cube5_fails,
          "stacking scores 6/6 with the wrist; without it cube 5 fails");
  const double ex_on = st_on.log.max_excursion.size() > 3
                           ? st_on.log.max_excursion[3]
                           : 1e9;
  const double ex_off = st_off.log.max_excursion.size() > 3
                            ? st_off.log.max_excursion[3]
                            : 0.0;
  verdict(8, ex_off > 0.0 && ex_on <= 0.75 * ex_off,
          "wrist keeps the elbow excursion at 0.75x or less while stacking");

  verdict(9, check_bus_frames(),
          "bus frames round trip, reject bit flips, and match the golden ping");
  verdict(10, check_cli_determinism(cli),
          "repeated command line runs give byte identical outputs");

  if (g_failures == 0) {
    std::printf("acceptance: all 10 criteria passed\n");
    return 0;
  }
  std::printf("acceptance: %d of 10 criteria FAILED\n", g_failures);
  return 1;
}
