#include <wristsim/tasks.hpp>

#include <wristsim/chain_io.hpp>
#include <wristsim/ik.hpp>
#include <wristsim/wrist_hand.hpp>

#include <Eigen/Geometry>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace wristsim {
namespace {

// Palm height at the home posture and path discretisation steps. These are
// execution details, not scenario knobs.
constexpr double kHomeHeightMm = 250.0;
constexpr double kLineStepMm = 10.0;
constexpr double kLineStepRad = deg2rad(5.0);
constexpr double kArcStepRad = deg2rad(2.0);
constexpr double kLadderStepMm = 5.0;
constexpr double kBoundsTopMm = 450.0;

Eigen::Matrix3d canonical_palm() {
  // Fingers point down, the grip closes along world y, palm z looks across
  // the bench. Proper rotation (det +1).
  Eigen::Matrix3d r;
  r.col(0) = Eigen::Vector3d(0, 0, -1);
  r.col(1) = Eigen::Vector3d(0, -1, 0);
  r.col(2) = Eigen::Vector3d(-1, 0, 0);
  return r;
}

Isometry3d make_pose(const Eigen::Matrix3d& r, const Eigen::Vector3d& p) {
  Isometry3d t = Isometry3d::Identity();
  t.linear() = r;
  t.translation() = p;
  return t;
}

Isometry3d rotated_about(const Isometry3d& pose, const Eigen::Vector3d& pivot,
                         const Eigen::Vector3d& axis, double angle_rad) {
  const Eigen::AngleAxisd rot(angle_rad, axis.normalized());
  Isometry3d out = Isometry3d::Identity();
  out.linear() = rot.toRotationMatrix() * pose.rotation();
  out.translation() = pivot + rot * (pose.translation() - pivot);
  return out;
}

// Planned per-grasp twist capacity (degrees) when the grasp is tilted by
// `tilt_deg` of flexion. Tilting shares the turn between forearm roll and
// wrist deviation; the estimate is first order (axes move once rolling
// starts, so the executed roll can overshoot it; the roll window monitor
// reports when that happens).
double planned_usable_deg(double span_deg, double dev_max_deg, double tilt_deg) {
  if (tilt_deg <= 0.0) return span_deg;
  const double t = deg2rad(tilt_deg);
  return std::min(span_deg / std::cos(t), dev_max_deg / std::sin(t));
}

// Smallest tilt maximising the capped capacity min(cap_deg, usable).
double pick_tilt_deg(double span_deg, double dev_max_deg, double cap_deg,
                     double tilt_max_deg, double tilt_step_deg) {
  double best_tilt = 0.0;
  double best = std::min(cap_deg, span_deg);
  for (double tilt = tilt_step_deg; tilt <= tilt_max_deg + 1e-9; tilt += tilt_step_deg) {
    const double u = std::min(cap_deg, planned_usable_deg(span_deg, dev_max_deg, tilt));
    if (u > best + 1e-9) {
      best = u;
      best_tilt = tilt;
    }
  }
  return best_tilt;
}

struct Rig {
  const TaskScenario& sc;
  bool wrist;
  Chaind arm;    // unmounted arm, used to locate the physical flange
  Chaind chain;  // arm + mount + wrist
  RomLimits rom;
  IkOptions ik;
  TrackOptions base;
  VectorX<double> q;
  TrackResult log;
  double grasp_time_s = 0.0;
  bool ok = true;

  Rig(const TaskScenario& s, bool wrist_enabled)
      : sc(s),
        wrist(wrist_enabled),
        arm(default_arm_chain()),
        chain(mount_wrist_on_arm(default_arm_chain(), default_wrist_chain())),
        rom(s.wrist_rom == "extended_deviation" ? RomLimits::extended_deviation()
                                                : RomLimits::standard()) {
    chain.limit_min[6] = rom.deviation_min;
    chain.limit_max[6] = rom.deviation_max;
    chain.limit_min[7] = rom.flexion_min;
    chain.limit_max[7] = rom.flexion_max;

    ik.rng_seed = s.seed;
    base.ik = ik;
    base.limit_margin_rad = deg2rad(s.limit_margin_deg);
    base.singularity_threshold = s.singularity_threshold;
    base.monitor_bounds = true;
    base.bounds = Eigen::AlignedBox3d(
        Eigen::Vector3d(s.bench_x_min_mm - s.bench_margin_mm,
                        s.bench_y_min_mm - s.bench_margin_mm, 0.0),
        Eigen::Vector3d(s.bench_x_max_mm + s.bench_margin_mm,
                        s.bench_y_max_mm + s.bench_margin_mm, kBoundsTopMm));

    const IkResult home =
        solve_ik(chain, home_palm_pose(s), home_seed(), {6, 7}, ik);
    if (!home.converged)
      throw config_error("task setup: home posture is unreachable");
    q = home.q;
    log.q0 = q;
    log.travel = VectorX<double>::Zero(chain.dof());
    log.max_excursion = VectorX<double>::Zero(chain.dof());
  }

  Isometry3d palm() const { return forward_kinematics(chain, q); }

  Eigen::Vector3d flange_of(const VectorX<double>& qq) const {
    return forward_kinematics(arm, qq.head(6)).translation();
  }

  // Structure keep-out: the forearm cluster may not dip low in front of the
  // bench edge, and never below the hard floor.
  bool keepout_ok(const VectorX<double>& qq) const {
    const Eigen::Vector3d f = flange_of(qq);
    if (f.z() < sc.flange_min_z_mm) return false;
    if (f.z() < sc.flange_safe_z_mm &&
        f.y() < sc.bench_y_min_mm - sc.flange_y_clearance_mm)
      return false;
    return true;
  }

  // free_wrist_joint: 6 frees deviation, 7 frees flexion, -1 locks both.
  // With the wrist condition off everything distal of the arm stays locked.
  std::vector<int> wrist_locks(int free_wrist_joint) const {
    if (!wrist || free_wrist_joint < 0) return {6, 7};
    return free_wrist_joint == 6 ? std::vector<int>{7} : std::vector<int>{6};
  }

  TrackOptions opts_with_locks(int free_wrist_joint) const {
    TrackOptions t = base;
    t.locked = wrist_locks(free_wrist_joint);
    return t;
  }

  // Roll-window monitoring anchored at the current forearm roll. Only the
  // roll joint gets a meaningful window; the rest are left slack.
  TrackOptions window_opts(int free_wrist_joint, double span_neg_deg,
                           double span_pos_deg) const {
    TrackOptions t = opts_with_locks(free_wrist_joint);
    const double slack = 1e3;
    t.task_min = VectorX<double>::Constant(chain.dof(), -slack);
    t.task_max = VectorX<double>::Constant(chain.dof(), slack);
    t.task_min[5] = q[5] + deg2rad(span_neg_deg);
    t.task_max[5] = q[5] + deg2rad(span_pos_deg);
    return t;
  }

  bool track(const std::vector<Isometry3d>& poses, const TrackOptions& topts) {
    if (poses.empty()) return true;
    const TrackResult seg = track_trajectory(chain, poses, q, topts);
    merge_into(log, seg);
    if (!seg.joints.empty()) q = seg.joints.back();
    ok = ok && seg.completed;
    return seg.completed;
  }

  std::vector<Isometry3d> line_poses(const Isometry3d& target,
                                     double step_mm = kLineStepMm) const {
    const Isometry3d from = palm();
    const double dist = (target.translation() - from.translation()).norm();
    const Eigen::Quaterniond qa(from.rotation()), qb(target.rotation());
    const double ang = qa.angularDistance(qb);
    const int n = std::max({1, int(std::ceil(dist / step_mm)),
                            int(std::ceil(ang / kLineStepRad))});
    std::vector<Isometry3d> poses;
    poses.reserve(size_t(n));
    for (int k = 1; k <= n; ++k) {
      const double s = double(k) / n;
      Isometry3d p = Isometry3d::Identity();
      p.linear() = qa.slerp(s, qb).toRotationMatrix();
      p.translation() =
          (1.0 - s) * from.translation() + s * target.translation();
      poses.push_back(p);
    }
    return poses;
  }

  std::vector<Isometry3d> arc_poses(const Eigen::Vector3d& pivot,
                                    const Eigen::Vector3d& axis,
                                    double total_rad) const {
    const Isometry3d from = palm();
    const int n = std::max(1, int(std::ceil(std::abs(total_rad) / kArcStepRad)));
    std::vector<Isometry3d> poses;
    poses.reserve(size_t(n));
    for (int k = 1; k <= n; ++k)
      poses.push_back(rotated_about(from, pivot, axis, total_rad * k / n));
    return poses;
  }

  bool line_to(const Isometry3d& target, int free_wrist_joint = -1) {
    return track(line_poses(target), opts_with_locks(free_wrist_joint));
  }

  // Plan-time feasibility scan; returns the index of the first waypoint the
  // solver cannot reach (poses.size() when all are fine). Not accounted.
  size_t probe_path(const std::vector<Isometry3d>& poses,
                    const std::vector<int>& locks) const {
    VectorX<double> probe = q;
    for (size_t i = 0; i < poses.size(); ++i) {
      const IkResult sol = solve_ik(chain, poses[i], probe, locks, ik);
      if (!sol.converged) return i;
      probe = sol.q;
    }
    return poses.size();
  }

  void jump_to(const VectorX<double>& to) {
    record_transition(chain, to, log);
    q = to;
  }

  void set_wrist(double dev_rad, double flex_rad) {
    if (std::abs(q[6] - dev_rad) < 1e-12 && std::abs(q[7] - flex_rad) < 1e-12)
      return;
    VectorX<double> to = q;
    to[6] = dev_rad;
    to[7] = flex_rad;
    jump_to(to);
  }

  void dwell() {
    log.time_proxy_s += sc.grasp_event_s;
    grasp_time_s += sc.grasp_event_s;
  }

  // Events the planner itself detects (as opposed to the path monitors).
  void planner_event(EventCause cause) {
    log.events.push_back({int(log.joints.size()), cause, -1});
  }
};

double angle_about(const Eigen::Matrix3d& delta, const Eigen::Vector3d& axis) {
  const Eigen::AngleAxisd aa(delta);
  return rad2deg(aa.angle() * aa.axis().dot(axis.normalized()));
}

// The executed forearm roll runs opposite to the object yaw because the
// mount axis points down through the palm at these grasps.
double span_toward_deg(double angle_deg, double span_neg_deg,
                       double span_pos_deg) {
  return angle_deg > 0.0 ? -span_neg_deg : span_pos_deg;
}

// One in-grasp twist about the vertical line through `pivot`. The roll
// window monitor is anchored where the twist starts.
bool twist_segment(Rig& rig, const Eigen::Vector3d& pivot, double theta_deg,
                   double tilt_deg, double span_neg_deg, double span_pos_deg) {
  const auto poses =
      rig.arc_poses(pivot, Eigen::Vector3d::UnitZ(), deg2rad(theta_deg));
  const TrackOptions topts = rig.window_opts(tilt_deg > 0.0 ? 6 : -1,
                                             span_neg_deg, span_pos_deg);
  return rig.track(poses, topts);
}

struct CubeSpec {
  Eigen::Vector3d axis;
  double angle_deg;
  const char* label;
};

const CubeSpec kCubes[6] = {
    {{0, 0, 1}, 90.0, "z+90"},  {{0, 0, 1}, -90.0, "z-90"},
    {{0, 1, 0}, 90.0, "y+90"},  {{0, 1, 0}, -90.0, "y-90"},
    {{1, 0, 0}, 90.0, "x+90"},  {{1, 0, 0}, -90.0, "x-90"},
};

}  // namespace

VectorX<double> home_seed() {
  VectorX<double> s(8);
  s << pi_v<double> / 2, -0.9, 1.4, -2.0, -pi_v<double> / 2, 0.0, 0.0, 0.0;
  return s;
}

Isometry3d home_palm_pose(const TaskScenario& sc) {
  const double y = 0.5 * (sc.bench_y_min_mm + sc.bench_y_max_mm);
  return make_pose(canonical_palm(), Eigen::Vector3d(0.0, y, kHomeHeightMm));
}

RotationReport run_rotation_task(const TaskScenario& sc, bool wrist_enabled) {
  validate_scenario(sc);
  Rig rig(sc, wrist_enabled);
  const RotationScenario& rs = sc.rotation;

  RotationReport rep;
  rep.wrist_enabled = wrist_enabled;
  rep.target_deg = rs.target_deg;
  if (std::abs(rs.target_deg) < 1e-12) {
    rep.log = rig.log;
    rep.completed = true;
    return rep;
  }

  const double dir = rs.target_deg > 0.0 ? 1.0 : -1.0;
  const double span = span_toward_deg(rs.target_deg, rs.twist_span_neg_deg,
                                      rs.twist_span_pos_deg);
  const double dev_max_deg = rad2deg(rig.rom.deviation_max);
  if (wrist_enabled)
    rep.tilt_deg = pick_tilt_deg(span, dev_max_deg, 1e9, rs.tilt_max_deg,
                                 rs.tilt_step_deg);
  rep.usable_per_grasp_deg =
      planned_usable_deg(span, dev_max_deg, rep.tilt_deg);

  const Eigen::Vector3d hub(rs.disc_center_x_mm, rs.disc_center_y_mm,
                            rs.hub_z_mm);
  const Isometry3d grasp = make_pose(
      canonical_palm(), hub + Eigen::Vector3d(0, 0, sc.grasp_offset_mm));
  const Isometry3d approach = make_pose(
      canonical_palm(),
      grasp.translation() + Eigen::Vector3d(0, 0, sc.approach_clearance_mm));

  rig.set_wrist(0.0, deg2rad(rep.tilt_deg));
  rig.line_to(approach);
  rig.line_to(grasp);

  // The disc turn accumulates across grasps; each regrasp resets the palm,
  // so the delivered angle is summed per twist, not read off the final palm.
  double remaining = std::abs(rs.target_deg);
  while (rig.ok) {
    rig.dwell();  // close the grip
    const double theta = std::min(remaining, rep.usable_per_grasp_deg);
    rep.twists_deg.push_back(theta);
    const double anchor_roll = rig.q[5];
    const Eigen::Matrix3d before = rig.palm().rotation();
    const bool turned = twist_segment(rig, hub, dir * theta, rep.tilt_deg,
                                      rs.twist_span_neg_deg,
                                      rs.twist_span_pos_deg);
    rep.delivered_deg += angle_about(
        rig.palm().rotation() * before.transpose(), Eigen::Vector3d::UnitZ());
    if (!turned) break;
    remaining -= theta;
    rep.grasp_count++;
    rig.dwell();  // open the grip
    if (remaining <= 1e-9) break;

    rep.regrasp_events++;
    const Isometry3d lifted =
        make_pose(rig.palm().rotation(),
                  grasp.translation() + Eigen::Vector3d(0, 0, sc.retreat_mm));
    if (!rig.line_to(lifted)) break;
    VectorX<double> unwound = rig.q;         // hand is empty: spin the roll
    unwound[5] = anchor_roll;                // back for a fresh window
    unwound[6] = 0.0;
    rig.jump_to(unwound);
    if (!rig.line_to(grasp)) break;
  }

  rep.residual_deg = rs.target_deg - rep.delivered_deg;

  const Isometry3d lifted =
      make_pose(rig.palm().rotation(),
                grasp.translation() + Eigen::Vector3d(0, 0, sc.retreat_mm));
  rig.line_to(lifted);
  rig.line_to(home_palm_pose(sc));
  rig.set_wrist(0.0, 0.0);

  rep.grasp_time_s = rig.grasp_time_s;
  rep.log = rig.log;
  rep.completed = rig.ok && remaining <= 1e-9;
  return rep;
}

StackingReport run_stacking_task(const TaskScenario& sc, bool wrist_enabled) {
  validate_scenario(sc);
  Rig rig(sc, wrist_enabled);
  const StackingScenario& st = sc.stacking;
  const double half = st.cube_mm / 2.0;
  const double dev_max_deg = rad2deg(rig.rom.deviation_max);

  StackingReport rep;
  rep.wrist_enabled = wrist_enabled;

  for (int i = 0; i < 6 && rig.ok; ++i) {
    const CubeSpec& spec = kCubes[i];
    CubeOutcome out;
    out.index = i + 1;
    out.rotation_label = spec.label;
    out.requested_deg = spec.angle_deg;
    const size_t events_before = rig.log.events.size();

    const Eigen::Vector3d pick(st.pick_x_mm[size_t(i % 3)],
                               sc.bench_y_min_mm + st.pick_y_mm[size_t(i / 3)],
                               half);
    const double slot_z = half + st.cube_mm * (i / 2);
    const Eigen::Vector3d slot(st.slot_x_mm[size_t(i % 2)],
                               sc.bench_y_min_mm + st.slot_y_mm, slot_z);
    const bool vertical = std::abs(spec.axis.z()) > 0.5;

    // Plan the reorientation strategy and any grasp tilt.
    double tilt_deg = 0.0;
    double twist_deg = 0.0;
    if (vertical) {
      const double span = span_toward_deg(spec.angle_deg, st.twist_span_neg_deg,
                                          st.twist_span_pos_deg);
      if (wrist_enabled)
        tilt_deg = pick_tilt_deg(span, dev_max_deg, std::abs(spec.angle_deg),
                                 90.0, 1.0);
      const double usable = planned_usable_deg(span, dev_max_deg, tilt_deg);
      twist_deg = std::min(std::abs(spec.angle_deg), usable) *
                  (spec.angle_deg > 0 ? 1.0 : -1.0);
    }
    out.tilt_preset_deg = tilt_deg;

    // Pick up the cube at the canonical heading.
    const Isometry3d grasp = make_pose(
        canonical_palm(), pick + Eigen::Vector3d(0, 0, sc.grasp_offset_mm));
    rig.set_wrist(0.0, deg2rad(tilt_deg));
    rig.line_to(make_pose(canonical_palm(),
                          grasp.translation() +
                              Eigen::Vector3d(0, 0, sc.approach_clearance_mm)));
    rig.line_to(grasp);
    rig.dwell();
    const Eigen::Matrix3d palm0 = rig.palm().rotation();

    // Lift to carry height, carry over the slot.
    const Eigen::Vector3d hover(slot.x(), slot.y(), st.carry_z_mm);
    rig.line_to(make_pose(rig.palm().rotation(),
                          Eigen::Vector3d(pick.x(), pick.y(),
                                          st.carry_z_mm + sc.grasp_offset_mm)));
    rig.line_to(make_pose(rig.palm().rotation(),
                          hover + Eigen::Vector3d(0, 0, sc.grasp_offset_mm)));
    if (!rig.ok) break;

    // Reorient above the slot.
    if (vertical) {
      twist_segment(rig, hover, twist_deg, tilt_deg, st.twist_span_neg_deg,
                    st.twist_span_pos_deg);
    } else {
      // Quarter-turn about a horizontal axis: swing the grasped cube about
      // its own centre. With the wrist active the matching wrist joint
      // absorbs what its range allows (deviation for y-axis turns, flexion
      // for x-axis turns) and the arm does the rest.
      const int free_joint = std::abs(spec.axis.x()) > 0.5 ? 7 : 6;
      auto poses = rig.arc_poses(hover, spec.axis, deg2rad(spec.angle_deg));
      const size_t reach = rig.probe_path(poses, rig.wrist_locks(free_joint));
      const bool truncated = reach < poses.size();
      if (truncated) poses.resize(reach);
      rig.track(poses, rig.window_opts(free_joint, st.twist_span_neg_deg,
                                       st.twist_span_pos_deg));
      if (truncated && rig.ok) rig.planner_event(EventCause::workspace_bound);
    }
    if (!rig.ok) break;

    // Find the lowest release height that keeps the forearm structure out
    // of the keep-out volume, then descend and let go.
    const Eigen::Matrix3d r_rel = rig.palm().rotation();
    const Eigen::Vector3d xp = r_rel.col(0);
    double release_z = slot_z;
    for (; release_z < st.carry_z_mm; release_z += kLadderStepMm) {
      const Eigen::Vector3d obj(slot.x(), slot.y(), release_z);
      const IkResult sol =
          solve_ik(rig.chain, make_pose(r_rel, obj - sc.grasp_offset_mm * xp),
                   rig.q, rig.wrist_locks(-1), rig.ik);
      if (sol.converged && rig.keepout_ok(sol.q)) break;
    }
    if (release_z > slot_z + 1e-9) rig.planner_event(EventCause::workspace_bound);
    const Eigen::Vector3d obj_target(slot.x(), slot.y(), release_z);
    if (!rig.line_to(make_pose(r_rel, obj_target - sc.grasp_offset_mm * xp)))
      break;
    rig.dwell();

    // Outcome, measured from the solved configuration at release. The cube
    // is rigid in the grip and axis-aligned at the pick, so its orientation
    // equals palm * canonical^-1.
    // The cube rides rigidly in the grip and was axis aligned at the pick,
    // so its orientation is the palm rotation accumulated since the grasp.
    const Isometry3d palm_rel = rig.palm();
    const Eigen::Matrix3d r_obj = palm_rel.rotation() * palm0.transpose();
    const Eigen::Matrix3d r_req =
        Eigen::AngleAxisd(deg2rad(spec.angle_deg), spec.axis).toRotationMatrix();
    const Eigen::Vector3d obj_pos =
        palm_rel.translation() + sc.grasp_offset_mm * palm_rel.rotation().col(0);
    const Eigen::Matrix3d residual = r_obj * r_req.transpose();

    out.delivered_deg = angle_about(r_obj, spec.axis);
    out.ori_err_deg = rad2deg(Eigen::AngleAxisd(residual).angle());
    out.tilt_err_deg = rad2deg(std::acos(std::clamp(
        (residual * Eigen::Vector3d::UnitZ()).dot(Eigen::Vector3d::UnitZ()),
        -1.0, 1.0)));
    out.pos_err_mm = (obj_pos.head<2>() - slot.head<2>()).norm();
    out.drop_mm = obj_pos.z() - slot_z;

    const bool settled = out.drop_mm <= st.place_tol_mm;
    out.reoriented = settled && out.ori_err_deg <= st.place_tol_deg;
    out.stacked = settled && out.pos_err_mm <= st.place_tol_mm &&
                  out.tilt_err_deg <= st.place_tol_deg;

    // Retreat straight up, hand empty.
    rig.line_to(make_pose(r_rel, Eigen::Vector3d(slot.x(), slot.y(),
                                                 st.carry_z_mm) -
                                     sc.grasp_offset_mm * xp));

    out.events.assign(rig.log.events.begin() + long(events_before),
                      rig.log.events.end());
    if (out.reoriented) rep.reoriented_count++;
    if (out.stacked) rep.stacked_count++;
    rep.cubes.push_back(std::move(out));
  }

  rig.line_to(home_palm_pose(sc));
  rig.set_wrist(0.0, 0.0);

  rep.grasp_time_s = rig.grasp_time_s;
  rep.log = rig.log;
  rep.completed = rig.ok && rep.cubes.size() == 6;
  return rep;
}

}  // namespace wristsim
