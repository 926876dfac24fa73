#include <wristsim/wrist_hand.hpp>

#include <wristsim/chain_io.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace wristsim {

bool in_rom(const WristState& w, const RomLimits& rom) {
  return w.deviation >= rom.deviation_min && w.deviation <= rom.deviation_max &&
         w.flexion >= rom.flexion_min && w.flexion <= rom.flexion_max;
}

void require_in_rom(const WristState& w, const RomLimits& rom) {
  if (w.deviation < rom.deviation_min || w.deviation > rom.deviation_max) {
    throw std::domain_error("wrist deviation out of range: " +
                            std::to_string(rad2deg(w.deviation)) + " deg");
  }
  if (w.flexion < rom.flexion_min || w.flexion > rom.flexion_max) {
    throw std::domain_error("wrist flexion out of range: " +
                            std::to_string(rad2deg(w.flexion)) + " deg");
  }
}

Isometry3d wrist_fk(const WristState& w) {
  static const Chain<double> chain = default_wrist_chain();
  Eigen::Vector2d q(w.deviation, w.flexion);
  return forward_kinematics(chain, q);
}

std::array<double, 15> synergy_expand(double s, const HandGeometry& hand) {
  if (!(s >= 0.0 && s <= 1.0)) {
    throw std::domain_error("synergy value out of [0, 1]: " +
                            std::to_string(s));
  }
  std::array<double, 15> q{};
  for (int finger = 0; finger < 5; ++finger) {
    for (int joint = 0; joint < 3; ++joint) {
      q[static_cast<size_t>(3 * finger + joint)] =
          s * hand.joint_close_angles[static_cast<size_t>(joint)];
    }
  }
  return q;
}

namespace {

// Ascending grid from lo by step, with 0 and hi always present.
std::vector<double> grid_axis(double lo, double hi, double step) {
  std::vector<double> v;
  for (double x = lo; x < hi - 1e-12; x += step) v.push_back(x);
  if (lo < 0.0 && hi > 0.0) v.push_back(0.0);
  v.push_back(hi);
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end(),
                      [](double a, double b) { return std::abs(a - b) < 1e-12; }),
          v.end());
  return v;
}

}  // namespace

std::vector<WorkspaceSample> palm_workspace(double step_rad,
                                            const RomLimits& rom) {
  if (!(step_rad > 0.0) || step_rad > pi_v<double>) {
    throw std::invalid_argument("workspace step must lie in (0, pi] rad");
  }
  const std::vector<double> dev = grid_axis(rom.deviation_min,
                                            rom.deviation_max, step_rad);
  const std::vector<double> flex = grid_axis(rom.flexion_min,
                                             rom.flexion_max, step_rad);
  std::vector<WorkspaceSample> out;
  out.reserve(dev.size() * flex.size());
  for (double d : dev) {
    for (double f : flex) {
      WorkspaceSample s;
      s.deviation = d;
      s.flexion = f;
      s.p = wrist_fk({d, f}).translation();
      out.push_back(s);
    }
  }
  return out;
}

WorkspaceExtent workspace_extent(const std::vector<WorkspaceSample>& samples) {
  if (samples.empty()) throw std::invalid_argument("empty workspace sample set");
  WorkspaceExtent e;
  e.z_min_mm = samples.front().p.z();
  e.z_max_mm = samples.front().p.z();
  for (const auto& s : samples) {
    e.max_norm_mm = std::max(e.max_norm_mm, s.p.norm());
    e.z_min_mm = std::min(e.z_min_mm, s.p.z());
    e.z_max_mm = std::max(e.z_max_mm, s.p.z());
  }
  return e;
}

std::string workspace_csv(const std::vector<WorkspaceSample>& samples) {
  std::string out = "theta1_deg,theta2_deg,x_mm,y_mm,z_mm\n";
  char line[160];
  for (const auto& s : samples) {
    std::snprintf(line, sizeof line, "%.6f,%.6f,%.6f,%.6f,%.6f\n",
                  rad2deg(s.deviation), rad2deg(s.flexion), s.p.x(), s.p.y(),
                  s.p.z());
    out += line;
  }
  return out;
}

namespace {

struct Panel {
  const char* title;
  double x0, y0;  // top-left corner in page units
};

void append_points(std::string& svg, const std::vector<WorkspaceSample>& samples,
                   bool side_view, const Panel& panel, double lo, double hi) {
  const double size = 360.0;
  const double span = hi - lo;
  char buf[160];
  for (const auto& s : samples) {
    const double u = s.p.x();
    const double v = side_view ? s.p.z() : s.p.y();
    const double cx = panel.x0 + (u - lo) / span * size;
    const double cy = panel.y0 + size - (v - lo) / span * size;
    std::snprintf(buf, sizeof buf,
                  "  <circle cx=\"%.2f\" cy=\"%.2f\" r=\"1.4\"/>\n", cx, cy);
    svg += buf;
  }
}

}  // namespace

std::string workspace_svg(const std::vector<WorkspaceSample>& samples) {
  if (samples.empty()) throw std::invalid_argument("empty workspace sample set");
  // One shared, symmetric scale for both panels keeps the projections
  // comparable.
  double r = 1.0;
  for (const auto& s : samples) r = std::max(r, s.p.lpNorm<Eigen::Infinity>());
  const double lo = -1.05 * r;
  const double hi = 1.05 * r;

  std::string svg =
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"820\" height=\"420\" "
      "viewBox=\"0 0 820 420\">\n"
      "<style>circle{fill:#2457a0;fill-opacity:0.55}text{font:14px "
      "sans-serif;fill:#333}rect{fill:none;stroke:#999}</style>\n";
  const Panel top{"top view (x-y)", 30.0, 40.0};
  const Panel side{"side view (x-z)", 430.0, 40.0};
  char buf[240];
  for (const Panel& p : {top, side}) {
    std::snprintf(buf, sizeof buf,
                  "<rect x=\"%.2f\" y=\"%.2f\" width=\"360\" height=\"360\"/>\n"
                  "<text x=\"%.2f\" y=\"%.2f\">%s</text>\n",
                  p.x0, p.y0, p.x0, p.y0 - 12.0, p.title);
    svg += buf;
  }
  append_points(svg, samples, false, top, lo, hi);
  append_points(svg, samples, true, side, lo, hi);
  svg += "</svg>\n";
  return svg;
}

std::array<RomCoverage, 4> ideal_rom_coverage(const RomLimits& rom) {
  auto entry = [](const char* name, double achieved_deg, double target_deg) {
    RomCoverage c;
    c.direction = name;
    c.achieved_deg = achieved_deg;
    c.target_deg = target_deg;
    c.met = achieved_deg + 1e-9 >= target_deg;
    return c;
  };
  return {entry("flexion", rad2deg(rom.flexion_max), 54.0),
          entry("extension", rad2deg(-rom.flexion_min), 60.0),
          entry("ulnar", rad2deg(rom.deviation_max), 40.0),
          entry("radial", rad2deg(-rom.deviation_min), 17.0)};
}

}  // namespace wristsim
