#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <wristsim/wrist_hand.hpp>

#include <cmath>
#include <limits>
#include <sstream>

using namespace wristsim;

namespace {

// Independently derived palm-centre position for the two-joint wrist.
Eigen::Vector3d palm_oracle(double dev, double flex) {
  const double reach = 34.0 + 48.0 * std::cos(flex);
  return {std::cos(dev) * reach, std::sin(dev) * reach, 48.0 * std::sin(flex)};
}

}  // namespace

TEST_CASE("rom box is closed at the boundary") {
  const RomLimits rom = RomLimits::standard();
  CHECK(in_rom({0.0, 0.0}, rom));
  CHECK(in_rom({rom.deviation_min, rom.flexion_max}, rom));
  CHECK(in_rom({rom.deviation_max, rom.flexion_min}, rom));
  CHECK_FALSE(in_rom({rom.deviation_max + 1e-6, 0.0}, rom));
  CHECK_FALSE(in_rom({0.0, rom.flexion_min - 1e-6}, rom));

  CHECK_NOTHROW(require_in_rom({rom.deviation_max, rom.flexion_max}, rom));
  CHECK_THROWS_WITH_AS(require_in_rom({deg2rad(31.0), 0.0}, rom),
                       doctest::Contains("deviation"), std::domain_error);
  CHECK_THROWS_WITH_AS(require_in_rom({0.0, deg2rad(-90.5)}, rom),
                       doctest::Contains("flexion"), std::domain_error);
}

TEST_CASE("wrist fk matches the closed form") {
  CHECK(wrist_fk({0.0, 0.0}).translation().isApprox(
      Eigen::Vector3d(82.0, 0.0, 0.0), 1e-12));
  CHECK((wrist_fk({0.0, deg2rad(90.0)}).translation() -
         Eigen::Vector3d(34.0, 0.0, 48.0))
            .norm() < 1e-12);
  for (double dev = -30.0; dev <= 30.0; dev += 3.0) {
    for (double flex = -90.0; flex <= 90.0; flex += 5.0) {
      const Eigen::Vector3d p =
          wrist_fk({deg2rad(dev), deg2rad(flex)}).translation();
      CHECK((p - palm_oracle(deg2rad(dev), deg2rad(flex))).norm() < 1e-9);
    }
  }
}

TEST_CASE("five degree grid has the expected shape") {
  const auto samples = palm_workspace(deg2rad(5.0));
  CHECK(samples.size() == 13 * 37);

  // Lexicographic (deviation, flexion) order.
  for (size_t i = 1; i < samples.size(); ++i) {
    const auto& a = samples[i - 1];
    const auto& b = samples[i];
    CHECK((b.deviation > a.deviation ||
           (b.deviation == a.deviation && b.flexion > a.flexion)));
  }

  const WorkspaceExtent e = workspace_extent(samples);
  CHECK(e.max_norm_mm == doctest::Approx(82.0).epsilon(1e-12));
  CHECK(e.z_min_mm == doctest::Approx(-48.0).epsilon(1e-12));
  CHECK(e.z_max_mm == doctest::Approx(48.0).epsilon(1e-12));
}

TEST_CASE("grid endpoints and zero survive any step") {
  for (double step_deg : {1.0, 7.0, 11.3, 29.0, 180.0}) {
    const auto samples = palm_workspace(deg2rad(step_deg));
    const WorkspaceExtent e = workspace_extent(samples);
    // Extremes come from always-included axis points: flexion +-90 gives the
    // z extent, flexion 0 gives the farthest palm position.
    CHECK(e.z_min_mm == doctest::Approx(-48.0).epsilon(1e-9));
    CHECK(e.z_max_mm == doctest::Approx(48.0).epsilon(1e-9));
    CHECK(e.max_norm_mm == doctest::Approx(82.0).epsilon(1e-9));
  }
  // Coarsest legal step collapses each axis to {min, 0, max}.
  CHECK(palm_workspace(deg2rad(180.0), RomLimits::standard()).size() == 9);
  CHECK_THROWS_AS(palm_workspace(0.0), std::invalid_argument);
  CHECK_THROWS_AS(palm_workspace(-0.1), std::invalid_argument);
  CHECK_THROWS_AS(palm_workspace(deg2rad(180.0) + 0.01), std::invalid_argument);
}

TEST_CASE("csv export is stable and parseable") {
  const auto samples = palm_workspace(deg2rad(30.0));
  const std::string csv = workspace_csv(samples);

  std::istringstream in(csv);
  std::string line;
  REQUIRE(std::getline(in, line));
  CHECK(line == "theta1_deg,theta2_deg,x_mm,y_mm,z_mm");

  size_t rows = 0;
  while (std::getline(in, line)) {
    double t1, t2, x, y, z;
    REQUIRE(std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf,%lf", &t1, &t2, &x, &y,
                        &z) == 5);
    const Eigen::Vector3d p = palm_oracle(deg2rad(t1), deg2rad(t2));
    CHECK((p - Eigen::Vector3d(x, y, z)).norm() < 1e-5);
    ++rows;
  }
  CHECK(rows == samples.size());
  CHECK(csv.find("-30.000000,-90.000000,") != std::string::npos);
}

TEST_CASE("svg export contains both projections") {
  const auto samples = palm_workspace(deg2rad(45.0));
  const std::string svg = workspace_svg(samples);
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(svg.find("top view (x-y)") != std::string::npos);
  CHECK(svg.find("side view (x-z)") != std::string::npos);
  size_t circles = 0;
  for (size_t at = svg.find("<circle"); at != std::string::npos;
       at = svg.find("<circle", at + 1)) {
    ++circles;
  }
  CHECK(circles == 2 * samples.size());
  CHECK(workspace_svg(samples) == svg);
}

TEST_CASE("grasp synergy expands linearly") {
  const auto open = synergy_expand(0.0);
  for (double q : open) CHECK(q == 0.0);

  const auto closed = synergy_expand(1.0);
  REQUIRE(closed.size() == 15);
  for (int finger = 0; finger < 5; ++finger) {
    CHECK(closed[3 * finger + 0] == doctest::Approx(deg2rad(90.0)));
    CHECK(closed[3 * finger + 1] == doctest::Approx(deg2rad(100.0)));
    CHECK(closed[3 * finger + 2] == doctest::Approx(deg2rad(80.0)));
  }

  auto prev = open;
  for (double s = 0.1; s <= 1.0; s += 0.1) {
    const auto q = synergy_expand(s);
    for (size_t i = 0; i < q.size(); ++i) CHECK(q[i] > prev[i]);
    prev = q;
  }

  CHECK_THROWS_AS(synergy_expand(-0.01), std::domain_error);
  CHECK_THROWS_AS(synergy_expand(1.01), std::domain_error);
  CHECK_THROWS_AS(synergy_expand(std::numeric_limits<double>::quiet_NaN()),
                  std::domain_error);
}

TEST_CASE("functional range coverage") {
  const auto std_cov = ideal_rom_coverage(RomLimits::standard());
  REQUIRE(std_cov.size() == 4);
  int unmet = 0;
  for (const auto& c : std_cov) {
    if (!c.met) {
      ++unmet;
      CHECK(c.direction == "ulnar");
      CHECK(c.achieved_deg == doctest::Approx(30.0));
      CHECK(c.target_deg == doctest::Approx(40.0));
    }
  }
  CHECK(unmet == 1);

  for (const auto& c : ideal_rom_coverage(RomLimits::extended_deviation())) {
    CHECK(c.met);
  }
}

TEST_CASE("hand geometry defaults") {
  const HandGeometry hand;
  CHECK(hand.height_mm == doctest::Approx(164.6));
  CHECK(hand.finger_length_mm == doctest::Approx(81.6));
  CHECK(hand.finger_base_angles[0] == doctest::Approx(deg2rad(-146.8)));
  CHECK(hand.finger_base_angles[4] == doctest::Approx(deg2rad(12.2)));
}
