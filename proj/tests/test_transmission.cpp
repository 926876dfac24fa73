#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <wristsim/chain_io.hpp>
#include <wristsim/transmission.hpp>

#include <cmath>
#include <random>

using namespace wristsim;

TEST_CASE("golden wrist command") {
  const WristCommand cmd = wrist_command({deg2rad(30.0), 0.0});
  CHECK(cmd.deviation_ticks == 2389);
  CHECK(cmd.flexion_ticks == 2048);

  const ServoBank bank = ServoBank::defaults();
  const auto& dev = bank.by_role(ServoRole::wrist_dev);
  CHECK(std::abs(servo_to_angle(dev, 2389) - deg2rad(30.0)) <=
        dev.gain_rad_per_tick / 2.0);
  CHECK(servo_to_angle(bank.by_role(ServoRole::wrist_flex), 2048) == 0.0);
}

TEST_CASE("tick roundtrip is the identity") {
  const ServoCalibration cal = ServoBank::defaults().servos[2];
  for (int t = 0; t < 4096; ++t) {
    CHECK(angle_to_servo(cal, servo_to_angle(cal, t)) == t);
  }
}

TEST_CASE("quantisation error is at most half a tick") {
  const ServoCalibration cal = ServoBank::defaults().servos[3];
  std::mt19937 rng(99);
  const double span = 2047.0 * cal.gain_rad_per_tick;
  std::uniform_real_distribution<double> angle(-span, span);
  for (int i = 0; i < 20000; ++i) {
    const double a = angle(rng);
    const double back = servo_to_angle(cal, angle_to_servo(cal, a));
    CHECK(std::abs(back - a) <= cal.gain_rad_per_tick / 2.0 + 1e-15);
  }
}

TEST_CASE("tick map is odd around the centre") {
  const ServoCalibration cal = ServoBank::defaults().servos[2];
  const double g = cal.gain_rad_per_tick;
  for (double a : {g * 0.5, g * 1.5, g * 2.5, g * 10.0, g * 341.3333, 0.4}) {
    const int up = angle_to_servo(cal, a) - cal.center_ticks;
    const int dn = angle_to_servo(cal, -a) - cal.center_ticks;
    CHECK(up == -dn);
  }
}

TEST_CASE("range violations name the servo role") {
  const ServoBank bank = ServoBank::defaults();
  CHECK_THROWS_WITH_AS(servo_to_angle(bank.servos[2], -1),
                       doctest::Contains("wrist_dev"), std::out_of_range);
  CHECK_THROWS_WITH_AS(servo_to_angle(bank.servos[3], 4096),
                       doctest::Contains("wrist_flex"), std::out_of_range);
  // Centre 2048 leaves 2047 ticks of headroom upward, 2048 downward.
  const ServoCalibration& cal = bank.servos[0];
  CHECK_THROWS_AS(angle_to_servo(cal, 2048.0 * cal.gain_rad_per_tick),
                  std::out_of_range);
  CHECK_NOTHROW(angle_to_servo(cal, -2048.0 * cal.gain_rad_per_tick));
  CHECK_THROWS_AS(angle_to_servo(cal, std::nan("")), std::out_of_range);
}

TEST_CASE("sheathed routing decouples fingers from the wrist") {
  for (double s = 0.0; s <= 1.0; s += 0.1) {
    const TendonState ref = finger_tendon_displacement(s, {0.0, 0.0});
    for (double dev = -30.0; dev <= 30.0; dev += 10.0) {
      for (double flex = -90.0; flex <= 90.0; flex += 30.0) {
        const TendonState t =
            finger_tendon_displacement(s, {deg2rad(dev), deg2rad(flex)});
        CHECK(t.flexor_mm == ref.flexor_mm);
        CHECK(t.extensor_mm == ref.extensor_mm);
      }
    }
  }
}

TEST_CASE("unsheathed routing couples the wrist into the tendons") {
  const TendonParams p = TendonParams::unsheathed();
  // Hand-computed: 0.5 * 40 + 2 * deg2rad(10) + 5 * deg2rad(20).
  const WristState w{deg2rad(10.0), deg2rad(20.0)};
  const TendonState t = finger_tendon_displacement(0.5, w, p);
  CHECK(t.flexor_mm ==
        doctest::Approx(20.0 + 2.0 * deg2rad(10.0) + 5.0 * deg2rad(20.0)));
  CHECK(t.flexor_mm + t.extensor_mm == doctest::Approx(p.stroke_mm));

  const TendonState neutral = finger_tendon_displacement(0.5, {0.0, 0.0}, p);
  CHECK(t.flexor_mm != neutral.flexor_mm);

  // The antagonistic sum holds everywhere, not just at spot checks.
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_real_distribution<double> ang(-1.5, 1.5);
  for (int i = 0; i < 500; ++i) {
    const TendonState r =
        finger_tendon_displacement(u(rng), {ang(rng), ang(rng)}, p);
    CHECK(r.flexor_mm + r.extensor_mm == doctest::Approx(p.stroke_mm));
  }

  CHECK_THROWS_AS(finger_tendon_displacement(-0.1, w, p), std::domain_error);
  CHECK_THROWS_AS(finger_tendon_displacement(1.1, w, p), std::domain_error);
}

TEST_CASE("calibration json roundtrip and validation") {
  const ServoBank bank = ServoBank::defaults();
  const ServoBank back = parse_calibration(calibration_to_json(bank));
  for (size_t i = 0; i < 4; ++i) {
    CHECK(back.servos[i].id == bank.servos[i].id);
    CHECK(back.servos[i].role == bank.servos[i].role);
    CHECK(back.servos[i].center_ticks == bank.servos[i].center_ticks);
    CHECK(back.servos[i].gain_rad_per_tick == bank.servos[i].gain_rad_per_tick);
    CHECK(back.servos[i].speed_ticks_per_s == bank.servos[i].speed_ticks_per_s);
  }
  CHECK(bank.servos[0].id == 1);
  CHECK(bank.servos[3].id == 4);
  CHECK(bank.by_role(ServoRole::wrist_flex).id == 4);

  CHECK_THROWS_AS(parse_calibration("not json"), config_error);
  CHECK_THROWS_AS(parse_calibration("{\"servos\":[]}"), config_error);
  CHECK_THROWS_AS(
      parse_calibration(
          R"({"servos":[{"id":1,"role":"finger_flex"},{"id":1,"role":"finger_ext"},
              {"id":3,"role":"wrist_dev"},{"id":4,"role":"wrist_flex"}]})"),
      config_error);
  CHECK_THROWS_AS(
      parse_calibration(
          R"({"servos":[{"id":1,"role":"thumb"},{"id":2,"role":"finger_ext"},
              {"id":3,"role":"wrist_dev"},{"id":4,"role":"wrist_flex"}]})"),
      config_error);
  CHECK_THROWS_AS(
      parse_calibration(
          R"({"servos":[{"id":254,"role":"finger_flex"},{"id":2,"role":"finger_ext"},
              {"id":3,"role":"wrist_dev"},{"id":4,"role":"wrist_flex"}]})"),
      config_error);
  CHECK_THROWS_AS(
      parse_calibration(
          R"({"servos":[{"id":1,"role":"finger_flex"},{"id":2,"role":"finger_flex"},
              {"id":3,"role":"wrist_dev"},{"id":4,"role":"wrist_flex"}]})"),
      config_error);
}
