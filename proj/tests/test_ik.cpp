#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <wristsim/chain_io.hpp>
#include <wristsim/ik.hpp>

#include <cmath>
#include <random>

using namespace wristsim;

namespace {

Chain<double> composite() {
  return mount_wrist_on_arm(default_arm_chain(), default_wrist_chain());
}

VectorX<double> random_posture(std::mt19937& rng, const Chain<double>& chain,
                               double arm_span, double wrist_frac) {
  std::uniform_real_distribution<double> arm(-arm_span, arm_span);
  std::uniform_real_distribution<double> unit(-wrist_frac, wrist_frac);
  VectorX<double> q(chain.dof());
  for (int j = 0; j < chain.dof(); ++j) {
    if (j < 6) {
      q[j] = arm(rng);
    } else {
      q[j] = unit(rng) * chain.limit_max[static_cast<size_t>(j)];
    }
  }
  return q;
}

}  // namespace

TEST_CASE("reaches poses sampled from the chain itself") {
  const Chain<double> chain = composite();
  std::mt19937 rng(42);
  std::uniform_real_distribution<double> noise(-0.2, 0.2);
  for (int trial = 0; trial < 40; ++trial) {
    const VectorX<double> q_true = random_posture(rng, chain, 1.5, 0.8);
    const Isometry3d target = forward_kinematics(chain, q_true);
    VectorX<double> seed = q_true;
    for (int j = 0; j < chain.dof(); ++j) seed[j] += noise(rng);

    const IkResult r = solve_ik(chain, target, seed);
    REQUIRE(r.converged);
    CHECK(r.pos_err_mm <= 0.1);
    CHECK(r.ori_err_rad <= 1e-3);
    const Isometry3d reached = forward_kinematics(chain, r.q);
    CHECK((reached.translation() - target.translation()).norm() <= 0.1);
    CHECK(rotation_distance(reached.linear(), target.linear()) <= 1e-3);
    for (int j = 0; j < chain.dof(); ++j) {
      CHECK(r.q[j] >= chain.limit_min[static_cast<size_t>(j)]);
      CHECK(r.q[j] <= chain.limit_max[static_cast<size_t>(j)]);
    }
  }
}

TEST_CASE("seed already at the target returns immediately") {
  const Chain<double> chain = composite();
  VectorX<double> q = VectorX<double>::Zero(8);
  q[1] = -0.6;
  q[2] = 1.1;
  const IkResult r = solve_ik(chain, forward_kinematics(chain, q), q);
  CHECK(r.converged);
  CHECK(r.iterations == 0);
  CHECK(r.q == q);
}

TEST_CASE("locked joints stay at their seed value") {
  const Chain<double> chain = composite();
  std::mt19937 rng(7);
  for (int trial = 0; trial < 10; ++trial) {
    VectorX<double> q_true = random_posture(rng, chain, 1.2, 0.0);
    q_true[6] = 0.0;
    q_true[7] = 0.0;
    const Isometry3d target = forward_kinematics(chain, q_true);
    VectorX<double> seed = q_true;
    for (int j = 0; j < 6; ++j) seed[j] += 0.1;

    const IkResult r = solve_ik(chain, target, seed, {6, 7});
    REQUIRE(r.converged);
    CHECK(r.q[6] == 0.0);
    CHECK(r.q[7] == 0.0);
  }
}

TEST_CASE("unreachable targets come back as a value") {
  const Chain<double> chain = composite();
  Isometry3d far = Isometry3d::Identity();
  far.translation() << 3000.0, 0.0, 0.0;
  const VectorX<double> seed = VectorX<double>::Zero(8);
  IkResult r;
  CHECK_NOTHROW(r = solve_ik(chain, far, seed));
  CHECK_FALSE(r.converged);
  CHECK(r.pos_err_mm > 100.0);
  CHECK(r.attempts >= 1);
  CHECK(r.q.allFinite());
}

TEST_CASE("restarts are reproducible") {
  const Chain<double> chain = composite();
  // A target that typically needs more than the first attempt: flip the
  // tool over far from the zero seed.
  VectorX<double> q_true(8);
  q_true << 2.0, -1.2, 1.8, -2.2, -1.5, 1.0, 0.3, -0.9;
  const Isometry3d target = forward_kinematics(chain, q_true);
  const VectorX<double> seed = VectorX<double>::Zero(8);
  const IkResult a = solve_ik(chain, target, seed);
  const IkResult b = solve_ik(chain, target, seed);
  CHECK(a.q == b.q);
  CHECK(a.converged == b.converged);
  CHECK(a.attempts == b.attempts);
  CHECK(a.iterations == b.iterations);
}

TEST_CASE("seed bias keeps the redundant solution near the seed") {
  const Chain<double> chain = composite();
  std::mt19937 rng(13);
  double with_bias = 0.0;
  double without = 0.0;
  int solved_pairs = 0;
  for (int trial = 0; trial < 20; ++trial) {
    const VectorX<double> q_true = random_posture(rng, chain, 1.0, 0.5);
    const Isometry3d target = forward_kinematics(chain, q_true);
    VectorX<double> seed = q_true;
    for (int j = 0; j < chain.dof(); ++j) seed[j] += 0.15;

    IkOptions biased;
    IkOptions plain;
    plain.seed_bias = 0.0;
    const IkResult rb = solve_ik(chain, target, seed, {}, biased);
    const IkResult rp = solve_ik(chain, target, seed, {}, plain);
    if (rb.converged && rp.converged) {
      with_bias += (rb.q - seed).squaredNorm();
      without += (rp.q - seed).squaredNorm();
      ++solved_pairs;
    }
  }
  REQUIRE(solved_pairs >= 15);
  CHECK(with_bias <= without * 1.05);
}

TEST_CASE("manipulability collapses at singular postures") {
  const Chain<double> arm = default_arm_chain();
  CHECK(manipulability(arm, VectorX<double>::Zero(6)) < 1e-12);

  VectorX<double> bent(6);
  bent << 0.0, -0.5, pi_v<double> / 2.0, 0.3, 0.5, 0.0;
  CHECK(manipulability(arm, bent) > 1e-3);

  // Straight elbow with everything else healthy still reads singular.
  VectorX<double> stretch(6);
  stretch << 0.2, -0.7, 0.0, 0.1, 0.4, 0.1;
  CHECK(manipulability(arm, stretch) < 1e-10);

  CHECK_THROWS_AS(manipulability(default_wrist_chain(),
                                 VectorX<double>::Zero(2)),
                  std::invalid_argument);
}

TEST_CASE("manipulability equals sqrt det of the scaled gram matrix") {
  const Chain<double> chain = composite();
  std::mt19937 rng(3);
  for (int trial = 0; trial < 5; ++trial) {
    const VectorX<double> q = random_posture(rng, chain, 1.3, 0.6);
    Matrix6X<double> jac = jacobian(chain, q);
    jac.topRows<3>() /= 1000.0;
    const double expected =
        std::sqrt((jac * jac.transpose()).determinant());
    CHECK(manipulability(chain, q) == doctest::Approx(expected).epsilon(1e-9));
  }
}

TEST_CASE("input validation") {
  const Chain<double> chain = composite();
  const Isometry3d target = Isometry3d::Identity();
  CHECK_THROWS_AS(solve_ik(chain, target, VectorX<double>::Zero(7)),
                  std::invalid_argument);
  CHECK_THROWS_AS(solve_ik(chain, target, VectorX<double>::Zero(8), {-1}),
                  std::invalid_argument);
  CHECK_THROWS_AS(solve_ik(chain, target, VectorX<double>::Zero(8), {8}),
                  std::invalid_argument);
  Isometry3d bad = Isometry3d::Identity();
  bad.translation() << std::nan(""), 0.0, 0.0;
  CHECK_THROWS_AS(solve_ik(chain, bad, VectorX<double>::Zero(8)),
                  std::invalid_argument);
}
