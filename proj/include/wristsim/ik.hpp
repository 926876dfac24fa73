#pragma once

#include <wristsim/kinematics.hpp>

#include <cstdint>
#include <vector>

// Damped least squares inverse kinematics with joint locking, limit
// clamping and seeded random restarts. Joints riding a range stop are
// dropped from the step so the remaining joints absorb the motion.
// Infeasibility is reported in the result, never thrown.

namespace wristsim {

struct IkOptions {
  double pos_tol_mm = 0.1;
  double ori_tol_rad = 1e-3;
  int max_iters = 300;
  double damping = 1.0;        ///< lambda of the damped pseudo-inverse
  double step_cap_rad = 0.2;   ///< per-joint, per-iteration update clamp
  double ori_weight = 100.0;   ///< mm of error per rad of orientation error
  double seed_bias = 0.05;     ///< null-space pull toward the seed posture
  int restarts = 3;            ///< extra attempts from perturbed seeds
  uint32_t rng_seed = 0;       ///< restart perturbations are reproducible
};

struct IkResult {
  VectorX<double> q;
  bool converged = false;
  int iterations = 0;   ///< across all attempts
  int attempts = 1;
  double pos_err_mm = 0.0;
  double ori_err_rad = 0.0;
};

/// Solves chain FK(q) = target starting from seed. Joints listed in
/// `locked` are frozen at their seed value and excluded from the update.
/// The solution is clamped to the chain limits every iteration.
IkResult solve_ik(const Chain<double>& chain, const Isometry3d& target,
                  const VectorX<double>& seed,
                  const std::vector<int>& locked = {},
                  const IkOptions& opts = {});

/// Product of the singular values of the geometric Jacobian with the
/// translation rows expressed in metres, so healthy postures score O(0.01)
/// and singular ones collapse toward zero. Chains with fewer than six
/// joints throw std::invalid_argument.
double manipulability(const Chain<double>& chain, const VectorX<double>& q);

/// Orientation distance as the rotation angle taking `a` onto `b`, rad.
double rotation_distance(const Eigen::Matrix3d& a, const Eigen::Matrix3d& b);

}  // namespace wristsim
