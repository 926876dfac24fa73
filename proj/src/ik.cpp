#include <wristsim/ik.hpp>

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace wristsim {

double rotation_distance(const Eigen::Matrix3d& a, const Eigen::Matrix3d& b) {
  return Eigen::AngleAxisd(b * a.transpose()).angle();
}

namespace {

Eigen::Vector3d rotation_error(const Eigen::Matrix3d& current,
                               const Eigen::Matrix3d& target) {
  const Eigen::AngleAxisd aa(target * current.transpose());
  return aa.angle() * aa.axis();
}

struct Attempt {
  VectorX<double> q;
  int iterations = 0;
  bool converged = false;
  double pos_err = 0.0;
  double ori_err = 0.0;
};

Attempt run_attempt(const Chain<double>& chain, const Isometry3d& target,
                    const VectorX<double>& start, const VectorX<double>& seed,
                    const std::vector<int>& free, const IkOptions& opts) {
  const auto nf = static_cast<Eigen::Index>(free.size());
  Attempt a;
  a.q = start;
  for (a.iterations = 0; a.iterations <= opts.max_iters; ++a.iterations) {
    const Isometry3d pose = forward_kinematics(chain, a.q);
    const Eigen::Vector3d ep = target.translation() - pose.translation();
    const Eigen::Vector3d er = rotation_error(pose.linear(), target.linear());
    a.pos_err = ep.norm();
    a.ori_err = er.norm();
    if (a.pos_err <= opts.pos_tol_mm && a.ori_err <= opts.ori_tol_rad) {
      a.converged = true;
      return a;
    }
    if (a.iterations == opts.max_iters) break;

    Eigen::Matrix<double, 6, 1> err;
    err << ep, opts.ori_weight * er;

    const Matrix6X<double> jac_full = jacobian(chain, a.q);
    Matrix6X<double> jac_all(6, nf);
    for (Eigen::Index k = 0; k < nf; ++k) {
      jac_all.col(k) = jac_full.col(free[static_cast<size_t>(k)]);
    }
    // Same weighting on the rows as on the error keeps the damped solve in
    // one consistent unit (mm).
    jac_all.bottomRows<3>() *= opts.ori_weight;

    // A joint pinned at a range stop with the step still pushing into the
    // stop contributes nothing. Dropping its column and re-solving lets the
    // damped step redistribute that motion instead of stalling against the
    // clamp. Each pass drops at least one column, so this terminates.
    std::vector<char> active(static_cast<size_t>(nf), 1);
    VectorX<double> dq = VectorX<double>::Zero(nf);
    for (;;) {
      Eigen::Index na = 0;
      for (char f : active) na += f;
      if (na == 0) break;
      Matrix6X<double> jac(6, na);
      Eigen::Index c = 0;
      for (Eigen::Index k = 0; k < nf; ++k) {
        if (active[static_cast<size_t>(k)]) jac.col(c++) = jac_all.col(k);
      }

      const Eigen::Matrix<double, 6, 6> gram =
          jac * jac.transpose() +
          opts.damping * opts.damping * Eigen::Matrix<double, 6, 6>::Identity();
      const auto solver = gram.ldlt();
      VectorX<double> step = jac.transpose() * solver.solve(err);

      if (opts.seed_bias > 0.0) {
        VectorX<double> toward(na);
        c = 0;
        for (Eigen::Index k = 0; k < nf; ++k) {
          if (!active[static_cast<size_t>(k)]) continue;
          const int j = free[static_cast<size_t>(k)];
          toward[c++] = opts.seed_bias * (seed[j] - a.q[j]);
        }
        // Project the bias into the task null space so it cannot fight the
        // primary error term.
        step += toward - jac.transpose() * solver.solve(jac * toward);
      }

      bool dropped = false;
      c = 0;
      for (Eigen::Index k = 0; k < nf; ++k) {
        if (!active[static_cast<size_t>(k)]) continue;
        const int j = free[static_cast<size_t>(k)];
        const double s = step[c++];
        const bool at_min = a.q[j] <= chain.limit_min[static_cast<size_t>(j)];
        const bool at_max = a.q[j] >= chain.limit_max[static_cast<size_t>(j)];
        if ((at_min && s < 0.0) || (at_max && s > 0.0)) {
          active[static_cast<size_t>(k)] = 0;
          dq[k] = 0.0;
          dropped = true;
        } else {
          dq[k] = s;
        }
      }
      if (!dropped) break;
    }

    for (Eigen::Index k = 0; k < nf; ++k) {
      const int j = free[static_cast<size_t>(k)];
      const double step =
          std::clamp(dq[k], -opts.step_cap_rad, opts.step_cap_rad);
      a.q[j] = std::clamp(a.q[j] + step, chain.limit_min[static_cast<size_t>(j)],
                          chain.limit_max[static_cast<size_t>(j)]);
    }
  }
  return a;
}

}  // namespace

IkResult solve_ik(const Chain<double>& chain, const Isometry3d& target,
                  const VectorX<double>& seed, const std::vector<int>& locked,
                  const IkOptions& opts) {
  validate(chain);
  const int n = chain.dof();
  if (seed.size() != n) {
    throw std::invalid_argument("ik seed size does not match chain dof");
  }
  if (!seed.allFinite() || !target.matrix().allFinite()) {
    throw std::invalid_argument("ik inputs must be finite");
  }
  std::vector<bool> is_locked(static_cast<size_t>(n), false);
  for (int j : locked) {
    if (j < 0 || j >= n) {
      throw std::invalid_argument("locked joint index out of range: " +
                                  std::to_string(j));
    }
    is_locked[static_cast<size_t>(j)] = true;
  }
  std::vector<int> free;
  for (int j = 0; j < n; ++j) {
    if (!is_locked[static_cast<size_t>(j)]) free.push_back(j);
  }

  std::mt19937 rng(opts.rng_seed);
  std::uniform_real_distribution<double> kick(-0.5, 0.5);

  IkResult result;
  result.q = seed;
  bool have = false;
  int total_iters = 0;
  for (int attempt = 0; attempt <= std::max(0, opts.restarts); ++attempt) {
    VectorX<double> start = seed;
    if (attempt > 0) {
      for (int j : free) {
        start[j] = std::clamp(seed[j] + kick(rng),
                              chain.limit_min[static_cast<size_t>(j)],
                              chain.limit_max[static_cast<size_t>(j)]);
      }
    }
    const Attempt a = run_attempt(chain, target, start, seed, free, opts);
    total_iters += a.iterations;
    const double score = a.pos_err + opts.ori_weight * a.ori_err;
    const double best =
        result.pos_err_mm + opts.ori_weight * result.ori_err_rad;
    if (!have || (a.converged && !result.converged) ||
        (a.converged == result.converged && score < best)) {
      result.q = a.q;
      result.converged = a.converged;
      result.pos_err_mm = a.pos_err;
      result.ori_err_rad = a.ori_err;
      result.attempts = attempt + 1;
      have = true;
    }
    if (result.converged) break;
  }
  result.iterations = total_iters;
  return result;
}

double manipulability(const Chain<double>& chain, const VectorX<double>& q) {
  if (chain.dof() < 6) {
    throw std::invalid_argument(
        "manipulability needs at least six joints, got " +
        std::to_string(chain.dof()));
  }
  Matrix6X<double> jac = jacobian(chain, q);
  jac.topRows<3>() /= 1000.0;
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(jac);
  return svd.singularValues().prod();
}

}  // namespace wristsim
