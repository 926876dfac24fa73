#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

// Serial-chain kinematics over standard (distal) Denavit-Hartenberg rows.
//
// Conventions used throughout:
//   * lengths in millimetres, angles in radians
//   * a joint transform is  Rz(q + theta_offset) * Tz(d) * Tx(a) * Rx(alpha)
//   * world/base frame is the frame of the first row's parent

namespace wristsim {

template <typename Scalar>
using Isometry3 = Eigen::Transform<Scalar, 3, Eigen::Isometry>;

template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
using Matrix6X = Eigen::Matrix<Scalar, 6, Eigen::Dynamic>;

using Isometry3d = Isometry3<double>;

template <typename Scalar>
constexpr Scalar pi_v = Scalar(3.14159265358979323846L);

template <typename Scalar>
constexpr Scalar deg2rad(Scalar deg) {
  return deg * pi_v<Scalar> / Scalar(180);
}

template <typename Scalar>
constexpr Scalar rad2deg(Scalar rad) {
  return rad * Scalar(180) / pi_v<Scalar>;
}

/// One standard-DH row. `a` and `d` are mm, `alpha` and `theta_offset` rad.
template <typename Scalar>
struct DHRow {
  Scalar a = 0;
  Scalar alpha = 0;
  Scalar d = 0;
  Scalar theta_offset = 0;
};

using DHRowd = DHRow<double>;

template <typename Scalar>
void validate(const DHRow<Scalar>& row) {
  if (!(row.a >= Scalar(0)) || !std::isfinite(double(row.a)))
    throw std::invalid_argument("DHRow: link length a must be finite and >= 0");
  if (!std::isfinite(double(row.d)))
    throw std::invalid_argument("DHRow: offset d must be finite");
  const Scalar pi = pi_v<Scalar>;
  if (!(row.alpha > -pi && row.alpha <= pi))
    throw std::invalid_argument("DHRow: alpha must lie in (-pi, pi]");
  if (!(row.theta_offset > -pi && row.theta_offset <= pi))
    throw std::invalid_argument("DHRow: theta_offset must lie in (-pi, pi]");
}

/// Transform contributed by one row at joint angle q:
///   Rz(q + theta_offset) * Tz(d) * Tx(a) * Rx(alpha)
template <typename Scalar>
Isometry3<Scalar> dh_transform(const DHRow<Scalar>& row, Scalar q) {
  if (!std::isfinite(double(q)))
    throw std::invalid_argument("dh_transform: joint angle must be finite");
  using Vec3 = Eigen::Matrix<Scalar, 3, 1>;
  Isometry3<Scalar> t = Isometry3<Scalar>::Identity();
  t.rotate(Eigen::AngleAxis<Scalar>(q + row.theta_offset, Vec3::UnitZ()));
  t.translate(Vec3(Scalar(0), Scalar(0), row.d));
  t.translate(Vec3(row.a, Scalar(0), Scalar(0)));
  t.rotate(Eigen::AngleAxis<Scalar>(row.alpha, Vec3::UnitX()));
  return t;
}

/// An open serial chain of revolute joints with per-joint limits and speeds.
/// limit_min/limit_max are rad, max_speed is rad/s.
template <typename Scalar>
struct Chain {
  std::vector<DHRow<Scalar>> rows;
  VectorX<Scalar> limit_min;
  VectorX<Scalar> limit_max;
  VectorX<Scalar> max_speed;

  Eigen::Index dof() const { return Eigen::Index(rows.size()); }
};

using Chaind = Chain<double>;

template <typename Scalar>
void validate(const Chain<Scalar>& chain) {
  const auto n = chain.dof();
  if (n == 0) throw std::invalid_argument("Chain: must have at least one row");
  if (chain.limit_min.size() != n || chain.limit_max.size() != n ||
      chain.max_speed.size() != n)
    throw std::invalid_argument("Chain: limit/speed vectors must match row count");
  for (const auto& row : chain.rows) validate(row);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!(chain.limit_min[i] < chain.limit_max[i]))
      throw std::invalid_argument("Chain: joint " + std::to_string(i) +
                                  " needs limit_min < limit_max");
    if (!(chain.max_speed[i] > Scalar(0)))
      throw std::invalid_argument("Chain: joint " + std::to_string(i) +
                                  " needs max_speed > 0");
  }
}

template <typename Scalar, typename Derived>
void check_dof(const Chain<Scalar>& chain, const Eigen::MatrixBase<Derived>& q,
               const char* who) {
  static_assert(std::is_same_v<typename Derived::Scalar, Scalar>,
                "joint vector scalar type must match the chain's");
  if (q.size() != chain.dof() || q.cols() != 1)
    throw std::invalid_argument(std::string(who) +
                                ": joint vector size does not match chain dof");
}

/// Base-to-tool transform at joint vector q (any dense column expression).
template <typename Scalar, typename Derived>
Isometry3<Scalar> forward_kinematics(const Chain<Scalar>& chain,
                                     const Eigen::MatrixBase<Derived>& q) {
  check_dof(chain, q, "forward_kinematics");
  Isometry3<Scalar> t = Isometry3<Scalar>::Identity();
  for (Eigen::Index i = 0; i < chain.dof(); ++i)
    t = t * dh_transform(chain.rows[size_t(i)], Scalar(q[i]));
  return t;
}

/// Transforms from base to every joint frame (result[i] is the pose after
/// applying rows 0..i). result.back() equals forward_kinematics().
template <typename Scalar, typename Derived>
std::vector<Isometry3<Scalar>> frame_transforms(
    const Chain<Scalar>& chain, const Eigen::MatrixBase<Derived>& q) {
  check_dof(chain, q, "frame_transforms");
  std::vector<Isometry3<Scalar>> frames;
  frames.reserve(size_t(chain.dof()));
  Isometry3<Scalar> t = Isometry3<Scalar>::Identity();
  for (Eigen::Index i = 0; i < chain.dof(); ++i) {
    t = t * dh_transform(chain.rows[size_t(i)], Scalar(q[i]));
    frames.push_back(t);
  }
  return frames;
}

/// World-frame axis of revolute joint i at configuration q (the z axis the
/// joint rotates about, i.e. the z of frame i-1).
template <typename Scalar, typename Derived>
Eigen::Matrix<Scalar, 3, 1> joint_axis(const Chain<Scalar>& chain,
                                       const Eigen::MatrixBase<Derived>& q,
                                       Eigen::Index joint) {
  check_dof(chain, q, "joint_axis");
  if (joint < 0 || joint >= chain.dof())
    throw std::invalid_argument("joint_axis: joint index out of range");
  Isometry3<Scalar> t = Isometry3<Scalar>::Identity();
  for (Eigen::Index i = 0; i < joint; ++i)
    t = t * dh_transform(chain.rows[size_t(i)], Scalar(q[i]));
  return t.linear().col(2);
}

/// Geometric Jacobian, 6 x dof. Rows 0-2: tool linear velocity (mm/rad),
/// rows 3-5: tool angular velocity (rad/rad). Column i belongs to joint i.
template <typename Scalar, typename Derived>
Matrix6X<Scalar> jacobian(const Chain<Scalar>& chain,
                          const Eigen::MatrixBase<Derived>& q) {
  check_dof(chain, q, "jacobian");
  using Vec3 = Eigen::Matrix<Scalar, 3, 1>;
  const auto frames = frame_transforms(chain, q);
  const Vec3 p_tool = frames.back().translation();

  Matrix6X<Scalar> j(6, chain.dof());
  Vec3 z_prev = Vec3::UnitZ();
  Vec3 p_prev = Vec3::Zero();
  for (Eigen::Index i = 0; i < chain.dof(); ++i) {
    if (i > 0) {
      z_prev = frames[size_t(i - 1)].linear().col(2);
      p_prev = frames[size_t(i - 1)].translation();
    }
    j.template block<3, 1>(0, i) = z_prev.cross(p_tool - p_prev);
    j.template block<3, 1>(3, i) = z_prev;
  }
  return j;
}

/// Concatenates two chains: distal rows are expressed relative to the
/// proximal tool frame, so FK(composite) == FK(proximal) * FK(distal).
template <typename Scalar>
Chain<Scalar> compose_chains(const Chain<Scalar>& proximal,
                             const Chain<Scalar>& distal) {
  if (proximal.rows.empty() || distal.rows.empty())
    throw std::invalid_argument("compose_chains: both chains must be non-empty");
  Chain<Scalar> out;
  out.rows = proximal.rows;
  out.rows.insert(out.rows.end(), distal.rows.begin(), distal.rows.end());
  const auto n = proximal.dof() + distal.dof();
  out.limit_min.resize(n);
  out.limit_max.resize(n);
  out.max_speed.resize(n);
  out.limit_min << proximal.limit_min, distal.limit_min;
  out.limit_max << proximal.limit_max, distal.limit_max;
  out.max_speed << proximal.max_speed, distal.max_speed;
  return out;
}

}  // namespace wristsim
