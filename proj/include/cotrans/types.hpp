#pragma once

#include <Eigen/Dense>
#include <stdexcept>

namespace cotrans {

using Vec3 = Eigen::Vector3d;
using Vec4 = Eigen::Vector4d;
using Vec6 = Eigen::Matrix<double, 6, 1>;
using Vec10 = Eigen::Matrix<double, 10, 1>;
using Mat3 = Eigen::Matrix3d;
using Mat6 = Eigen::Matrix<double, 6, 6>;
using Mat6x10 = Eigen::Matrix<double, 6, 10>;
using Mat6x3 = Eigen::Matrix<double, 6, 3>;

inline constexpr double kGravity = 9.81;  // m/s^2

enum class GravityMode { Earth, Zero };

// Gravitational acceleration vector in the world frame (z up).
inline Vec3 gravity_accel(GravityMode mode) {
  return mode == GravityMode::Earth ? Vec3(0.0, 0.0, -kGravity) : Vec3::Zero();
}

struct Wrench {
  Vec3 force{Vec3::Zero()};    // N
  Vec3 torque{Vec3::Zero()};   // N*m

  Vec6 vec() const {
    Vec6 w;
    w << force, torque;
    return w;
  }
  static Wrench from_vec(const Vec6& w) { return {w.head<3>(), w.tail<3>()}; }
};

// Raised on malformed or inconsistent run configuration; maps to exit code 2.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Raised on filesystem failures; maps to exit code 4.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Raised on numerical degeneracy (ill-conditioned inertia, singular allocation).
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace cotrans
