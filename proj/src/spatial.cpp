#include "cotrans/spatial.hpp"

#include <cmath>

namespace cotrans {

Mat3 skew(const Vec3& v) {
  Mat3 S;
  S << 0.0, -v.z(), v.y(),
       v.z(), 0.0, -v.x(),
      -v.y(), v.x(), 0.0;
  return S;
}

Vec3 vee(const Mat3& S) {
  if ((S + S.transpose()).cwiseAbs().maxCoeff() > 1e-9) {
    throw std::invalid_argument("vee: input is not skew-symmetric within 1e-9");
  }
  return Vec3(S(2, 1), S(0, 2), S(1, 0));
}

bool is_rotation(const Mat3& R, double tol) {
  if (!R.allFinite()) return false;
  if ((R.transpose() * R - Mat3::Identity()).cwiseAbs().maxCoeff() > tol) return false;
  return std::abs(R.determinant() - 1.0) <= tol;
}

Mat3 orthonormalize(const Mat3& R) {
  Eigen::Quaterniond q(R);
  return q.normalized().toRotationMatrix();
}

Mat3 rpy_to_rot(double roll, double pitch, double yaw) {
  return (Eigen::AngleAxisd(yaw, Vec3::UnitZ()) *
          Eigen::AngleAxisd(pitch, Vec3::UnitY()) *
          Eigen::AngleAxisd(roll, Vec3::UnitX()))
      .toRotationMatrix();
}

Vec3 rot_to_rpy(const Mat3& R) {
  // R(2,0) = -sin(pitch); guard the chart singularity at |pitch| = pi/2.
  const double guard = std::sin(M_PI / 2.0 - 1e-6);
  if (std::abs(R(2, 0)) >= guard) {
    throw NumericalError("rot_to_rpy: pitch within 1e-6 rad of gimbal lock");
  }
  const double pitch = -std::asin(R(2, 0));
  const double roll = std::atan2(R(2, 1), R(2, 2));
  const double yaw = std::atan2(R(1, 0), R(0, 0));
  return Vec3(roll, pitch, yaw);
}

Vec4 rot_to_quat(const Mat3& R) {
  Eigen::Quaterniond q(R);
  q.normalize();
  Vec4 out(q.w(), q.x(), q.y(), q.z());
  bool flip = out(0) < 0.0;
  if (out(0) == 0.0) {
    for (int i = 1; i < 4; ++i) {
      if (out(i) != 0.0) {
        flip = out(i) < 0.0;
        break;
      }
    }
  }
  return flip ? Vec4(-out) : out;
}

Mat3 quat_to_rot(const Vec4& q) {
  if (std::abs(q.norm() - 1.0) > 1e-9) {
    throw std::invalid_argument("quat_to_rot: quaternion norm deviates from 1 beyond 1e-9");
  }
  return Eigen::Quaterniond(q(0), q(1), q(2), q(3)).normalized().toRotationMatrix();
}

Mat3 parallel_axis(const Mat3& J_cm, double m, const Vec3& d) {
  if ((J_cm - J_cm.transpose()).cwiseAbs().maxCoeff() > 1e-9) {
    throw std::invalid_argument("parallel_axis: inertia matrix asymmetric beyond 1e-9");
  }
  if (m < 0.0) {
    throw std::invalid_argument("parallel_axis: mass must be non-negative");
  }
  return J_cm + m * (d.squaredNorm() * Mat3::Identity() - d * d.transpose());
}

Mat3 exp_so3(const Vec3& w) {
  const double a = w.norm();
  const Mat3 S = skew(w);
  if (a < 1e-10) {
    return Mat3::Identity() + S + 0.5 * S * S;
  }
  return Mat3::Identity() + (std::sin(a) / a) * S + ((1.0 - std::cos(a)) / (a * a)) * S * S;
}

Vec3 dexpinv(const Vec3& theta, const Vec3& w) {
  return w - 0.5 * theta.cross(w) + (1.0 / 12.0) * theta.cross(theta.cross(w));
}

}  // namespace cotrans
