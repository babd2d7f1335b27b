#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cotrans/spatial.hpp>

#include <cmath>
#include <random>

using namespace cotrans;

namespace {

std::mt19937 rng(12345);

Vec3 rand_vec3(double scale = 1.0) {
  std::normal_distribution<double> n(0.0, scale);
  return Vec3(n(rng), n(rng), n(rng));
}

Mat3 rand_rotation() {
  std::normal_distribution<double> n(0.0, 1.0);
  Eigen::Quaterniond q(n(rng), n(rng), n(rng), n(rng));
  return q.normalized().toRotationMatrix();
}

}  // namespace

TEST_CASE("skew matches the cross product and is antisymmetric") {
  CHECK(skew(Vec3::Zero()).isZero(0.0));

  Mat3 S;
  S << 0, -3, 2, 3, 0, -1, -2, 1, 0;
  CHECK((skew(Vec3(1, 2, 3)) - S).cwiseAbs().maxCoeff() == 0.0);

  for (int i = 0; i < 100; ++i) {
    const Vec3 v = rand_vec3(), u = rand_vec3();
    CHECK((skew(v) * u - v.cross(u)).norm() <= 1e-12);
    CHECK((skew(v) + skew(v).transpose()).cwiseAbs().maxCoeff() == 0.0);
    CHECK((skew(v) * v).norm() == 0.0);
    CHECK((skew(v) * u + skew(u) * v).norm() <= 1e-12);
  }
}

TEST_CASE("vee inverts skew exactly and rejects non-skew input") {
  CHECK(vee(Mat3::Zero()).norm() == 0.0);
  for (int i = 0; i < 100; ++i) {
    const Vec3 v = rand_vec3(10.0);
    CHECK((vee(skew(v)) - v).norm() == 0.0);  // element extraction, no arithmetic
  }
  Mat3 bad = Mat3::Identity();
  CHECK_THROWS_AS(vee(bad), std::invalid_argument);
}

TEST_CASE("skew-of-vee is identity on skew-symmetric matrices") {
  for (int i = 0; i < 50; ++i) {
    const Mat3 S = skew(rand_vec3(3.0));
    CHECK((skew(vee(S)) - S).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("rpy composition is Z-Y-X intrinsic") {
  CHECK((rpy_to_rot(0, 0, 0) - Mat3::Identity()).cwiseAbs().maxCoeff() == 0.0);

  Mat3 yaw90;
  yaw90 << 0, -1, 0, 1, 0, 0, 0, 0, 1;
  CHECK((rpy_to_rot(0, 0, M_PI / 2) - yaw90).cwiseAbs().maxCoeff() <= 1e-15);

  // Composition order: yaw about world z, then pitch about the new y, then roll about the new x.
  const double r = 0.3, p = -0.4, y = 1.1;
  const Mat3 expect = (Eigen::AngleAxisd(y, Vec3::UnitZ()) *
                       Eigen::AngleAxisd(p, Vec3::UnitY()) *
                       Eigen::AngleAxisd(r, Vec3::UnitX()))
                          .toRotationMatrix();
  CHECK((rpy_to_rot(r, p, y) - expect).cwiseAbs().maxCoeff() <= 1e-15);
}

TEST_CASE("rpy round trip away from gimbal lock") {
  std::uniform_real_distribution<double> ang(-M_PI + 0.01, M_PI - 0.01);
  std::uniform_real_distribution<double> pit(-M_PI / 2 + 0.01, M_PI / 2 - 0.01);
  for (int i = 0; i < 200; ++i) {
    const double r = ang(rng), p = pit(rng), y = ang(rng);
    const Vec3 back = rot_to_rpy(rpy_to_rot(r, p, y));
    CHECK((back - Vec3(r, p, y)).cwiseAbs().maxCoeff() <= 1e-9);
  }
}

TEST_CASE("rpy extraction rejects gimbal-lock proximity") {
  CHECK_THROWS_AS(rot_to_rpy(rpy_to_rot(0.2, M_PI / 2, 0.1)), NumericalError);
  CHECK_THROWS_AS(rot_to_rpy(rpy_to_rot(0.0, -M_PI / 2 + 1e-9, 0.0)), NumericalError);
}

TEST_CASE("quaternion conversions: canonical hemisphere and round trip") {
  CHECK((quat_to_rot(Vec4(1, 0, 0, 0)) - Mat3::Identity()).cwiseAbs().maxCoeff() == 0.0);

  Mat3 flipx = Eigen::Vector3d(1, -1, -1).asDiagonal();
  CHECK((quat_to_rot(Vec4(0, 1, 0, 0)) - flipx).cwiseAbs().maxCoeff() <= 1e-15);

  std::normal_distribution<double> n(0.0, 1.0);
  for (int i = 0; i < 100; ++i) {
    Vec4 q(n(rng), n(rng), n(rng), n(rng));
    q.normalize();
    if (q(0) < 0) q = -q;
    const Vec4 back = rot_to_quat(quat_to_rot(q));
    CHECK((back - q).cwiseAbs().maxCoeff() <= 1e-9);
    CHECK(back(0) >= 0.0);
  }
  CHECK_THROWS_AS(quat_to_rot(Vec4(1.1, 0, 0, 0)), std::invalid_argument);
}

TEST_CASE("parallel axis: zero offset, unit example, and displaced-point-cloud oracle") {
  const Mat3 J = (Vec3(1.4255, 1.4255, 0.8411)).asDiagonal();
  CHECK((parallel_axis(J, 5.0, Vec3::Zero()) - J).cwiseAbs().maxCoeff() == 0.0);

  const Mat3 unit = parallel_axis(Mat3::Identity(), 1.0, Vec3(1, 0, 0));
  CHECK((unit - Mat3(Vec3(1, 2, 2).asDiagonal())).cwiseAbs().maxCoeff() == 0.0);

  // Oracle: six symmetric point masses realizing J exactly about their center
  // of mass, then inertia about the displaced point by direct summation.
  const double m = 5.0;
  const Vec3 dbar(0.74, 0.01, -0.2);
  const double A = J(0, 0), B = J(1, 1), C = J(2, 2);
  const double u = (B + C - A) / 2, v = (A + C - B) / 2, w = (A + B - C) / 2;
  const double ax = std::sqrt(3 * u / m), ay = std::sqrt(3 * v / m), az = std::sqrt(3 * w / m);
  std::vector<Vec3> pts = {{ax, 0, 0}, {-ax, 0, 0}, {0, ay, 0}, {0, -ay, 0}, {0, 0, az}, {0, 0, -az}};
  Mat3 cloud = Mat3::Zero();
  for (const Vec3& pt : pts) {
    const Vec3 r = pt + dbar;
    cloud += (m / 6.0) * (r.squaredNorm() * Mat3::Identity() - r * r.transpose());
  }
  const Mat3 Jd = parallel_axis(J, m, dbar);
  CHECK((Jd - cloud).cwiseAbs().maxCoeff() <= 1e-9);

  Mat3 frozen;
  frozen << 1.626, -0.037, 0.74,
            -0.037, 4.3635, 0.01,
            0.74, 0.01, 3.5796;
  CHECK((Jd - frozen).cwiseAbs().maxCoeff() <= 1e-12);

  CHECK_THROWS_AS(parallel_axis(J, -1.0, dbar), std::invalid_argument);
  Mat3 asym = J;
  asym(0, 1) = 1e-6;
  CHECK_THROWS_AS(parallel_axis(asym, 1.0, dbar), std::invalid_argument);
}

TEST_CASE("parallel axis is monotone in the Loewner order") {
  std::uniform_real_distribution<double> um(0.1, 10.0);
  for (int i = 0; i < 100; ++i) {
    const Mat3 Q = rand_rotation();
    const Mat3 J = Q * Vec3(um(rng), um(rng), um(rng)).asDiagonal() * Q.transpose();
    const Mat3 Jsym = 0.5 * (J + J.transpose());
    const Mat3 Jd = parallel_axis(Jsym, um(rng), rand_vec3());
    Eigen::SelfAdjointEigenSolver<Mat3> es(Jd - Jsym);
    CHECK(es.eigenvalues().minCoeff() >= -1e-12);
  }
}

TEST_CASE("exp_so3: closed form, inverse, small-angle bound") {
  CHECK((exp_so3(Vec3::Zero()) - Mat3::Identity()).cwiseAbs().maxCoeff() == 0.0);

  Mat3 zpi = Eigen::Vector3d(-1, -1, 1).asDiagonal();
  CHECK((exp_so3(Vec3(0, 0, M_PI)) - zpi).cwiseAbs().maxCoeff() <= 1e-15);

  for (int i = 0; i < 100; ++i) {
    const Vec3 a = rand_vec3();
    CHECK((exp_so3(a) * exp_so3(-a) - Mat3::Identity()).cwiseAbs().maxCoeff() <= 1e-9);
    CHECK(is_rotation(exp_so3(a), 1e-12));
  }

  for (int i = 0; i < 50; ++i) {
    const Vec3 a = rand_vec3(1e-4);
    CHECK((exp_so3(a) - Mat3::Identity() - skew(a)).cwiseAbs().maxCoeff() <= a.squaredNorm());
  }
}

TEST_CASE("dexpinv reproduces the exp derivative") {
  // d/dt exp(theta(t)) = skew(w) exp(theta) requires theta_dot = dexpinv(theta, w).
  const double h = 1e-6;
  for (int i = 0; i < 50; ++i) {
    const Vec3 theta = rand_vec3(0.1), want_w = rand_vec3();
    const Vec3 td = dexpinv(theta, want_w);
    const Mat3 dR = (exp_so3(theta + h * td) - exp_so3(theta - h * td)) / (2 * h);
    const Mat3 W = dR * exp_so3(theta).transpose();
    const Vec3 got_w = vee(0.5 * (W - W.transpose()));
    CHECK((got_w - want_w).norm() <= 1e-4 * std::max(1.0, want_w.norm()));
  }
}

TEST_CASE("orthonormalize repairs drifted rotations") {
  for (int i = 0; i < 100; ++i) {
    Mat3 R = rand_rotation();
    Mat3 drift = R + 1e-6 * Mat3::Random();
    const Mat3 fixed = orthonormalize(drift);
    CHECK(is_rotation(fixed, 1e-12));
    CHECK((fixed - R).cwiseAbs().maxCoeff() <= 1e-5);
  }
}
