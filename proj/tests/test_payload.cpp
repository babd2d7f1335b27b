#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cotrans/payload.hpp"
#include "cotrans/spatial.hpp"

#include <Eigen/Eigenvalues>
#include <random>

using namespace cotrans;

namespace {

std::mt19937 rng(12345);

Vec3 rand_vec3(double scale = 1.0) {
  std::normal_distribution<double> n(0.0, scale);
  return Vec3(n(rng), n(rng), n(rng));
}

Vec6 rand_vec6(double scale = 1.0) {
  Vec6 v;
  for (int i = 0; i < 6; ++i) v[i] = std::normal_distribution<double>(0.0, scale)(rng);
  return v;
}

Mat3 rand_rot() {
  const Vec3 a = rand_vec3();
  return a.norm() < 1e-12 ? Mat3::Identity() : exp_so3(a);
}

PayloadParams rand_params() {
  std::uniform_real_distribution<double> um(0.5, 8.0);
  const double m = um(rng);
  Mat3 S;
  S << rand_vec3(), rand_vec3(), rand_vec3();
  const Mat3 J = S * S.transpose() + 0.3 * Mat3::Identity();
  return PayloadParams(m, J, rand_vec3(0.5));
}

PayloadParams table_params() {
  const Mat3 j_cm = Vec3(1.4255, 1.4255, 0.8411).asDiagonal();
  return PayloadParams(5.0, j_cm, Vec3(0.74, 0.01, -0.2));
}

}  // namespace

TEST_CASE("payload parameter validation") {
  const Mat3 j = Mat3::Identity();
  CHECK_THROWS_AS(PayloadParams(0.0, j, Vec3::Zero()), std::invalid_argument);
  CHECK_THROWS_AS(PayloadParams(-1.0, j, Vec3::Zero()), std::invalid_argument);

  Mat3 neg = Vec3(1.0, -0.5, 1.0).asDiagonal();
  CHECK_THROWS_AS(PayloadParams(1.0, neg, Vec3::Zero()), std::invalid_argument);

  Mat3 asym = j;
  asym(0, 1) = 0.3;  // no matching (1,0) entry
  CHECK_THROWS_AS(PayloadParams(1.0, asym, Vec3::Zero()), std::invalid_argument);

  Mat3 inf = j;
  inf(2, 2) = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(PayloadParams(1.0, inf, Vec3::Zero()), std::invalid_argument);
}

TEST_CASE("parameter packing round trip") {
  const PayloadParams p = table_params();
  const Vec10 phi = p.phi();
  double m;
  Vec3 md;
  Mat3 J;
  unpack_phi(phi, m, md, J);
  CHECK(m == p.mass);
  CHECK((md - p.mass * p.com_offset).norm() == 0.0);
  CHECK((J - p.inertia_ref()).norm() == 0.0);
  CHECK((pack_phi(m, md, J) - phi).norm() == 0.0);
}

TEST_CASE("inertia matrix is symmetric positive definite at random attitudes") {
  for (int k = 0; k < 200; ++k) {
    const PayloadParams p = rand_params();
    const Mat3 R = rand_rot();
    const Mat6 M = inertia_matrix(p, R);
    CHECK((M - M.transpose()).cwiseAbs().maxCoeff() <= 1e-12);
    Eigen::SelfAdjointEigenSolver<Mat6> es(M);
    CHECK(es.eigenvalues().minCoeff() > 0.0);
  }
}

TEST_CASE("inertia matrix blocks match hand-computed values at identity attitude") {
  const PayloadParams p = table_params();
  const Mat6 M = inertia_matrix(p, Mat3::Identity());

  CHECK((M.topLeftCorner<3, 3>() - 5.0 * Mat3::Identity()).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK((M.topRightCorner<3, 3>() + 5.0 * skew(Vec3(0.74, 0.01, -0.2))).cwiseAbs().maxCoeff() <=
        1e-12);
  CHECK((M.bottomLeftCorner<3, 3>() - M.topRightCorner<3, 3>().transpose())
            .cwiseAbs()
            .maxCoeff() <= 1e-12);

  // Displaced inertia about the reference point, checked against an
  // independently frozen evaluation of the displacement rule.
  Mat3 j_ref;
  j_ref << 1.626, -0.037, 0.74, -0.037, 4.3635, 0.01, 0.74, 0.01, 3.5796;
  CHECK((M.bottomRightCorner<3, 3>() - j_ref).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("zero center-of-mass offset decouples translation and rotation") {
  const Mat3 j_cm = Vec3(0.2, 0.3, 0.4).asDiagonal();
  const PayloadParams p(2.0, j_cm, Vec3::Zero());
  const Mat3 R = rand_rot();
  const Mat6 M = inertia_matrix(p, R);
  CHECK(M.topRightCorner<3, 3>().cwiseAbs().maxCoeff() == 0.0);
  CHECK(M.bottomLeftCorner<3, 3>().cwiseAbs().maxCoeff() == 0.0);
  CHECK((M.bottomRightCorner<3, 3>() - R * j_cm * R.transpose()).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("velocity-product matrix vanishes without motion") {
  const PayloadParams p = table_params();
  const Mat3 R = rand_rot();
  CHECK(coriolis_matrix(p, R, Vec3::Zero(), Vec3::Zero()).cwiseAbs().maxCoeff() == 0.0);

  const PayloadParams centered(3.0, Mat3::Identity(), Vec3::Zero());
  CHECK(coriolis_matrix(centered, R, Vec3::Zero(), rand_vec3()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("Mdot - 2C is skew along the rotational flow") {
  // Central difference of M along R(h) = exp(h omega) R; the quadratic form
  // x^T (Mdot - 2C) x must vanish for every x. Tolerance is set by the
  // finite-difference step.
  const double h = 1e-6;
  double worst = 0.0;
  for (int k = 0; k < 500; ++k) {
    const PayloadParams p = rand_params();
    const Mat3 R = rand_rot();
    const Vec3 omega = rand_vec3();
    const Vec3 v = rand_vec3();
    const Mat6 Mp = inertia_matrix(p, exp_so3(h * omega) * R);
    const Mat6 Mm = inertia_matrix(p, exp_so3(-h * omega) * R);
    const Mat6 Mdot = (Mp - Mm) / (2.0 * h);
    const Mat6 C = coriolis_matrix(p, R, omega, v);
    const Mat6 D = Mdot - 2.0 * C;
    const Vec6 x = rand_vec6();
    worst = std::max(worst, std::abs(x.dot(D * x)) / std::max(1.0, x.squaredNorm()));
  }
  CHECK(worst <= 1e-5);
}

TEST_CASE("gravity wrench") {
  const PayloadParams p = table_params();
  const Mat3 R = rand_rot();

  SUBCASE("zero mode vanishes") {
    CHECK(gravity_wrench(p, R, GravityMode::Zero).cwiseAbs().maxCoeff() == 0.0);
  }
  SUBCASE("centered payload: pure supporting force") {
    const PayloadParams c(5.0, Mat3::Identity(), Vec3::Zero());
    Vec6 want;
    want << 0.0, 0.0, 5.0 * 9.81, 0.0, 0.0, 0.0;
    CHECK((gravity_wrench(c, R, GravityMode::Earth) - want).cwiseAbs().maxCoeff() <= 1e-12);
  }
  SUBCASE("offset payload at identity attitude: hand cross product") {
    // torque = -skew(d) (m g_vec) = m g [d_y, -d_x, 0]
    const Vec6 g = gravity_wrench(p, Mat3::Identity(), GravityMode::Earth);
    const double mg = 5.0 * 9.81;
    CHECK(g[0] == 0.0);
    CHECK(g[1] == 0.0);
    CHECK(g[2] == doctest::Approx(mg).epsilon(1e-12));
    CHECK(g[3] == doctest::Approx(mg * 0.01).epsilon(1e-12));
    CHECK(g[4] == doctest::Approx(-mg * 0.74).epsilon(1e-12));
    CHECK(g[5] == 0.0);
  }
}

TEST_CASE("phi-linear forms agree with the parameter forms") {
  for (int k = 0; k < 100; ++k) {
    const PayloadParams p = rand_params();
    const Mat3 R = rand_rot();
    const Vec3 omega = rand_vec3();
    const Vec3 v = rand_vec3();
    const Vec10 phi = p.phi();
    CHECK((inertia_matrix_phi(phi, R) - inertia_matrix(p, R)).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK((coriolis_matrix_phi(phi, R, omega, v) - coriolis_matrix(p, R, omega, v))
              .cwiseAbs()
              .maxCoeff() <= 1e-12);
    CHECK((gravity_wrench_phi(phi, R, GravityMode::Earth) -
           gravity_wrench(p, R, GravityMode::Earth))
              .cwiseAbs()
              .maxCoeff() <= 1e-12);
  }
}

TEST_CASE("forward dynamics") {
  SUBCASE("gravity-supporting wrench holds the payload still") {
    const PayloadParams p = table_params();
    PayloadState x;
    x.R = rand_rot();
    x.p = rand_vec3();
    const Vec6 w = gravity_wrench(p, x.R, GravityMode::Earth);
    const Accel a = forward_dynamics(p, x, w, GravityMode::Earth);
    CHECK(a.vdot.norm() <= 1e-12);
    CHECK(a.omegadot.norm() <= 1e-12);
  }

  SUBCASE("centered unit-inertia payload responds componentwise") {
    const PayloadParams p(2.0, Mat3::Identity(), Vec3::Zero());
    PayloadState x;
    x.R = rand_rot();
    Vec6 w;
    w << 4.0, -2.0, 6.0, 0.5, 0.0, -1.0;
    const Accel a = forward_dynamics(p, x, w, GravityMode::Zero);
    CHECK((a.vdot - Vec3(2.0, -1.0, 3.0)).norm() <= 1e-12);
    CHECK((a.omegadot - Vec3(0.5, 0.0, -1.0)).norm() <= 1e-12);
  }

  SUBCASE("solution satisfies the equations of motion") {
    for (int k = 0; k < 200; ++k) {
      const PayloadParams p = rand_params();
      PayloadState x;
      x.R = rand_rot();
      x.v = rand_vec3();
      x.omega = rand_vec3();
      const Vec6 w = rand_vec6(5.0);
      const Accel acc = forward_dynamics(p, x, w, GravityMode::Earth);
      Vec6 qdd;
      qdd << acc.vdot, acc.omegadot;
      Vec6 qd;
      qd << x.v, x.omega;
      const Vec6 residual = inertia_matrix(p, x.R) * qdd +
                            coriolis_matrix(p, x.R, x.omega, x.v) * qd +
                            gravity_wrench(p, x.R, GravityMode::Earth) - w;
      CHECK(residual.cwiseAbs().maxCoeff() <= 1e-9);
    }
  }

  SUBCASE("accelerations rotate with the whole problem") {
    const PayloadParams p = rand_params();
    const Mat3 R0 = rand_rot();
    PayloadState x;
    x.R = rand_rot();
    x.v = rand_vec3();
    x.omega = rand_vec3();
    const Vec6 w = rand_vec6(5.0);
    const Accel a = forward_dynamics(p, x, w, GravityMode::Zero);

    PayloadState y;
    y.R = R0 * x.R;
    y.v = R0 * x.v;
    y.omega = R0 * x.omega;
    Vec6 w2;
    w2 << R0 * w.head<3>(), R0 * w.tail<3>();
    const Accel b = forward_dynamics(p, y, w2, GravityMode::Zero);
    CHECK((b.vdot - R0 * a.vdot).norm() <= 1e-9);
    CHECK((b.omegadot - R0 * a.omegadot).norm() <= 1e-9);
  }

  SUBCASE("ill-conditioned inertia is rejected") {
    const Mat3 j = Vec3(1e-14, 1.0, 1.0).asDiagonal();
    const PayloadParams p(1.0, j, Vec3::Zero());
    PayloadState x;
    CHECK_THROWS_AS(forward_dynamics(p, x, Vec6::Zero(), GravityMode::Zero), NumericalError);
  }
}
