#include "cotrans/payload.hpp"

namespace cotrans {

namespace {

void require_spd(const Mat3& J, const char* what) {
  if ((J - J.transpose()).cwiseAbs().maxCoeff() > 1e-9) {
    throw std::invalid_argument(std::string(what) + ": asymmetric beyond 1e-9");
  }
  Eigen::SelfAdjointEigenSolver<Mat3> es(J);
  if (es.eigenvalues().minCoeff() <= 0.0) {
    throw std::invalid_argument(std::string(what) + ": not positive definite");
  }
}

}  // namespace

PayloadParams::PayloadParams(double m, const Mat3& J_cm, const Vec3& d_bar)
    : mass(m), inertia_cm(J_cm), com_offset(d_bar) {
  if (!(m > 0.0)) throw std::invalid_argument("payload mass must be > 0");
  if (!J_cm.allFinite() || !d_bar.allFinite()) {
    throw std::invalid_argument("payload parameters must be finite");
  }
  require_spd(J_cm, "payload inertia about center of mass");
  require_spd(parallel_axis(J_cm, m, d_bar), "payload inertia about reference point");
}

Mat3 PayloadParams::inertia_ref() const { return parallel_axis(inertia_cm, mass, com_offset); }

Vec10 PayloadParams::phi() const { return pack_phi(mass, mass * com_offset, inertia_ref()); }

Vec10 pack_phi(double m, const Vec3& m_d, const Mat3& J_ref) {
  Vec10 phi;
  phi << m, m_d.x(), m_d.y(), m_d.z(),
      J_ref(0, 0), J_ref(1, 1), J_ref(2, 2), J_ref(0, 1), J_ref(0, 2), J_ref(1, 2);
  return phi;
}

void unpack_phi(const Vec10& phi, double& m, Vec3& m_d, Mat3& J_ref) {
  m = phi(0);
  m_d = phi.segment<3>(1);
  J_ref << phi(4), phi(7), phi(8),
           phi(7), phi(5), phi(9),
           phi(8), phi(9), phi(6);
}

Mat6 inertia_matrix_phi(const Vec10& phi, const Mat3& R) {
  double m;
  Vec3 m_d;
  Mat3 J;
  unpack_phi(phi, m, m_d, J);
  const Mat3 S_mc = skew(R * m_d);  // = m * skew(R d)
  Mat6 M;
  M.topLeftCorner<3, 3>() = m * Mat3::Identity();
  M.topRightCorner<3, 3>() = -S_mc;
  M.bottomLeftCorner<3, 3>() = S_mc;
  M.bottomRightCorner<3, 3>() = R * J * R.transpose();
  return M;
}

Mat6 coriolis_matrix_phi(const Vec10& phi, const Mat3& R, const Vec3& omega, const Vec3& v) {
  double m;
  Vec3 m_d;
  Mat3 J;
  unpack_phi(phi, m, m_d, J);
  const Mat3 S_mc = skew(R * m_d);
  const Mat3 S_w = skew(omega);
  const Mat3 I_s = R * J * R.transpose();
  Mat6 C;
  C.topLeftCorner<3, 3>().setZero();
  // The top-right block carries the +2 S_mc S_w counter-term so that both
  // C qdot reproduces the velocity-product bias and C + C^T equals the flow
  // derivative of the inertia matrix (the certificate the tests pin down).
  C.topRightCorner<3, 3>() = -(S_w * S_mc - 2.0 * S_mc * S_w);
  C.bottomLeftCorner<3, 3>() = -S_w * S_mc;
  C.bottomRightCorner<3, 3>() = S_w * I_s - skew(S_mc * v);
  return C;
}

Vec6 gravity_wrench_phi(const Vec10& phi, const Mat3& R, GravityMode mode) {
  if (mode == GravityMode::Zero) return Vec6::Zero();
  double m;
  Vec3 m_d;
  Mat3 J;
  unpack_phi(phi, m, m_d, J);
  const Vec3 g_vec = gravity_accel(mode);
  Vec6 g;
  g.head<3>() = -m * g_vec;
  g.tail<3>() = -skew(R * m_d) * g_vec;
  return g;
}

Mat6 inertia_matrix(const PayloadParams& params, const Mat3& R) {
  return inertia_matrix_phi(params.phi(), R);
}

Mat6 coriolis_matrix(const PayloadParams& params, const Mat3& R, const Vec3& omega, const Vec3& v) {
  return coriolis_matrix_phi(params.phi(), R, omega, v);
}

Vec6 gravity_wrench(const PayloadParams& params, const Mat3& R, GravityMode mode) {
  return gravity_wrench_phi(params.phi(), R, mode);
}

Accel forward_dynamics(const PayloadParams& params, const PayloadState& state,
                       const Vec6& total_wrench, GravityMode mode) {
  const Mat6 M = inertia_matrix(params, state.R);
  Eigen::SelfAdjointEigenSolver<Mat6> es(M);
  const double lo = es.eigenvalues().minCoeff(), hi = es.eigenvalues().maxCoeff();
  if (!(lo > 0.0) || hi / lo > 1e12) {
    throw NumericalError("forward_dynamics: inertia matrix condition number exceeds 1e12");
  }
  Vec6 qdot;
  qdot << state.v, state.omega;
  const Vec6 rhs = total_wrench - coriolis_matrix(params, state.R, state.omega, state.v) * qdot -
                   gravity_wrench(params, state.R, mode);
  const Vec6 qddot = M.ldlt().solve(rhs);
  return {qddot.head<3>(), qddot.tail<3>()};
}

}  // namespace cotrans
