#pragma once

#include "cotrans/spatial.hpp"
#include "cotrans/types.hpp"

namespace cotrans {

// Rigid payload described about a measurement point P_s fixed in its body
// frame B. com_offset points from P_s to the center of mass, in B.
struct PayloadParams {
  double mass;
  Mat3 inertia_cm;   // about the center of mass, in B
  Vec3 com_offset;   // m

  PayloadParams(double m, const Mat3& J_cm, const Vec3& d_bar);

  Mat3 inertia_ref() const;  // about P_s, in B (parallel axis)
  Vec10 phi() const;         // [m, m*com_offset, inertia_ref packed]
};

// 6-DoF state of P_s. omega is expressed in the world frame.
struct PayloadState {
  Vec3 p{Vec3::Zero()};
  Mat3 R{Mat3::Identity()};
  Vec3 v{Vec3::Zero()};
  Vec3 omega{Vec3::Zero()};
};

// Inertial-parameter packing: [m, (m d)_x, (m d)_y, (m d)_z,
// J_xx, J_yy, J_zz, J_xy, J_xz, J_yz] with J about P_s in B.
Vec10 pack_phi(double m, const Vec3& m_d, const Mat3& J_ref);
void unpack_phi(const Vec10& phi, double& m, Vec3& m_d, Mat3& J_ref);

// The dynamics blocks as linear functions of phi. These are the single
// source of truth: the parameter regressor samples them columnwise and the
// plant evaluates them at the true parameters, so the linear-in-phi identity
// holds by construction.
Mat6 inertia_matrix_phi(const Vec10& phi, const Mat3& R);
Mat6 coriolis_matrix_phi(const Vec10& phi, const Mat3& R, const Vec3& omega, const Vec3& v);
Vec6 gravity_wrench_phi(const Vec10& phi, const Mat3& R, GravityMode mode);

// M(q) about P_s: [[m I, -m skew(R d)], [m skew(R d), R J_ref R^T]].
Mat6 inertia_matrix(const PayloadParams& params, const Mat3& R);

// C(q, qdot) paired with M so that x^T (Mdot - 2C) x = 0 along the flow and
// C qdot equals the velocity-product bias exactly.
Mat6 coriolis_matrix(const PayloadParams& params, const Mat3& R, const Vec3& omega, const Vec3& v);

// Left-hand-side gravity term: [-m g_vec; -skew(R d) m g_vec], zero in Zero mode.
Vec6 gravity_wrench(const PayloadParams& params, const Mat3& R, GravityMode mode);

struct Accel {
  Vec3 vdot{Vec3::Zero()};
  Vec3 omegadot{Vec3::Zero()};
};

// Solves M qddot = w_total - C qdot - g. Throws NumericalError if cond(M) > 1e12.
Accel forward_dynamics(const PayloadParams& params, const PayloadState& state,
                       const Vec6& total_wrench, GravityMode mode);

}  // namespace cotrans
