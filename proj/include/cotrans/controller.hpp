#pragma once

#include "cotrans/grasp.hpp"
#include "cotrans/payload.hpp"
#include "cotrans/reference.hpp"
#include "cotrans/types.hpp"

namespace cotrans {

// Diagonal gain matrices, stored as their diagonals. beta blends pose error
// into the composite velocity error; K_PD is the feedback gain; Gamma_phi and
// Gamma_d are the adaptation rates.
struct ControllerGains {
  double beta = 0.5;
  Vec6 kpd = (Vec6() << 40, 40, 40, 8, 8, 8).finished();
  Vec10 gamma_phi = Vec10::Constant(0.5);
  Vec3 gamma_d = Vec3::Constant(0.1);
};

// Per-agent adaptive state. phi_hat estimates this agent's 1/n share of the
// payload inertial parameters; d_hat estimates the agent's own grasp offset.
struct AgentEstimator {
  Vec10 phi_hat{Vec10::Zero()};
  Vec3 d_hat{Vec3::Zero()};
};

struct CompositeError {
  Vec6 s;         // [v - v_r; omega - omega_r]: composite velocity error
  Vec3 e_p;       // p_d - p
  Vec3 psi;       // vee(R_e - R_e^T), R_e = R_d^T R
  double rot_err; // tr(R_e) - 3
  Vec6 qdot_r;    // reference velocity: qdot - s
  Vec6 qddot_r;   // its analytic time derivative
};

// s = (qdot - qdot_d) + beta * [pose error], with the attitude part through
// the vee of the rotation-error skew component. Also returns the composite
// reference velocity qdot_r = qdot - s and its derivative, which the
// feedforward regressor consumes.
CompositeError composite_error(const PayloadState& state, const ReferenceSample& ref, double beta);

// tr(R_e) - 3: zero iff R_e = I, minimum -4 at angle pi.
double rotation_error_metric(const Mat3& R_e);

// 6x10 regressor with arbitrary velocity/acceleration slots:
// Y(q, qdot, slots) phi == M(phi) qddot_slot + C(phi, qdot) qdot_slot + g(phi)
// identically in phi. Columns are the slot wrench map sampled at the
// parameter basis vectors, so the identity is exact by construction.
Mat6x10 regressor_phi_slots(const Mat3& R, const Vec3& omega, const Vec3& v,
                            const Vec6& qdot_slot, const Vec6& qddot_slot, GravityMode mode);

// Convenience form with the reference derivatives in the slots.
Mat6x10 regressor_phi(const PayloadState& state, const ReferenceSample& ref, GravityMode mode);

// 6x3 grasp-offset regressor: Y_d delta == -(G(d + delta) - G(d)) w_hat
// identically in delta (the grasp coupling is linear in d, so the difference
// is independent of the base offset).
Mat6x3 regressor_d(const Vec6& w_hat, const Mat3& R_B, const Mat3& R_Ei_W, const Vec3& l_g,
                   GraspMapForm form = GraspMapForm::SkewProduct);

struct AgentCommand {
  Vec6 w_hat;      // desired payload wrench about P_s
  Wrench w_apply;  // wrench the agent applies at its grasp: Ghat^{-1} w_hat
};

// Decentralized control of one agent: adaptive feedforward plus PD feedback,
// mapped through the inverse grasp map built from the agent's own d_hat.
// Reads only this agent's estimator plus the shared measurement/reference.
AgentCommand agent_control(const AgentEstimator& agent, const PayloadState& state,
                           const ReferenceSample& ref, const ControllerGains& gains,
                           const GraspGeometry& geom, GravityMode mode,
                           GraspMapForm form = GraspMapForm::SkewProduct);

// One explicit-Euler step of the adaptation laws:
// phi_hat -= dt Gamma_phi Y_phi^T s,  d_hat -= dt Gamma_d Y_d^T s.
// Throws NumericalError if the update leaves finite range.
void adapt(AgentEstimator& agent, const Mat6x10& Y_phi, const Mat6x3& Y_d, const Vec6& s,
           const ControllerGains& gains, double dt);

}  // namespace cotrans
