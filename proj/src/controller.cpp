#include "cotrans/controller.hpp"

#include "cotrans/spatial.hpp"

namespace cotrans {

CompositeError composite_error(const PayloadState& state, const ReferenceSample& ref, double beta) {
  CompositeError out;
  out.e_p = ref.p_d - state.p;
  const Mat3 R_e = ref.R_d.transpose() * state.R;
  out.psi = vee(R_e - R_e.transpose());
  out.rot_err = rotation_error_metric(R_e);

  out.s.head<3>() = (state.v - ref.v_d) - beta * out.e_p;
  out.s.tail<3>() = (state.omega - ref.omega_d) + 0.5 * beta * (ref.R_d * out.psi);

  Vec6 qdot;
  qdot << state.v, state.omega;
  out.qdot_r = qdot - out.s;

  // d/dt psi with R_e' = R_d^T skew(omega - omega_d) R.
  const Mat3 A = ref.R_d.transpose() * skew(state.omega - ref.omega_d) * state.R;
  const Vec3 psi_dot = vee(A - A.transpose());
  out.qddot_r.head<3>() = ref.a_d + beta * (ref.v_d - state.v);
  out.qddot_r.tail<3>() =
      ref.omegadot_d - 0.5 * beta * (skew(ref.omega_d) * (ref.R_d * out.psi) + ref.R_d * psi_dot);
  return out;
}

double rotation_error_metric(const Mat3& R_e) { return R_e.trace() - 3.0; }

Mat6x10 regressor_phi_slots(const Mat3& R, const Vec3& omega, const Vec3& v,
                            const Vec6& qdot_slot, const Vec6& qddot_slot, GravityMode mode) {
  Mat6x10 Y;
  for (int k = 0; k < 10; ++k) {
    Vec10 e = Vec10::Zero();
    e(k) = 1.0;
    Y.col(k) = inertia_matrix_phi(e, R) * qddot_slot + coriolis_matrix_phi(e, R, omega, v) * qdot_slot +
               gravity_wrench_phi(e, R, mode);
  }
  return Y;
}

Mat6x10 regressor_phi(const PayloadState& state, const ReferenceSample& ref, GravityMode mode) {
  Vec6 qdot_d, qddot_d;
  qdot_d << ref.v_d, ref.omega_d;
  qddot_d << ref.a_d, ref.omegadot_d;
  return regressor_phi_slots(state.R, state.omega, state.v, qdot_d, qddot_d, mode);
}

Mat6x3 regressor_d(const Vec6& w_hat, const Mat3& R_B, const Mat3& R_Ei_W, const Vec3& l_g,
                   GraspMapForm form) {
  // Grasp-mismatch wrench -DeltaG(delta) w_hat has zero force rows; the
  // torque rows are linear in delta via skew(a) b = -skew(b) a.
  const Vec3 f_hat = w_hat.head<3>();
  Mat6x3 Y = Mat6x3::Zero();
  if (form == GraspMapForm::SkewProduct) {
    Y.bottomRows<3>() = skew(skew(R_Ei_W * l_g) * f_hat) * R_B;
  } else {
    Y.bottomRows<3>() = skew(f_hat) * R_B;
  }
  return Y;
}

AgentCommand agent_control(const AgentEstimator& agent, const PayloadState& state,
                           const ReferenceSample& ref, const ControllerGains& gains,
                           const GraspGeometry& geom, GravityMode mode, GraspMapForm form) {
  const CompositeError ce = composite_error(state, ref, gains.beta);
  const Mat6x10 Y =
      regressor_phi_slots(state.R, state.omega, state.v, ce.qdot_r, ce.qddot_r, mode);
  AgentCommand out;
  out.w_hat = Y * agent.phi_hat - gains.kpd.cwiseProduct(ce.s);
  const Mat3 R_Ei_W = state.R * geom.R_Ei_Ui;
  const Mat6 Ghat = grasp_map(state.R, R_Ei_W, agent.d_hat, geom.l_g, form);
  out.w_apply = Wrench::from_vec(invert_grasp_map(Ghat) * out.w_hat);
  return out;
}

void adapt(AgentEstimator& agent, const Mat6x10& Y_phi, const Mat6x3& Y_d, const Vec6& s,
           const ControllerGains& gains, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("adapt: dt must be > 0");
  agent.phi_hat -= dt * gains.gamma_phi.cwiseProduct(Y_phi.transpose() * s);
  agent.d_hat -= dt * gains.gamma_d.cwiseProduct(Y_d.transpose() * s);
  if (!agent.phi_hat.allFinite() || !agent.d_hat.allFinite()) {
    throw NumericalError("adapt: estimator update left finite range");
  }
}

}  // namespace cotrans
