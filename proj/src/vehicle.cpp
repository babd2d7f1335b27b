#include "cotrans/vehicle.hpp"

#include "cotrans/spatial.hpp"

#include <cmath>

namespace cotrans {

std::array<RotorConfig, 6> make_hexarotor_rotors(const HexarotorGeometry& geom) {
  if (!(geom.arm_length > 0.0) || !(geom.k_f > 0.0) || geom.k_m == 0.0) {
    throw std::invalid_argument("hexarotor geometry: arm_length and k_f must be > 0, k_m nonzero");
  }
  std::array<RotorConfig, 6> rotors;
  const double alpha = geom.tilt_alpha_deg * M_PI / 180.0;
  const double beta = geom.tilt_beta_deg * M_PI / 180.0;
  for (int j = 0; j < 6; ++j) {
    const double psi = j * M_PI / 3.0;
    const double sign = (j % 2 == 0) ? 1.0 : -1.0;
    RotorConfig& r = rotors[j];
    r.position = geom.arm_length * Vec3(std::cos(psi), std::sin(psi), 0.0);
    // After yawing by psi the local x axis is the arm axis; tilt about it by
    // alternating +/- alpha, then cant radially by beta.
    r.orientation = (Eigen::AngleAxisd(psi, Vec3::UnitZ()) *
                     Eigen::AngleAxisd(sign * alpha, Vec3::UnitX()) *
                     Eigen::AngleAxisd(beta, Vec3::UnitY()))
                        .toRotationMatrix();
    r.k_f = geom.k_f;
    r.k_m = sign * geom.k_m;  // alternating spin directions for yaw authority
  }
  return rotors;
}

VehicleParams make_hexarotor(double mass, const Mat3& inertia, const HexarotorGeometry& geom,
                             RotorMomentForm form) {
  if (!(mass > 0.0)) throw std::invalid_argument("vehicle mass must be > 0");
  VehicleParams p;
  p.kind = VehicleParams::Kind::Hexarotor;
  p.mass = mass;
  p.inertia = inertia;
  p.rotors = make_hexarotor_rotors(geom);
  const Mat6 A = allocation_matrix(p.rotors, form);
  Eigen::JacobiSVD<Mat6> svd(A);
  const auto& sv = svd.singularValues();
  if (sv(5) <= sv(0) * 1e-10) {
    throw ConfigError("hexarotor allocation matrix is rank-deficient: vehicle not fully actuated");
  }
  return p;
}

VehicleParams make_tug(double mass, const Mat3& inertia, const Vec6& wrench_limits) {
  if (!(mass > 0.0)) throw std::invalid_argument("vehicle mass must be > 0");
  if (!(wrench_limits.minCoeff() > 0.0)) {
    throw std::invalid_argument("tug wrench limits must be > 0 componentwise");
  }
  VehicleParams p;
  p.kind = VehicleParams::Kind::Tug;
  p.mass = mass;
  p.inertia = inertia;
  p.wrench_limits = wrench_limits;
  return p;
}

Wrench rotor_wrench(const std::array<RotorConfig, 6>& rotors, const Vec6& omega_sq,
                    RotorMomentForm form) {
  if (omega_sq.minCoeff() < 0.0) {
    throw std::invalid_argument("rotor_wrench: squared rotor speeds must be non-negative");
  }
  Vec3 f = Vec3::Zero(), tau = Vec3::Zero();
  for (int j = 0; j < 6; ++j) {
    const RotorConfig& r = rotors[j];
    const Vec3 thrust = r.orientation * Vec3(0.0, 0.0, r.k_f * omega_sq(j));
    const Vec3 drag = r.orientation * Vec3(0.0, 0.0, r.k_m * omega_sq(j));
    f += thrust;
    tau += (form == RotorMomentForm::Conventional ? Vec3(r.position.cross(thrust))
                                                  : Vec3(thrust.cross(r.position))) +
           drag;
  }
  return {f, tau};
}

Mat6 allocation_matrix(const std::array<RotorConfig, 6>& rotors, RotorMomentForm form) {
  Mat6 A;
  for (int j = 0; j < 6; ++j) {
    Vec6 e = Vec6::Zero();
    e(j) = 1.0;
    A.col(j) = rotor_wrench(rotors, e, form).vec();
  }
  return A;
}

AllocationResult allocate(const Mat6& A, const Vec6& w_desired) {
  Eigen::PartialPivLU<Mat6> lu(A);
  // PartialPivLU does not signal singularity; check via the determinant scale.
  if (std::abs(lu.determinant()) < 1e-300) {
    throw NumericalError("allocate: singular allocation matrix");
  }
  AllocationResult out;
  const Vec6 raw = lu.solve(w_desired);
  out.saturated = (raw.array() < -1e-12).any();
  out.omega_sq = raw.cwiseMax(0.0);
  out.residual = (A * out.omega_sq - w_desired).norm();
  return out;
}

Wrench vehicle_world_wrench(const VehicleParams& params, const Mat3& R_Ui, const Vec3& vdot,
                            const Vec3& omega, const Vec3& omegadot, const Wrench& w_p,
                            GravityMode mode) {
  const Vec3 g_i = params.mass * gravity_accel(mode);
  const Vec3 w_b = R_Ui.transpose() * omega;
  const Vec3 wdot_b = R_Ui.transpose() * omegadot;
  Wrench out;
  out.force = R_Ui * w_p.force - params.mass * vdot + g_i;
  out.torque = R_Ui * (-skew(params.inertia * w_b) * w_b + w_p.torque - params.inertia * wdot_b);
  return out;
}

Wrench required_rotor_wrench(const VehicleParams& params, const Mat3& R_Ui, const Vec3& vdot,
                             const Vec3& omega, const Vec3& omegadot, const Wrench& w_desired,
                             GravityMode mode) {
  const Vec3 g_i = params.mass * gravity_accel(mode);
  const Vec3 w_b = R_Ui.transpose() * omega;
  const Vec3 wdot_b = R_Ui.transpose() * omegadot;
  Wrench out;
  out.force = R_Ui.transpose() * (w_desired.force + params.mass * vdot - g_i);
  out.torque = R_Ui.transpose() * w_desired.torque + skew(params.inertia * w_b) * w_b +
               params.inertia * wdot_b;
  return out;
}

TugResult tug_wrench(const Vec6& limits, const Vec6& w_desired) {
  if (!(limits.minCoeff() > 0.0)) {
    throw std::invalid_argument("tug_wrench: limits must be > 0 componentwise");
  }
  TugResult out;
  out.saturated = (w_desired.array().abs() > limits.array()).any();
  out.wrench = w_desired.cwiseMax(-limits).cwiseMin(limits);
  return out;
}

}  // namespace cotrans
