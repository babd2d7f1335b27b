#pragma once

#include "cotrans/types.hpp"

#include <array>

namespace cotrans {

// Moment-from-thrust convention. Conventional: torque of a rotor force f at
// position d is skew(d) f. The alternative flips the cross product order and
// is kept selectable for comparison runs.
enum class RotorMomentForm { Conventional, Flipped };

struct RotorConfig {
  Vec3 position{Vec3::Zero()};        // rotor hub in the vehicle frame, m
  Mat3 orientation{Mat3::Identity()}; // rotor frame in the vehicle frame
  double k_f = 0.0;                   // thrust coefficient, N s^2/rad^2
  double k_m = 0.0;                   // drag-torque coefficient, signed by spin direction
};

// Parametric tilted-hexarotor layout: arms every 60 degrees, each rotor
// tilted about its arm axis by alternating +/- alpha and canted radially by
// beta. Tilting is what makes the allocation full-rank.
struct HexarotorGeometry {
  double arm_length = 1.2;      // m
  double tilt_alpha_deg = 30.0; // about the arm axis, alternating sign
  double tilt_beta_deg = 10.0;  // radial cant
  double k_f = 8.5e-6;
  double k_m = 1.36e-7;         // magnitude; spin signs alternate around the hexagon
};

std::array<RotorConfig, 6> make_hexarotor_rotors(const HexarotorGeometry& geom);

struct VehicleParams {
  enum class Kind { Hexarotor, Tug };
  Kind kind = Kind::Hexarotor;
  double mass = 0.0;
  Mat3 inertia{Mat3::Identity()};
  std::array<RotorConfig, 6> rotors{};  // Hexarotor only
  Vec6 wrench_limits{Vec6::Zero()};     // Tug only, componentwise |max|
};

// Throws ConfigError if the allocation matrix is rank-deficient
// (under-actuated geometry, e.g. untilted rotors).
VehicleParams make_hexarotor(double mass, const Mat3& inertia, const HexarotorGeometry& geom,
                             RotorMomentForm form = RotorMomentForm::Conventional);
VehicleParams make_tug(double mass, const Mat3& inertia, const Vec6& wrench_limits);

// Total rotor wrench in the vehicle frame for squared rotor speeds.
// Rejects negative omega_sq entries.
Wrench rotor_wrench(const std::array<RotorConfig, 6>& rotors, const Vec6& omega_sq,
                    RotorMomentForm form = RotorMomentForm::Conventional);

// Column j is the wrench of rotor j at unit squared speed; rotor_wrench == A * omega_sq.
Mat6 allocation_matrix(const std::array<RotorConfig, 6>& rotors,
                       RotorMomentForm form = RotorMomentForm::Conventional);

struct AllocationResult {
  Vec6 omega_sq{Vec6::Zero()};
  bool saturated = false;  // a solution component went negative and was floored at zero
  double residual = 0.0;   // ||A omega_sq - w_desired|| after flooring
};

// Exact linear solve, then floors negative squared speeds at zero (no reverse
// thrust). Throws NumericalError on a singular allocation matrix.
AllocationResult allocate(const Mat6& A, const Vec6& w_desired);

// Wrench transmitted to the payload by a vehicle producing rotor wrench w_p,
// by Newton-Euler bookkeeping of the vehicle's own weight and inertia:
//   f = R_Ui f_p - m vdot + g_i,  tau = R_Ui (-skew(J w_b) w_b + tau_p - J wdot_b)
// with g_i = m * g_vec (down) in Earth mode and zero otherwise. vdot, omega,
// omegadot are world-frame vehicle quantities; body conversions are internal.
Wrench vehicle_world_wrench(const VehicleParams& params, const Mat3& R_Ui, const Vec3& vdot,
                            const Vec3& omega, const Vec3& omegadot, const Wrench& w_p,
                            GravityMode mode);

// Algebraic inverse of vehicle_world_wrench in w_p: the rotor wrench a
// vehicle must produce so that w_desired reaches the payload.
Wrench required_rotor_wrench(const VehicleParams& params, const Mat3& R_Ui, const Vec3& vdot,
                             const Vec3& omega, const Vec3& omegadot, const Wrench& w_desired,
                             GravityMode mode);

struct TugResult {
  Vec6 wrench{Vec6::Zero()};
  bool saturated = false;
};

// Componentwise clamp to +/- limits.
TugResult tug_wrench(const Vec6& limits, const Vec6& w_desired);

}  // namespace cotrans
