#pragma once

#include "cotrans/types.hpp"

namespace cotrans {

struct ReferenceSample {
  Vec3 p_d{Vec3::Zero()};
  Vec3 v_d{Vec3::Zero()};
  Vec3 a_d{Vec3::Zero()};
  Mat3 R_d{Mat3::Identity()};
  Vec3 omega_d{Vec3::Zero()};
  Vec3 omegadot_d{Vec3::Zero()};
};

struct TrajParams {
  double omega_x = 0.5;   // rad/s
  double omega_y = 0.5;   // rad/s
  double amplitude = 1.0; // m
};

// Planar sinusoid p_d = a [sin(w_x t), cos(w_y t), 0] with analytic
// derivatives; attitude held at identity. Rejects t < 0.
ReferenceSample reference_trajectory(double t, const TrajParams& traj);

}  // namespace cotrans
