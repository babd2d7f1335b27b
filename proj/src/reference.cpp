#include "cotrans/reference.hpp"

#include <cmath>

namespace cotrans {

ReferenceSample reference_trajectory(double t, const TrajParams& traj) {
  if (t < 0.0) throw std::invalid_argument("reference_trajectory: t must be >= 0");
  const double a = traj.amplitude, wx = traj.omega_x, wy = traj.omega_y;
  ReferenceSample r;
  r.p_d = Vec3(a * std::sin(wx * t), a * std::cos(wy * t), 0.0);
  r.v_d = Vec3(a * wx * std::cos(wx * t), -a * wy * std::sin(wy * t), 0.0);
  r.a_d = Vec3(-a * wx * wx * std::sin(wx * t), -a * wy * wy * std::cos(wy * t), 0.0);
  return r;
}

}  // namespace cotrans
