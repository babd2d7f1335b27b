#pragma once

#include "cotrans/types.hpp"

namespace cotrans {

// Hat map: skew(v) * u == v x u.
Mat3 skew(const Vec3& v);

// Inverse of the hat map. Rejects inputs with ||S + S^T||_inf > 1e-9.
Vec3 vee(const Mat3& S);

bool is_rotation(const Mat3& R, double tol = 1e-9);

// Nearest rotation via unit-quaternion round trip.
Mat3 orthonormalize(const Mat3& R);

// Z-Y-X intrinsic composition: R = Rz(yaw) * Ry(pitch) * Rx(roll).
Mat3 rpy_to_rot(double roll, double pitch, double yaw);

// Inverse of rpy_to_rot; throws NumericalError within 1e-6 rad of |pitch| = pi/2.
Vec3 rot_to_rpy(const Mat3& R);

// Scalar-first Hamilton quaternion on the canonical hemisphere (w >= 0;
// tie at w == 0 broken by the first nonzero component being positive).
Vec4 rot_to_quat(const Mat3& R);

// Rejects quaternions with | ||q|| - 1 | > 1e-9.
Mat3 quat_to_rot(const Vec4& q);

// J_d = J_cm + m ((d.d) I - d d^T): inertia about a point displaced by -d
// from the center of mass. Rejects asymmetric J_cm (tolerance 1e-9) and m < 0.
Mat3 parallel_axis(const Mat3& J_cm, double m, const Vec3& d);

// Rodrigues rotation exp: so(3) -> SO(3).
Mat3 exp_so3(const Vec3& w);

// Right-trivialized inverse differential of exp_so3, truncated after the
// second commutator term (sufficient for 4th-order one-step integration):
// dexpinv(theta, w) = w - theta x w / 2 + theta x (theta x w) / 12.
Vec3 dexpinv(const Vec3& theta, const Vec3& w);

}  // namespace cotrans
