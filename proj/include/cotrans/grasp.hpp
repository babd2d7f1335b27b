#pragma once

#include "cotrans/types.hpp"

#include <utility>
#include <vector>

namespace cotrans {

// Coupling-block form of the grasp map. SkewProduct couples through the
// product of two skews; SkewSum is the standard rigid-grasp form, a single
// skew of the total moment arm. Both are exercised by tests; runs select
// one via config.
enum class GraspMapForm { SkewProduct, SkewSum };

// Rigid grasp of agent i on the payload. d points from the grasp point to
// the payload reference point P_s, in the payload body frame; l_g locates
// the vehicle frame origin relative to the grasp, in B; R_Ei_Ui orients the
// gripper frame within the vehicle frame.
struct GraspGeometry {
  Vec3 d{Vec3::Zero()};
  Vec3 l_g{Vec3::Zero()};
  Mat3 R_Ei_Ui{Mat3::Identity()};
};

// G = [[I, 0], [B, I]] carrying an agent wrench into a wrench about P_s.
// SkewProduct: B = skew(R_B d) skew(R_Ei_W l_g); SkewSum:
// B = skew(R_B d + R_Ei_W l_g). det(G) = 1 always.
Mat6 grasp_map(const Mat3& R_B, const Mat3& R_Ei_W, const Vec3& d, const Vec3& l_g,
               GraspMapForm form = GraspMapForm::SkewProduct);

// Closed-form inverse [[I, 0], [-B, I]]. Rejects inputs without the block
// lower-triangular unit-diagonal shape (tolerance 1e-12).
Mat6 invert_grasp_map(const Mat6& G);

// Sum of G_i * w_i in list order. An empty list yields zero (all agents
// failed) with a warning on stderr.
Vec6 aggregate_wrench(const std::vector<std::pair<Mat6, Vec6>>& contributions);

}  // namespace cotrans
