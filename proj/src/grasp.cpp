#include "cotrans/grasp.hpp"

#include "cotrans/spatial.hpp"

#include <cstdio>

namespace cotrans {

Mat6 grasp_map(const Mat3& R_B, const Mat3& R_Ei_W, const Vec3& d, const Vec3& l_g,
               GraspMapForm form) {
  const Mat3 B = form == GraspMapForm::SkewProduct
                     ? Mat3(skew(R_B * d) * skew(R_Ei_W * l_g))
                     : skew(R_B * d + R_Ei_W * l_g);
  Mat6 G = Mat6::Identity();
  G.bottomLeftCorner<3, 3>() = B;
  return G;
}

Mat6 invert_grasp_map(const Mat6& G) {
  const double tol = 1e-12;
  if ((G.topLeftCorner<3, 3>() - Mat3::Identity()).cwiseAbs().maxCoeff() > tol ||
      G.topRightCorner<3, 3>().cwiseAbs().maxCoeff() > tol ||
      (G.bottomRightCorner<3, 3>() - Mat3::Identity()).cwiseAbs().maxCoeff() > tol) {
    throw std::invalid_argument(
        "invert_grasp_map: input lacks the block lower-triangular unit-diagonal shape");
  }
  Mat6 Ginv = Mat6::Identity();
  Ginv.bottomLeftCorner<3, 3>() = -G.bottomLeftCorner<3, 3>();
  return Ginv;
}

Vec6 aggregate_wrench(const std::vector<std::pair<Mat6, Vec6>>& contributions) {
  if (contributions.empty()) {
    std::fprintf(stderr, "warning: aggregate_wrench: no contributing agents, total wrench is zero\n");
    return Vec6::Zero();
  }
  Vec6 total = Vec6::Zero();
  for (const auto& [G, w] : contributions) total += G * w;
  return total;
}

}  // namespace cotrans
