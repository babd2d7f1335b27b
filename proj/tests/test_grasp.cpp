#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cotrans/grasp.hpp"
#include "cotrans/spatial.hpp"

#include <random>

using namespace cotrans;

namespace {

std::mt19937 rng(777);

Vec3 rand_vec3(double scale = 1.0) {
  std::normal_distribution<double> n(0.0, scale);
  return Vec3(n(rng), n(rng), n(rng));
}

Vec6 rand_vec6(double scale = 1.0) {
  Vec6 v;
  for (int i = 0; i < 6; ++i) v[i] = std::normal_distribution<double>(0.0, scale)(rng);
  return v;
}

Mat3 rand_rot() { return exp_so3(rand_vec3()); }

// 3x3 product computed entry by entry, independent of Eigen's operator*.
Mat3 slow_mul(const Mat3& A, const Mat3& B) {
  Mat3 C = Mat3::Zero();
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) C(i, j) += A(i, k) * B(k, j);
  return C;
}

}  // namespace

TEST_CASE("grasp at the reference point with no gripper offset is the identity") {
  const Mat3 R = rand_rot();
  const Mat3 RE = rand_rot();
  for (auto form : {GraspMapForm::SkewProduct, GraspMapForm::SkewSum}) {
    const Mat6 G = grasp_map(R, RE, Vec3::Zero(), Vec3::Zero(), form);
    CHECK((G - Mat6::Identity()).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("coupling blocks match entrywise oracles") {
  const Vec3 d(-0.8, 1.2, 0.1);
  const Vec3 l_g(0.1, 0.0, -0.3);
  const Mat3 R = rand_rot();
  const Mat3 RE = rand_rot();

  SUBCASE("product-of-skews form") {
    const Mat6 G = grasp_map(R, RE, d, l_g, GraspMapForm::SkewProduct);
    const Mat3 want = slow_mul(skew(R * d), skew(RE * l_g));
    CHECK((G.bottomLeftCorner<3, 3>() - want).cwiseAbs().maxCoeff() <= 1e-12);
  }
  SUBCASE("total-moment-arm form") {
    const Mat6 G = grasp_map(R, RE, d, l_g, GraspMapForm::SkewSum);
    const Mat3 want = skew(Vec3(R * d + RE * l_g));
    CHECK((G.bottomLeftCorner<3, 3>() - want).cwiseAbs().maxCoeff() <= 1e-12);
  }
  SUBCASE("identity blocks and zero block") {
    const Mat6 G = grasp_map(R, RE, d, l_g, GraspMapForm::SkewProduct);
    CHECK((G.topLeftCorner<3, 3>() - Mat3::Identity()).cwiseAbs().maxCoeff() == 0.0);
    CHECK((G.bottomRightCorner<3, 3>() - Mat3::Identity()).cwiseAbs().maxCoeff() == 0.0);
    CHECK(G.topRightCorner<3, 3>().cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("closed-form inverse agrees with a generic linear solve") {
  const Vec3 d(1.0, 1.0, 0.1);
  const Vec3 l_g(0.1, 0.0, -0.3);
  const Mat3 R = rand_rot();
  const Mat3 RE = rand_rot();
  const Mat6 G = grasp_map(R, RE, d, l_g, GraspMapForm::SkewProduct);
  const Mat6 Gi = invert_grasp_map(G);
  const Mat6 Gi_lu = G.partialPivLu().solve(Mat6::Identity());
  CHECK((Gi - Gi_lu).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("unit determinant and exact inverse over random geometries") {
  for (int k = 0; k < 1000; ++k) {
    const auto form = (k % 2 == 0) ? GraspMapForm::SkewProduct : GraspMapForm::SkewSum;
    const Mat6 G = grasp_map(rand_rot(), rand_rot(), rand_vec3(1.5), rand_vec3(0.4), form);
    CHECK(std::abs(G.partialPivLu().determinant() - 1.0) <= 1e-9);
    const Mat6 Gi = invert_grasp_map(G);
    CHECK((G * Gi - Mat6::Identity()).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK((Gi * G - Mat6::Identity()).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("coupling is linear in the grasp offset") {
  const Mat3 R = rand_rot();
  const Mat3 RE = rand_rot();
  const Vec3 l_g = rand_vec3(0.4);
  const Vec3 d1 = rand_vec3();
  const Vec3 d2 = rand_vec3();
  const Mat6 I = Mat6::Identity();
  const Mat6 Ga = grasp_map(R, RE, 2.0 * d1 - 3.0 * d2, l_g, GraspMapForm::SkewProduct);
  const Mat6 G1 = grasp_map(R, RE, d1, l_g, GraspMapForm::SkewProduct);
  const Mat6 G2 = grasp_map(R, RE, d2, l_g, GraspMapForm::SkewProduct);
  CHECK(((Ga - I) - 2.0 * (G1 - I) + 3.0 * (G2 - I)).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("malformed grasp maps are rejected by the inverse") {
  Mat6 G = Mat6::Identity();
  G(0, 3) = 0.5;  // upper-right block must be zero
  CHECK_THROWS_AS(invert_grasp_map(G), std::invalid_argument);
  G = Mat6::Identity();
  G(0, 0) = 2.0;  // diagonal blocks must be identities
  CHECK_THROWS_AS(invert_grasp_map(G), std::invalid_argument);
}

TEST_CASE("wrench aggregation") {
  SUBCASE("single contribution passes through") {
    const Mat6 G = grasp_map(rand_rot(), rand_rot(), rand_vec3(), rand_vec3(0.3));
    const Vec6 w = rand_vec6();
    CHECK((aggregate_wrench({{G, w}}) - G * w).cwiseAbs().maxCoeff() == 0.0);
  }
  SUBCASE("opposite wrenches through the same map cancel") {
    const Mat6 G = grasp_map(rand_rot(), rand_rot(), rand_vec3(), rand_vec3(0.3));
    const Vec6 w = rand_vec6();
    CHECK(aggregate_wrench({{G, w}, {G, Vec6(-w)}}).cwiseAbs().maxCoeff() == 0.0);
  }
  SUBCASE("list-order sum oracle and permutation stability") {
    std::vector<std::pair<Mat6, Vec6>> contributions;
    for (int i = 0; i < 4; ++i)
      contributions.emplace_back(grasp_map(rand_rot(), rand_rot(), rand_vec3(), rand_vec3(0.3)),
                                 rand_vec6(3.0));
    Vec6 want = Vec6::Zero();
    for (const auto& [G, w] : contributions) want += G * w;
    CHECK((aggregate_wrench(contributions) - want).cwiseAbs().maxCoeff() == 0.0);

    std::vector<std::pair<Mat6, Vec6>> reversed(contributions.rbegin(), contributions.rend());
    CHECK((aggregate_wrench(reversed) - want).cwiseAbs().maxCoeff() <= 1e-12);
  }
  SUBCASE("empty aggregation is zero") {
    CHECK(aggregate_wrench({}).cwiseAbs().maxCoeff() == 0.0);
  }
}
