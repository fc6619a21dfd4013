#include <doctest.h>

#include <vector>

#include <eqmap/errors.hpp>
#include <eqmap/kernels.hpp>
#include <eqmap/linalg.hpp>

using eqmap::Mat;
using namespace eqmap::kernels;
namespace lin = eqmap::linalg;

namespace {

std::vector<Mat> random_cloud(int count, int dim, std::uint64_t seed) {
  lin::NormalSampler rng(seed);
  std::vector<Mat> out;
  for (int k = 0; k < count; ++k) {
    Mat m(dim, dim);
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) m(i, j) = rng.complex_normal();
    out.push_back(m);
  }
  return out;
}

std::vector<Eigen::Vector2d> random_points(int count, std::uint64_t seed) {
  lin::NormalSampler rng(seed);
  std::vector<Eigen::Vector2d> out;
  for (int k = 0; k < count; ++k) out.push_back({rng(), rng()});
  return out;
}

}  // namespace

TEST_CASE("op_norm is the largest singular value") {
  Mat m(2, 2);
  m << 3, 0, 4, 0;
  CHECK(op_norm(m) == doctest::Approx(5.0));
  CHECK(op_norm(Mat::Identity(3, 3)) == doctest::Approx(1.0));
  CHECK(op_norm(Mat::Zero(2, 2)) == doctest::Approx(0.0));
}

TEST_CASE("directed max-min distance: golden and empty inputs") {
  Mat z = Mat::Zero(1, 1), one = Mat::Ones(1, 1);
  Mat three = 3.0 * one;
  // From {0, 3} into {1}: the farther point decides.
  CHECK(directed_max_min_frob({z, three}, {one}) == doctest::Approx(2.0));
  // From {1} into {0, 3}: nearest is 0.
  CHECK(directed_max_min_frob({one}, {z, three}) == doctest::Approx(1.0));

  CHECK_THROWS_AS(directed_max_min_frob({}, {one}), eqmap::EmptyCloud);
  CHECK_THROWS_AS(directed_max_min_frob({one}, {}), eqmap::EmptyCloud);
}

TEST_CASE("coverage golden") {
  std::vector<Eigen::Vector2d> grid = {{0, 0}, {2, 0}};
  std::vector<Eigen::Vector2d> cloud = {{0, 1}};
  // Distances 1 and sqrt(5); coverage takes the worst grid point.
  CHECK(coverage_max_min(grid, cloud) == doctest::Approx(std::sqrt(5.0)));
  CHECK_THROWS_AS(coverage_max_min(grid, {}), eqmap::EmptyCloud);
  CHECK_THROWS_AS(coverage_max_min({}, cloud), eqmap::EmptyCloud);
}

TEST_CASE("closure residual pairs: window semantics") {
  Mat r(2, 2);
  r << 0, -1, 1, 0;
  // {R} alone: R*R is at Frobenius distance 2 from the only point.
  CHECK(closure_residual_pairs({r}, 1e9) == doctest::Approx(2.0));
  // Window below the product's operator norm: nothing to check.
  CHECK(closure_residual_pairs({r}, 0.5) == doctest::Approx(0.0));
  // The closed 4-element group has residual 0.
  std::vector<Mat> group = {r, r * r, r * r * r, Mat::Identity(2, 2)};
  CHECK(closure_residual_pairs(group, 1e9) == doctest::Approx(0.0));
  CHECK_THROWS_AS(closure_residual_pairs({}, 1.0), eqmap::EmptyCloud);
}

TEST_CASE("parallel kernels match their serial references exactly") {
  auto a = random_cloud(160, 3, 101);
  auto b = random_cloud(190, 3, 202);
  CHECK(directed_max_min_frob(a, b) == directed_max_min_frob_serial(a, b));
  CHECK(directed_max_min_frob(b, a) == directed_max_min_frob_serial(b, a));

  auto grid = random_points(400, 303);
  auto cloud = random_points(350, 404);
  CHECK(coverage_max_min(grid, cloud) ==
        coverage_max_min_serial(grid, cloud));

  auto pts = random_cloud(60, 2, 505);
  CHECK(closure_residual_pairs(pts, 5.0) ==
        closure_residual_pairs_serial(pts, 5.0));
  CHECK(closure_residual_pairs(pts, 0.8) ==
        closure_residual_pairs_serial(pts, 0.8));
}
