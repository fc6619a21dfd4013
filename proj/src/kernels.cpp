#include "eqmap/kernels.hpp"

#include <algorithm>
#include <limits>

#include "eqmap/errors.hpp"

namespace eqmap::kernels {

double op_norm(const Mat& m) {
  if (m.size() == 0) return 0.0;
  return Eigen::JacobiSVD<Mat>(m).singularValues()(0);
}

namespace {

double nearest_frob(const Mat& p, const std::vector<Mat>& cloud) {
  double best = std::numeric_limits<double>::infinity();
  for (const Mat& q : cloud) best = std::min(best, (p - q).norm());
  return best;
}

double nearest_pt(const Eigen::Vector2d& p,
                  const std::vector<Eigen::Vector2d>& cloud) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& q : cloud) best = std::min(best, (p - q).norm());
  return best;
}

}  // namespace

double directed_max_min_frob(const std::vector<Mat>& a,
                             const std::vector<Mat>& b) {
  if (a.empty() || b.empty()) throw EmptyCloud("directed distance of nothing");
  double worst = 0.0;
  const long long n = static_cast<long long>(a.size());
#pragma omp parallel for reduction(max : worst) schedule(static)
  for (long long i = 0; i < n; ++i)
    worst = std::max(worst, nearest_frob(a[i], b));
  return worst;
}

double directed_max_min_frob_serial(const std::vector<Mat>& a,
                                    const std::vector<Mat>& b) {
  if (a.empty() || b.empty()) throw EmptyCloud("directed distance of nothing");
  double worst = 0.0;
  for (const Mat& p : a) worst = std::max(worst, nearest_frob(p, b));
  return worst;
}

double coverage_max_min(const std::vector<Eigen::Vector2d>& grid,
                        const std::vector<Eigen::Vector2d>& cloud) {
  if (grid.empty() || cloud.empty()) throw EmptyCloud("coverage of nothing");
  double worst = 0.0;
  const long long n = static_cast<long long>(grid.size());
#pragma omp parallel for reduction(max : worst) schedule(static)
  for (long long i = 0; i < n; ++i)
    worst = std::max(worst, nearest_pt(grid[i], cloud));
  return worst;
}

double coverage_max_min_serial(const std::vector<Eigen::Vector2d>& grid,
                               const std::vector<Eigen::Vector2d>& cloud) {
  if (grid.empty() || cloud.empty()) throw EmptyCloud("coverage of nothing");
  double worst = 0.0;
  for (const auto& p : grid) worst = std::max(worst, nearest_pt(p, cloud));
  return worst;
}

double closure_residual_pairs(const std::vector<Mat>& points, double window) {
  if (points.empty()) throw EmptyCloud("closure residual of nothing");
  double worst = 0.0;
  const long long n = static_cast<long long>(points.size());
#pragma omp parallel for reduction(max : worst) schedule(dynamic) collapse(2)
  for (long long i = 0; i < n; ++i)
    for (long long j = 0; j < n; ++j) {
      const Mat prod = points[i] * points[j];
      if (op_norm(prod) > window) continue;
      worst = std::max(worst, nearest_frob(prod, points));
    }
  return worst;
}

double closure_residual_pairs_serial(const std::vector<Mat>& points,
                                     double window) {
  if (points.empty()) throw EmptyCloud("closure residual of nothing");
  double worst = 0.0;
  for (const Mat& a : points)
    for (const Mat& b : points) {
      const Mat prod = a * b;
      if (op_norm(prod) > window) continue;
      worst = std::max(worst, nearest_frob(prod, points));
    }
  return worst;
}

}  // namespace eqmap::kernels
