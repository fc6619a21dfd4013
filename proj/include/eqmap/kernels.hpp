#pragma once

// Hot sweep loops shared by the convergence experiments, parallelized with
// OpenMP. Each kernel keeps a serial twin with identical semantics; the
// parallel forms reduce by max only, so results are bit-identical to the
// serial ones regardless of thread count.

#include <vector>

#include "eqmap/linalg.hpp"

namespace eqmap::kernels {

double op_norm(const Mat& m);  // largest singular value

// sup over a of inf over b of the Frobenius distance.
double directed_max_min_frob(const std::vector<Mat>& a,
                             const std::vector<Mat>& b);
double directed_max_min_frob_serial(const std::vector<Mat>& a,
                                    const std::vector<Mat>& b);

// max over grid points of the distance to the nearest cloud point.
double coverage_max_min(const std::vector<Eigen::Vector2d>& grid,
                        const std::vector<Eigen::Vector2d>& cloud);
double coverage_max_min_serial(const std::vector<Eigen::Vector2d>& grid,
                               const std::vector<Eigen::Vector2d>& cloud);

// max over pairs (i,j) whose product stays inside the operator-norm window
// of the Frobenius distance from points[i]*points[j] back to the cloud.
double closure_residual_pairs(const std::vector<Mat>& points, double window);
double closure_residual_pairs_serial(const std::vector<Mat>& points,
                                     double window);

}  // namespace eqmap::kernels
