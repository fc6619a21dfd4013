#pragma once

// Desk-scale convergence experiments on matrix semigroups: windowed
// Hausdorff distances, truncated word clouds, geometric/algebraic
// convergence audits, closedness of the equivariance relation, and the
// spiral-orbit coverage/collapse demo.

#include <limits>
#include <vector>

#include "eqmap/linalg.hpp"
#include "eqmap/rep.hpp"

namespace eqmap::convergence {

// A finite stand-in for a closed matrix set: complete inside the
// operator-norm ball of the given radius, unknown outside it.
struct MatCloud {
  std::vector<Mat> points;
  double window_radius = std::numeric_limits<double>::infinity();
};

// sup over a of the Frobenius distance to the nearest point of b.
double directed_hausdorff(const MatCloud& a, const MatCloud& b);
// max of the two directed distances. EmptyCloud on empty input.
double hausdorff(const MatCloud& a, const MatCloud& b);

// All distinct products of generator words of length <= max_wordlen, kept
// when the operator norm stays within the window. Deduplication is a
// quadratic max-abs nearest scan at dedup_tol; BlowUp past 1e6 tracked
// products.
MatCloud truncated_semigroup_cloud(const std::vector<Mat>& gens,
                                   double window_radius, int max_wordlen,
                                   double dedup_tol = 1e-10);

struct GeoAudit {
  // Per step: how well the step cloud reaches every limit point ...
  std::vector<double> cond1_sup;
  // ... and how far the step cloud strays from the limit.
  std::vector<double> cond2_residual;
};
GeoAudit geometric_convergence_audit(const std::vector<MatCloud>& seq,
                                     const MatCloud& limit);

struct GenAudit {
  std::vector<std::vector<int>> words;        // generator index strings
  std::vector<std::vector<double>> per_word;  // [step][word] deviation
  std::vector<double> sup_deviation;          // per step, max over words
  bool generators_converging = false;         // per-step max gen deviation
                                              // nonincreasing (1% slack)
};
// Evaluates every word of length <= max_wordlen on each generator tuple and
// on the limit tuple, recording Frobenius deviations.
GenAudit generator_convergence_audit(
    const std::vector<std::vector<Mat>>& gens_seq,
    const std::vector<Mat>& limit_gens, int max_wordlen);

// max over in-window pairwise products of the distance back to the cloud;
// products leaving the window are ignored.
double closure_residual(const MatCloud& c);

struct ClosednessDemo {
  std::vector<double> step_residuals;  // equivariance residual per input pair
  double limit_residual = 0.0;
  bool inputs_equivariant = false;     // every step residual <= 1e-9
};
// Equivariance residual of (f, rep) = max over elements and samples of
// || rho_V(g) f x - f rho_U(g) x ||; demonstrates (not proves) that the
// limit of equivariant pairs stays equivariant.
ClosednessDemo equivariance_closedness_demo(
    const std::vector<Mat>& f_seq, const std::vector<rep::CoupledRep>& reps,
    const Mat& f_lim, const rep::CoupledRep& rep_lim,
    const std::vector<CVec>& samples);

struct SpiralReport {
  double coverage = 0.0;  // max over grid of distance to the orbit cloud
  double collapse = 0.0;  // spread of the orbit-averaged radial indicator
  std::size_t cloud_size = 0;
};
// Orbit of (1,0) under exp(t [[eps,-1],[1,eps]]) sampled uniformly on
// [t_min, t_max]. Coverage measures how densely the spiral fills the grid;
// collapse measures how close the time average of the unit-disc indicator
// is to a constant across the grid (an invariant function being forced
// constant).
SpiralReport spiral_orbit_demo(double eps, double t_min, double t_max,
                               int n_samples,
                               const std::vector<Eigen::Vector2d>& grid);

std::vector<Eigen::Vector2d> annulus_grid(double r_min, double r_max,
                                          int n_radial, int n_angular);
std::vector<Eigen::Vector2d> circle_grid(double radius, int n);

}  // namespace eqmap::convergence
