#include "eqmap/convergence.hpp"

#include <algorithm>
#include <cmath>

#include "eqmap/errors.hpp"
#include "eqmap/kernels.hpp"

namespace eqmap::convergence {

double directed_hausdorff(const MatCloud& a, const MatCloud& b) {
  return kernels::directed_max_min_frob(a.points, b.points);
}

double hausdorff(const MatCloud& a, const MatCloud& b) {
  return std::max(directed_hausdorff(a, b), directed_hausdorff(b, a));
}

MatCloud truncated_semigroup_cloud(const std::vector<Mat>& gens,
                                   double window_radius, int max_wordlen,
                                   double dedup_tol) {
  if (gens.empty()) throw ShapeMismatch("no generators");
  const Eigen::Index d = gens[0].rows();
  for (const Mat& g : gens)
    if (g.rows() != d || g.cols() != d)
      throw ShapeMismatch("generators must be square of one size");

  auto known = [&](const std::vector<Mat>& pool, const Mat& m) {
    for (const Mat& q : pool)
      if ((q - m).cwiseAbs().maxCoeff() <= dedup_tol) return true;
    return false;
  };

  // Track every distinct word product (in- or out-of-window) so longer
  // words can re-enter the window; only in-window products are reported.
  std::vector<Mat> seen;
  MatCloud out;
  out.window_radius = window_radius;
  auto admit = [&](const Mat& p, std::vector<Mat>& frontier) {
    if (known(seen, p)) return;
    seen.push_back(p);
    if (seen.size() > 1000000)
      throw BlowUp("truncated cloud exceeded 1e6 products");
    if (kernels::op_norm(p) <= window_radius) out.points.push_back(p);
    frontier.push_back(p);
  };

  std::vector<Mat> frontier;
  for (const Mat& g : gens) admit(g, frontier);
  for (int len = 2; len <= max_wordlen && !frontier.empty(); ++len) {
    std::vector<Mat> next;
    for (const Mat& stem : frontier)
      for (const Mat& g : gens) admit(stem * g, next);
    frontier = std::move(next);
  }
  return out;
}

GeoAudit geometric_convergence_audit(const std::vector<MatCloud>& seq,
                                     const MatCloud& limit) {
  GeoAudit out;
  for (const MatCloud& step : seq) {
    out.cond1_sup.push_back(directed_hausdorff(limit, step));
    out.cond2_residual.push_back(directed_hausdorff(step, limit));
  }
  return out;
}

namespace {

Mat word_product(const std::vector<Mat>& gens, const std::vector<int>& word) {
  Mat p = gens[word[0]];
  for (std::size_t i = 1; i < word.size(); ++i) p = p * gens[word[i]];
  return p;
}

}  // namespace

GenAudit generator_convergence_audit(
    const std::vector<std::vector<Mat>>& gens_seq,
    const std::vector<Mat>& limit_gens, int max_wordlen) {
  if (limit_gens.empty()) throw ShapeMismatch("no limit generators");
  const std::size_t arity = limit_gens.size();
  for (const auto& tuple : gens_seq)
    if (tuple.size() != arity)
      throw ShapeMismatch("all generator tuples must share the arity");

  GenAudit out;
  std::vector<std::vector<int>> level;
  for (int k = 0; k < static_cast<int>(arity); ++k) level.push_back({k});
  for (int len = 1; len <= max_wordlen; ++len) {
    for (const auto& w : level) out.words.push_back(w);
    if (out.words.size() > 1000000)
      throw BlowUp("word list exceeded 1e6 entries");
    std::vector<std::vector<int>> next;
    if (len < max_wordlen)
      for (const auto& w : level)
        for (int k = 0; k < static_cast<int>(arity); ++k) {
          next.push_back(w);
          next.back().push_back(k);
        }
    level = std::move(next);
  }

  std::vector<Mat> limit_values;
  limit_values.reserve(out.words.size());
  for (const auto& w : out.words)
    limit_values.push_back(word_product(limit_gens, w));

  for (const auto& tuple : gens_seq) {
    std::vector<double> row;
    double sup = 0.0;
    for (std::size_t i = 0; i < out.words.size(); ++i) {
      const double dev =
          (word_product(tuple, out.words[i]) - limit_values[i]).norm();
      row.push_back(dev);
      sup = std::max(sup, dev);
    }
    out.per_word.push_back(std::move(row));
    out.sup_deviation.push_back(sup);
  }

  out.generators_converging = true;
  double prev = -1.0;
  for (const auto& tuple : gens_seq) {
    double gen_dev = 0.0;
    for (std::size_t k = 0; k < arity; ++k)
      gen_dev = std::max(gen_dev, (tuple[k] - limit_gens[k]).norm());
    if (prev >= 0 && gen_dev > prev * 1.01 + 1e-15)
      out.generators_converging = false;
    prev = gen_dev;
  }
  return out;
}

double closure_residual(const MatCloud& c) {
  return kernels::closure_residual_pairs(c.points, c.window_radius);
}

namespace {

double pair_residual(const Mat& f, const rep::CoupledRep& c,
                     const std::vector<CVec>& samples) {
  if (f.cols() != c.U.dim() || f.rows() != c.V.dim())
    throw ShapeMismatch("map shape does not match the coupled rep");
  double worst = 0.0;
  for (std::size_t g = 0; g < c.U.size(); ++g)
    for (const CVec& x : samples)
      worst = std::max(worst,
                       (c.V.mats[g] * (f * x) - f * (c.U.mats[g] * x)).norm());
  return worst;
}

}  // namespace

ClosednessDemo equivariance_closedness_demo(
    const std::vector<Mat>& f_seq, const std::vector<rep::CoupledRep>& reps,
    const Mat& f_lim, const rep::CoupledRep& rep_lim,
    const std::vector<CVec>& samples) {
  if (f_seq.size() != reps.size())
    throw ShapeMismatch("one map per coupled rep required");
  ClosednessDemo out;
  out.inputs_equivariant = true;
  for (std::size_t i = 0; i < f_seq.size(); ++i) {
    out.step_residuals.push_back(pair_residual(f_seq[i], reps[i], samples));
    if (out.step_residuals.back() > 1e-9) out.inputs_equivariant = false;
  }
  out.limit_residual = pair_residual(f_lim, rep_lim, samples);
  return out;
}

SpiralReport spiral_orbit_demo(double eps, double t_min, double t_max,
                               int n_samples,
                               const std::vector<Eigen::Vector2d>& grid) {
  if (n_samples < 2) throw ShapeMismatch("need at least two orbit samples");
  if (t_max <= t_min) throw ShapeMismatch("empty time range");
  Mat a(2, 2);
  a << eps, -1.0, 1.0, eps;

  std::vector<Eigen::Matrix2d> flow;
  flow.reserve(n_samples);
  for (int i = 0; i < n_samples; ++i) {
    const double t = t_min + (t_max - t_min) * i / (n_samples - 1);
    flow.push_back(linalg::expm(Mat(t * a)).real());
  }

  std::vector<Eigen::Vector2d> cloud;
  cloud.reserve(n_samples);
  const Eigen::Vector2d base(1.0, 0.0);
  for (const auto& m : flow) cloud.push_back(m * base);

  SpiralReport out;
  out.cloud_size = cloud.size();
  out.coverage = kernels::coverage_max_min(grid, cloud);

  double lo = 1.0, hi = 0.0;
  for (const auto& x : grid) {
    double avg = 0.0;
    for (const auto& m : flow) avg += ((m * x).norm() <= 1.0) ? 1.0 : 0.0;
    avg /= flow.size();
    lo = std::min(lo, avg);
    hi = std::max(hi, avg);
  }
  out.collapse = grid.empty() ? 0.0 : hi - lo;
  return out;
}

std::vector<Eigen::Vector2d> annulus_grid(double r_min, double r_max,
                                          int n_radial, int n_angular) {
  std::vector<Eigen::Vector2d> out;
  for (int i = 0; i < n_radial; ++i) {
    const double r =
        n_radial == 1 ? r_min : r_min + (r_max - r_min) * i / (n_radial - 1);
    for (int j = 0; j < n_angular; ++j) {
      const double th = 2.0 * M_PI * j / n_angular;
      out.emplace_back(r * std::cos(th), r * std::sin(th));
    }
  }
  return out;
}

std::vector<Eigen::Vector2d> circle_grid(double radius, int n) {
  return annulus_grid(radius, radius, 1, n);
}

}  // namespace eqmap::convergence
