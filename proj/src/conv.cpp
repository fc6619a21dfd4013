#include "eqmap/conv.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "eqmap/errors.hpp"

namespace eqmap::conv {

using algebra::compose;
using algebra::Perm;
using linalg::kron;
using linalg::MatSubspace;
using linalg::nullspace;
using linalg::unvec;
using linalg::vec;

bool GSpace::orbit_free(int orbit) const {
  const int base = base_point(orbit);
  std::set<int> hit;
  for (const Perm& a : action) hit.insert(a[base]);
  return hit.size() == static_cast<std::size_t>(table.n) &&
         hit.size() == orbits[orbit].size();
}

bool GSpace::mu_invariant(double tol) const {
  for (const Perm& a : action)
    for (int x = 0; x < points(); ++x)
      if (std::abs(mu[a[x]] - mu[x]) > tol) return false;
  return true;
}

GSpace make_gspace(const algebra::SemigroupTable& table,
                   const std::vector<Perm>& action, std::vector<double> mu) {
  if (static_cast<int>(action.size()) != table.n)
    throw ShapeMismatch("one permutation per table element required");
  if (action.empty()) throw ShapeMismatch("empty action");
  const int x_size = static_cast<int>(action[0].size());
  for (const Perm& a : action)
    if (static_cast<int>(a.size()) != x_size || !algebra::is_bijection(a))
      throw ShapeMismatch("action elements must be permutations of X");
  for (int i = 0; i < table.n; ++i)
    for (int j = 0; j < table.n; ++j)
      if (action[table.at(i, j)] != compose(action[i], action[j]))
        throw ShapeMismatch("action does not realize the table (left law)");

  if (mu.empty()) mu.assign(x_size, 1.0 / x_size);
  if (static_cast<int>(mu.size()) != x_size)
    throw ShapeMismatch("one weight per point required");
  for (double w : mu)
    if (!(w > 0)) throw ShapeMismatch("weights must be strictly positive");

  GSpace g;
  g.table = table;
  g.action = action;
  g.mu = std::move(mu);
  g.orbit_of.assign(x_size, -1);
  for (int x = 0; x < x_size; ++x) {
    if (g.orbit_of[x] >= 0) continue;
    const int id = static_cast<int>(g.orbits.size());
    std::vector<int> queue{x};
    g.orbit_of[x] = id;
    std::vector<int> members{x};
    while (!queue.empty()) {
      const int y = queue.back();
      queue.pop_back();
      for (const Perm& a : g.action)
        if (g.orbit_of[a[y]] < 0) {
          g.orbit_of[a[y]] = id;
          members.push_back(a[y]);
          queue.push_back(a[y]);
        }
    }
    std::sort(members.begin(), members.end());
    g.orbits.push_back(std::move(members));
  }
  return g;
}

GSpace regular_gspace(const algebra::SemigroupTable& table) {
  return free_orbit_sum(table, 1);
}

GSpace free_orbit_sum(const algebra::SemigroupTable& table, int copies) {
  if (copies <= 0) throw ShapeMismatch("need at least one orbit");
  std::vector<Perm> action(table.n, Perm(copies * table.n));
  for (int g = 0; g < table.n; ++g)
    for (int c = 0; c < copies; ++c)
      for (int x = 0; x < table.n; ++x)
        action[g][c * table.n + x] = c * table.n + table.at(g, x);
  return make_gspace(table, action);
}

Mat composition_matrix(const std::vector<int>& t) {
  const Eigen::Index n = static_cast<Eigen::Index>(t.size());
  Mat c = Mat::Zero(n, n);
  for (Eigen::Index x = 0; x < n; ++x) {
    if (t[x] < 0 || t[x] >= n) throw ShapeMismatch("map value out of range");
    c(x, t[x]) = 1.0;
  }
  return c;
}

Mat kernel_operator(const Mat& kappa, int x_points, int y_points) {
  if (kappa.rows() != y_points || kappa.cols() != x_points)
    throw ShapeMismatch("kernel must be |Y| x |X|");
  return kappa;
}

Mat integral_operator(const Mat& k, const std::vector<double>& mu) {
  if (k.cols() != static_cast<Eigen::Index>(mu.size()))
    throw ShapeMismatch("one weight per kernel column required");
  Mat out = k;
  for (Eigen::Index x = 0; x < k.cols(); ++x) out.col(x) *= mu[x];
  return out;
}

KernelChecks kernel_invariance_iff_equivariance(const Mat& kappa,
                                                const Perm& t_x,
                                                const Perm& t_y, double tol) {
  if (static_cast<Eigen::Index>(t_x.size()) != kappa.cols() ||
      static_cast<Eigen::Index>(t_y.size()) != kappa.rows())
    throw ShapeMismatch("bijections must match the kernel sides");
  if (!algebra::is_bijection(t_x) || !algebra::is_bijection(t_y))
    throw ShapeMismatch("t_x and t_y must be bijections");

  KernelChecks out;
  // Route 1: entrywise row transport, no matrix algebra.
  double worst = 0.0;
  for (Eigen::Index y = 0; y < kappa.rows(); ++y)
    for (Eigen::Index x = 0; x < kappa.cols(); ++x)
      worst = std::max(worst, std::abs(kappa(t_y[y], t_x[x]) - kappa(y, x)));
  out.kernel_invariant = worst <= tol;

  // Route 2: composition operators on the signal spaces.
  const Mat diff = composition_matrix(t_y) * kappa - kappa * composition_matrix(t_x);
  out.operator_equivariant = diff.cwiseAbs().maxCoeff() <= tol;

  if (out.kernel_invariant != out.operator_equivariant)
    throw InternalInconsistency(
        "kernel invariance and operator equivariance disagree");
  return out;
}

KernelFnChecks kernel_function_invariance(const Mat& k,
                                          const std::vector<double>& mu,
                                          const Perm& t_x, const Perm& t_y,
                                          double tol) {
  if (!algebra::is_bijection(t_x) || !algebra::is_bijection(t_y))
    throw ShapeMismatch("t_x and t_y must be bijections");
  KernelFnChecks out;
  out.mu_preserved = true;
  for (std::size_t x = 0; x < mu.size(); ++x)
    if (std::abs(mu[t_x[x]] - mu[x]) > 1e-12) out.mu_preserved = false;

  const Mat op = integral_operator(k, mu);
  const Mat diff =
      composition_matrix(t_y) * op - op * composition_matrix(t_x);
  out.operator_equivariant = diff.cwiseAbs().maxCoeff() <= tol;

  const Perm inv_x = algebra::inverse_perm(t_x);
  double worst = 0.0;
  for (Eigen::Index y = 0; y < k.rows(); ++y)
    for (Eigen::Index x = 0; x < k.cols(); ++x) {
      if (!(mu[x] > 0)) continue;
      worst = std::max(worst, std::abs(k(t_y[y], x) - k(y, inv_x[x])));
    }
  out.function_invariant = worst <= tol;
  return out;
}

namespace {

std::vector<Mat> generator_compositions(const GSpace& g) {
  std::vector<Mat> out;
  for (int gen : g.table.gens) out.push_back(composition_matrix(g.action[gen]));
  return out;
}

}  // namespace

MatSubspace equivariant_operator_basis(const GSpace& gx, const GSpace& gy,
                                       double tol) {
  if (gx.table.n != gy.table.n || gx.table.gens != gy.table.gens)
    throw ShapeMismatch("the two spaces must share one table");
  const Eigen::Index nx = gx.points(), ny = gy.points();
  const std::vector<Mat> cx = generator_compositions(gx);
  const std::vector<Mat> cy = generator_compositions(gy);
  Mat cons(static_cast<Eigen::Index>(cx.size()) * nx * ny, nx * ny);
  for (std::size_t k = 0; k < cx.size(); ++k)
    cons.middleRows(static_cast<Eigen::Index>(k) * nx * ny, nx * ny) =
        kron(Mat::Identity(nx, nx), cy[k]) -
        kron(cx[k].transpose(), Mat::Identity(ny, ny));
  Mat ns = nullspace(cons, tol);
  MatSubspace out;
  out.rows = ny;
  out.cols = nx;
  for (Eigen::Index j = 0; j < ns.cols(); ++j)
    out.basis.push_back(unvec(ns.col(j), ny, nx));
  return out;
}

ConvKernel ConvKernel::zeros(Eigen::Index n_elems, Eigen::Index in_orbits,
                             Eigen::Index out_orbits) {
  ConvKernel k;
  k.n_elems = n_elems;
  k.in_orbits = in_orbits;
  k.out_orbits = out_orbits;
  k.data.assign(static_cast<std::size_t>(n_elems * in_orbits * out_orbits),
                cplx(0, 0));
  return k;
}

cplx& ConvKernel::at(int g, int o, int p) {
  return data[static_cast<std::size_t>((g * in_orbits + o) * out_orbits + p)];
}

const cplx& ConvKernel::at(int g, int o, int p) const {
  return data[static_cast<std::size_t>((g * in_orbits + o) * out_orbits + p)];
}

Mat conv_operator(const ConvKernel& ell, const GSpace& gx, const GSpace& gy,
                  const std::vector<double>& orbit_weights) {
  if (gx.table.n != gy.table.n || gx.table.gens != gy.table.gens)
    throw ShapeMismatch("the two spaces must share one table");
  const int n = gx.table.n;
  if (ell.n_elems != n ||
      ell.in_orbits != static_cast<Eigen::Index>(gx.orbits.size()) ||
      ell.out_orbits != static_cast<Eigen::Index>(gy.orbits.size()))
    throw ShapeMismatch("kernel dimensions do not match the orbit spaces");
  const auto cls = algebra::classify(gx.table);
  if (!cls.is_group)
    throw NotAGroup("coordinate-form convolution needs group inverses");
  for (std::size_t o = 0; o < gx.orbits.size(); ++o)
    if (!gx.orbit_free(static_cast<int>(o)))
      throw NonFreeOrbit("input orbit " + std::to_string(o) +
                         " has nontrivial stabilizers");
  for (std::size_t p = 0; p < gy.orbits.size(); ++p)
    if (!gy.orbit_free(static_cast<int>(p)))
      throw NonFreeOrbit("output orbit " + std::to_string(p) +
                         " has nontrivial stabilizers");

  std::vector<double> w = orbit_weights;
  if (w.empty()) w.assign(gx.orbits.size(), 1.0);
  if (w.size() != gx.orbits.size())
    throw ShapeMismatch("one weight per input orbit required");

  const double lambda = 1.0 / n;
  Mat op = Mat::Zero(gy.points(), gx.points());
  for (std::size_t p = 0; p < gy.orbits.size(); ++p)
    for (int h = 0; h < n; ++h) {
      const int y = gy.action[h][gy.base_point(static_cast<int>(p))];
      const int hinv = cls.inverse[h];
      for (std::size_t o = 0; o < gx.orbits.size(); ++o)
        for (int g = 0; g < n; ++g) {
          const int x = gx.action[g][gx.base_point(static_cast<int>(o))];
          op(y, x) += ell.at(gx.table.at(hinv, g), static_cast<int>(o),
                             static_cast<int>(p)) *
                      lambda * w[o];
        }
    }

  // The coordinate form is equivariant by construction; verify anyway.
  for (int g = 0; g < n; ++g) {
    const Mat diff = composition_matrix(gy.action[g]) * op -
                     op * composition_matrix(gx.action[g]);
    if (diff.cwiseAbs().maxCoeff() > 1e-9 * std::max(1.0, op.norm()))
      throw InternalInconsistency("convolution operator is not equivariant");
  }
  return op;
}

CompletenessReport conv_completeness_check(const GSpace& gx, const GSpace& gy,
                                           double tol) {
  const MatSubspace basis = equivariant_operator_basis(gx, gy, tol);
  CompletenessReport out;
  out.basis_dim = basis.dim();
  const int n = gx.table.n;
  const int no = static_cast<int>(gx.orbits.size());
  const int np = static_cast<int>(gy.orbits.size());
  out.kernel_params = static_cast<Eigen::Index>(n) * no * np;

  Mat a(static_cast<Eigen::Index>(gy.points()) * gx.points(),
        out.kernel_params);
  Eigen::Index col = 0;
  for (int g = 0; g < n; ++g)
    for (int o = 0; o < no; ++o)
      for (int p = 0; p < np; ++p) {
        ConvKernel delta = ConvKernel::zeros(n, no, np);
        delta.at(g, o, p) = 1.0;
        a.col(col++) = vec(conv_operator(delta, gx, gy));
      }

  Eigen::JacobiSVD<Mat> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  double worst = 0.0;
  for (const Mat& b : basis.basis) {
    const CVec target = vec(b);
    const CVec coeff = svd.solve(target);
    worst = std::max(worst, (a * coeff - target).norm());
  }
  out.residual = worst;
  out.complete = worst <= tol;
  return out;
}

namespace {

// All permutations of {0..n-1}; throws past the desk-scale cap.
std::vector<Perm> all_perms(int n) {
  if (n > 8) throw SearchTooLarge("enumeration beyond 8 points (8! cap)");
  Perm p(n);
  std::iota(p.begin(), p.end(), 0);
  std::vector<Perm> out;
  do {
    out.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

bool pair_commutes_with_all(const std::vector<Mat>& basis, const Mat& cx,
                            const Mat& cy, double tol) {
  for (const Mat& b : basis)
    if ((cy * b - b * cx).cwiseAbs().maxCoeff() > tol) return false;
  return true;
}

}  // namespace

EnumerationReport symmetry_enumeration(const GSpace& gx, const GSpace& gy,
                                       std::uint64_t seed, double tol) {
  for (double w : gx.mu)
    if (!(w > 0)) throw ShapeMismatch("mu must be strictly positive");
  const MatSubspace basis = equivariant_operator_basis(gx, gy, tol);

  EnumerationReport out;
  std::set<std::pair<Perm, Perm>> image;
  for (int g = 0; g < gx.table.n; ++g)
    image.insert({gx.action[g], gy.action[g]});
  out.g_image.assign(image.begin(), image.end());

  // A single random equivariant operator pins tY given tX when invertible.
  linalg::NormalSampler rng(seed);
  Mat probe;
  bool probe_ok = false;
  if (gx.points() == gy.points() && basis.dim() > 0) {
    for (int attempt = 0; attempt < 8 && !probe_ok; ++attempt) {
      probe = Mat::Zero(gy.points(), gx.points());
      for (const Mat& b : basis.basis) probe += rng.complex_normal() * b;
      probe_ok = Eigen::FullPivLU<Mat>(probe).isInvertible();
    }
  }
  Mat probe_inv;
  if (probe_ok) probe_inv = probe.inverse();

  const std::vector<Perm> x_perms = all_perms(gx.points());
  std::vector<Perm> y_perms;
  if (!probe_ok) y_perms = all_perms(gy.points());

  std::set<std::pair<Perm, Perm>> survivors;
  for (const Perm& tx : x_perms) {
    bool preserves = true;
    for (int x = 0; x < gx.points() && preserves; ++x)
      preserves = std::abs(gx.mu[tx[x]] - gx.mu[x]) <= 1e-12;
    if (!preserves) continue;
    ++out.candidates_tried;
    const Mat cx = composition_matrix(tx);

    if (probe_ok) {
      const Mat cand = probe * cx * probe_inv;
      Perm ty(gy.points());
      bool is_perm = true;
      for (Eigen::Index y = 0; y < cand.rows() && is_perm; ++y) {
        int hit = -1;
        for (Eigen::Index x = 0; x < cand.cols(); ++x) {
          const double m = std::abs(cand(y, x));
          if (std::abs(m - 1.0) <= 1e-6) {
            if (hit >= 0 || std::abs(cand(y, x) - 1.0) > 1e-6) {
              is_perm = false;
              break;
            }
            hit = static_cast<int>(x);
          } else if (m > 1e-6) {
            is_perm = false;
            break;
          }
        }
        if (hit < 0) is_perm = false;
        if (is_perm) ty[y] = hit;
      }
      if (!is_perm || !algebra::is_bijection(ty)) continue;
      if (pair_commutes_with_all(basis.basis, cx, composition_matrix(ty), tol))
        survivors.insert({tx, ty});
    } else {
      for (const Perm& ty : y_perms)
        if (pair_commutes_with_all(basis.basis, cx, composition_matrix(ty),
                                   tol))
          survivors.insert({tx, ty});
    }
  }

  out.pairs.assign(survivors.begin(), survivors.end());
  out.matches_g_image = survivors == image;
  out.closed_under_composition = true;
  for (const auto& a : survivors)
    for (const auto& b : survivors)
      if (!survivors.count({compose(a.first, b.first),
                            compose(a.second, b.second)}))
        out.closed_under_composition = false;
  return out;
}

CVec group_like_conv(const algebra::SemigroupTable& table,
                     const std::vector<cplx>& ell, const CVec& f) {
  const int n = table.n;
  if (static_cast<int>(ell.size()) != n || f.size() != n)
    throw ShapeMismatch("kernel and signal must cover the table");
  CVec out = CVec::Zero(n);
  for (int h = 0; h < n; ++h)
    for (int g = 0; g < n; ++g) out(h) += ell[g] * f(table.at(h, g));
  return out / static_cast<double>(n);
}

CVec semigroup_like_conv(const algebra::SemigroupTable& table,
                         const std::vector<cplx>& ell, const CVec& f) {
  const int n = table.n;
  if (static_cast<int>(ell.size()) != n || f.size() != n)
    throw ShapeMismatch("kernel and signal must cover the table");
  CVec out = CVec::Zero(n);
  for (int h = 0; h < n; ++h)
    for (int g = 0; g < n; ++g) out(h) += ell[g] * f(table.at(g, h));
  return out / static_cast<double>(n);
}

CVec classical_group_conv(const algebra::SemigroupTable& table,
                          const std::vector<cplx>& ell, const CVec& f) {
  const auto cls = algebra::classify(table);
  if (!cls.is_group) throw NotAGroup("classical convolution needs inverses");
  const int n = table.n;
  if (static_cast<int>(ell.size()) != n || f.size() != n)
    throw ShapeMismatch("kernel and signal must cover the table");
  CVec out = CVec::Zero(n);
  for (int h = 0; h < n; ++h)
    for (int g = 0; g < n; ++g)
      out(h) += ell[table.at(cls.inverse[h], g)] * f(g);
  return out / static_cast<double>(n);
}

std::vector<Mat> right_mult_actions(const algebra::SemigroupTable& table) {
  std::vector<Mat> out;
  for (int t = 0; t < table.n; ++t) {
    Mat m = Mat::Zero(table.n, table.n);
    for (int s = 0; s < table.n; ++s) m(s, table.at(s, t)) = 1.0;
    out.push_back(std::move(m));
  }
  return out;
}

EquivSetReport operator_equivariance_set(
    const Mat& op, const std::vector<std::pair<Mat, Mat>>& candidates,
    double tol) {
  EquivSetReport out;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const auto& [cx, cy] = candidates[i];
    if (cx.cols() != op.cols() || cy.rows() != op.rows())
      throw ShapeMismatch("candidate shapes do not match the operator");
    const double r = (cy * op - op * cx).norm();
    out.residuals.push_back(r);
    if (r <= tol) out.survivors.push_back(static_cast<int>(i));
  }
  return out;
}

HomogeneousReport homogeneous_conv_audit(const GSpace& gx, int x0,
                                         const std::vector<cplx>& ell,
                                         const std::vector<Perm>& t,
                                         double tol) {
  const int n = gx.table.n;
  const int nx = gx.points();
  if (x0 < 0 || x0 >= nx) throw ShapeMismatch("base point out of range");
  if (static_cast<int>(ell.size()) != n)
    throw ShapeMismatch("one kernel value per group element required");

  // First element carrying the base point onto x, in enumeration order.
  std::vector<int> section(nx, -1);
  for (int g = 0; g < n; ++g) {
    const int x = gx.action[g][x0];
    if (section[x] < 0) section[x] = g;
  }
  for (int x = 0; x < nx; ++x)
    if (section[x] < 0)
      throw SectionUndefined("action is not transitive from the base point");

  HomogeneousReport out;
  out.op = Mat::Zero(nx, nx);
  for (int x = 0; x < nx; ++x)
    for (int g = 0; g < n; ++g)
      out.op(x, gx.action[gx.table.at(section[x], g)][x0]) +=
          ell[g] / static_cast<double>(n);

  for (const Perm& tau : t) {
    if (static_cast<int>(tau.size()) != nx || !algebra::is_bijection(tau))
      throw ShapeMismatch("candidate symmetries must be permutations of X");
    const Mat c = composition_matrix(tau);
    out.residuals.push_back((c * out.op - out.op * c).norm());
  }

  out.g_abelian = algebra::classify(gx.table).is_abelian;
  out.t_commutes_with_g = true;
  out.witness = -1;
  for (std::size_t i = 0; i < t.size() && out.t_commutes_with_g; ++i)
    for (const Perm& a : gx.action)
      if (compose(t[i], a) != compose(a, t[i])) {
        out.t_commutes_with_g = false;
        out.witness = static_cast<int>(i);
        break;
      }

  const std::set<Perm> g_set(gx.action.begin(), gx.action.end());
  const std::set<Perm> t_set(t.begin(), t.end());
  out.t_inside_g_image = true;
  for (std::size_t i = 0; i < t.size(); ++i)
    if (!g_set.count(t[i])) {
      out.t_inside_g_image = false;
      if (out.witness < 0) out.witness = static_cast<int>(i);
      break;
    }
  out.images_equal = out.t_inside_g_image && t_set == g_set;

  if (out.g_abelian && out.t_commutes_with_g) {
    // An abelian group transitive on X acts regularly, and is then its own
    // centralizer in the symmetric group; commuting candidates cannot leave
    // the image.
    if (!out.t_inside_g_image)
      throw InternalInconsistency(
          "commuting candidate escaped an abelian transitive image");
    out.status = out.images_equal ? "equal-certified" : "contained-certified";
  } else {
    out.status = out.images_equal ? "equal-observed-unproven" : "differ";
  }
  return out;
}

}  // namespace eqmap::conv
