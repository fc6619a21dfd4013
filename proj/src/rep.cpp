#include "eqmap/rep.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <numeric>

namespace eqmap::rep {

using linalg::kron;
using linalg::MatSubspace;
using linalg::nullspace;
using linalg::subspace_from_span;
using linalg::unvec;
using linalg::vec;

Rep rep_from_generators(const std::vector<Mat>& gen_images, double tol,
                        std::size_t cap) {
  auto closed = algebra::close_matrix_generators(gen_images, tol, cap);
  return Rep{std::move(closed.table), std::move(closed.elems)};
}

Rep rep_on_table(const algebra::SemigroupTable& table,
                 const std::vector<Mat>& gen_images) {
  if (gen_images.size() != table.gens.size())
    throw ShapeMismatch("rep_on_table: one image per generator required");
  Rep r;
  r.table = table;
  r.mats.resize(table.n);
  for (int k = 0; k < table.n; ++k) {
    const auto [parent, gpos] = table.provenance[k];
    r.mats[k] = parent < 0 ? gen_images[gpos]
                           : Mat(r.mats[parent] * gen_images[gpos]);
  }
  return r;
}

Rep perm_rep(const algebra::PermClosure& pc) {
  Rep r;
  r.table = pc.table;
  r.mats.reserve(pc.elems.size());
  for (const auto& p : pc.elems) r.mats.push_back(algebra::perm_matrix(p));
  return r;
}

CoupledRep coupled_from_generators(const std::vector<Mat>& gen_u,
                                   const std::vector<Mat>& gen_v, double tol,
                                   std::size_t cap) {
  if (gen_u.size() != gen_v.size())
    throw ShapeMismatch("coupled_from_generators: generator lists differ");
  if (gen_u.empty()) throw ShapeMismatch("no generators");
  const Eigen::Index du = gen_u[0].rows(), dv = gen_v[0].rows();
  std::vector<Mat> pairs;
  pairs.reserve(gen_u.size());
  for (std::size_t k = 0; k < gen_u.size(); ++k) {
    Mat blk = Mat::Zero(du + dv, du + dv);
    blk.topLeftCorner(du, du) = gen_u[k];
    blk.bottomRightCorner(dv, dv) = gen_v[k];
    pairs.push_back(std::move(blk));
  }
  auto closed = algebra::close_matrix_generators(pairs, tol, cap);
  CoupledRep c;
  c.U.table = closed.table;
  c.V.table = closed.table;
  for (const Mat& m : closed.elems) {
    c.U.mats.push_back(m.topLeftCorner(du, du));
    c.V.mats.push_back(m.bottomRightCorner(dv, dv));
  }
  return c;
}

std::vector<Mat> coupled_images(const CoupledRep& c) {
  const Eigen::Index du = c.U.dim(), dv = c.V.dim();
  std::vector<Mat> out;
  out.reserve(c.U.size());
  for (std::size_t k = 0; k < c.U.size(); ++k) {
    Mat blk = Mat::Zero(du + dv, du + dv);
    blk.topLeftCorner(du, du) = c.U.mats[k];
    blk.bottomRightCorner(dv, dv) = c.V.mats[k];
    out.push_back(std::move(blk));
  }
  return out;
}

namespace {

// Stacked constraint rows for {L : B_k L = L A_k, all k}, L being dv x du.
Mat intertwiner_constraints(const std::vector<Mat>& as,
                            const std::vector<Mat>& bs) {
  assert(as.size() == bs.size());
  if (as.empty()) return Mat(0, 0);
  const Eigen::Index du = as[0].rows(), dv = bs[0].rows();
  Mat rows(static_cast<Eigen::Index>(as.size()) * du * dv, du * dv);
  const Mat idu = Mat::Identity(du, du), idv = Mat::Identity(dv, dv);
  for (std::size_t k = 0; k < as.size(); ++k)
    rows.middleRows(static_cast<Eigen::Index>(k) * du * dv, du * dv) =
        kron(idu, bs[k]) - kron(as[k].transpose(), idv);
  return rows;
}

MatSubspace nullspace_as_matrices(const Mat& constraints, Eigen::Index rows,
                                  Eigen::Index cols, double tol) {
  Mat ns = constraints.rows() == 0
               ? Mat(Mat::Identity(rows * cols, rows * cols))
               : nullspace(constraints, tol);
  MatSubspace out;
  out.rows = rows;
  out.cols = cols;
  out.basis.reserve(ns.cols());
  for (Eigen::Index k = 0; k < ns.cols(); ++k)
    out.basis.push_back(unvec(ns.col(k), rows, cols));
  return out;
}

std::vector<Mat> generator_images(const Rep& r) {
  std::vector<Mat> out;
  out.reserve(r.table.gens.size());
  for (int g : r.table.gens) out.push_back(r.mats[g]);
  return out;
}

}  // namespace

MatSubspace intertwiner_basis(const Rep& u, const Rep& v, double tol) {
  if (u.table.n != v.table.n)
    throw ShapeMismatch("intertwiner_basis: representations of different tables");
  const Mat cons =
      intertwiner_constraints(generator_images(u), generator_images(v));
  return nullspace_as_matrices(cons, v.dim(), u.dim(), tol);
}

MatSubspace commutant(const std::vector<Mat>& mats, double tol) {
  if (mats.empty()) throw ShapeMismatch("commutant of an empty family");
  const Eigen::Index d = mats[0].rows();
  for (const Mat& m : mats)
    if (m.rows() != d || m.cols() != d)
      throw ShapeMismatch("commutant: family must be square, equal sizes");
  return nullspace_as_matrices(intertwiner_constraints(mats, mats), d, d, tol);
}

MatSubspace bicommutant(const std::vector<Mat>& mats, double tol) {
  MatSubspace first = commutant(mats, tol);
  return commutant(first.basis, tol);
}

SchurReport strong_schur_check(const Rep& r, double tol) {
  MatSubspace c = commutant(generator_images(r), tol);
  return SchurReport{c.dim() == 1, c.dim()};
}

namespace {

struct Copy {
  Mat basis;                   // d x w, orthonormal columns
  std::vector<Mat> gen_blocks; // restricted generator images, w x w
};

// One attempt at splitting a unitary rep into irreducible copies via the
// eigenspaces of a random Hermitian commutant element. Returns false when the
// draw was degenerate (merged or skew eigenspaces).
bool try_split(const std::vector<Mat>& gens, const MatSubspace& comm,
               linalg::NormalSampler& rng, double tol,
               std::vector<Copy>& out) {
  const Eigen::Index d = gens.empty() ? 0 : gens[0].rows();
  Mat h = Mat::Zero(d, d);
  for (const Mat& b : comm.basis) h += rng.complex_normal() * b;
  h = (h + h.adjoint()).eval() / 2.0;

  Eigen::SelfAdjointEigenSolver<Mat> es(h);
  if (es.info() != Eigen::Success) return false;
  const auto& lam = es.eigenvalues();
  const Mat& vecs = es.eigenvectors();
  const double gap = 1e-6 * std::max(1.0, lam.cwiseAbs().maxCoeff());

  out.clear();
  Eigen::Index lo = 0;
  while (lo < d) {
    Eigen::Index hi = lo + 1;
    while (hi < d && lam(hi) - lam(hi - 1) < gap) ++hi;
    Copy c;
    c.basis = vecs.middleCols(lo, hi - lo);
    for (const Mat& g : gens) {
      Mat restricted = c.basis.adjoint() * g * c.basis;
      // Invariance of the eigenspace under the action.
      if ((g * c.basis - c.basis * restricted).norm() >
          1e-7 * std::max(1.0, g.norm()))
        return false;
      c.gen_blocks.push_back(std::move(restricted));
    }
    // Irreducibility of the restriction.
    MatSubspace cc = commutant(c.gen_blocks, tol);
    if (cc.dim() != 1) return false;
    out.push_back(std::move(c));
    lo = hi;
  }
  return true;
}

// Unitary intertwiner carrying `from` coordinates onto `to` coordinates,
// i.e. to_gens[k] * T = T * from_gens[k]; empty matrix when inequivalent.
Mat unitary_intertwiner(const std::vector<Mat>& from_gens,
                        const std::vector<Mat>& to_gens, double tol) {
  const Mat cons = intertwiner_constraints(from_gens, to_gens);
  Mat ns = nullspace(cons, tol);
  if (ns.cols() == 0) return Mat();
  if (ns.cols() > 1)
    throw MatchingAmbiguous(
        "irreducible blocks admit more than one intertwiner");
  const Eigen::Index w = from_gens[0].rows();
  Mat t = unvec(ns.col(0), w, w);
  // Schur: t^H t is a positive scalar; rescale to unitary.
  const double c = (t.adjoint() * t).trace().real() / static_cast<double>(w);
  if (c <= 0) throw InternalInconsistency("intertwiner with nonpositive Gram");
  return t / std::sqrt(c);
}

}  // namespace

IsotypicDecomposition decompose(const Rep& r, double tol, std::uint64_t seed) {
  const auto cls = algebra::classify(r.table);
  if (!cls.is_group)
    throw NotAGroup("isotypic decomposition requires a group table");
  const Eigen::Index d = r.dim();

  // Unitarize via the group-averaged Gram when needed.
  bool unitary = true;
  for (const Mat& g : generator_images(r))
    if ((g * g.adjoint() - Mat::Identity(d, d)).norm() > tol * d) {
      unitary = false;
      break;
    }
  Mat m = Mat::Identity(d, d), minv = m;
  if (!unitary) {
    Mat gram = Mat::Zero(d, d);
    for (const Mat& g : r.mats) gram += g.adjoint() * g;
    gram /= static_cast<double>(r.mats.size());
    Eigen::SelfAdjointEigenSolver<Mat> es(gram);
    if (es.info() != Eigen::Success)
      throw DecompositionUnstable("averaged Gram failed to diagonalize");
    const auto lam = es.eigenvalues();
    if (lam.minCoeff() <= 0)
      throw DecompositionUnstable("averaged Gram is not positive definite");
    m = es.eigenvectors() * lam.cwiseSqrt().asDiagonal() *
        es.eigenvectors().adjoint();
    minv = es.eigenvectors() * lam.cwiseSqrt().cwiseInverse().asDiagonal() *
           es.eigenvectors().adjoint();
  }
  std::vector<Mat> ugens;
  for (const Mat& g : generator_images(r)) ugens.push_back(m * g * minv);

  const MatSubspace comm = commutant(ugens, tol);
  linalg::NormalSampler rng(seed);
  std::vector<Copy> copies;
  bool ok = false;
  for (int attempt = 0; attempt < 8 && !ok; ++attempt)
    ok = try_split(ugens, comm, rng, tol, copies);
  if (!ok)
    throw DecompositionUnstable(
        "eigenspace splitting failed after 8 commutant draws");

  // Group the copies into equivalence classes, preserving discovery order.
  std::vector<std::vector<int>> classes;
  std::vector<Mat> aligners(copies.size());  // copy coords -> class-rep coords
  for (std::size_t i = 0; i < copies.size(); ++i) {
    bool placed = false;
    for (auto& cls_members : classes) {
      const Copy& head = copies[cls_members[0]];
      if (head.basis.cols() != copies[i].basis.cols()) continue;
      Mat t = unitary_intertwiner(head.gen_blocks, copies[i].gen_blocks, tol);
      if (t.size() == 0) continue;
      aligners[i] = std::move(t);
      cls_members.push_back(static_cast<int>(i));
      placed = true;
      break;
    }
    if (!placed) {
      aligners[i] = Mat::Identity(copies[i].basis.cols(), copies[i].basis.cols());
      classes.push_back({static_cast<int>(i)});
    }
  }
  std::stable_sort(classes.begin(), classes.end(),
                   [&](const std::vector<int>& a, const std::vector<int>& b) {
                     return copies[a[0]].basis.cols() < copies[b[0]].basis.cols();
                   });

  IsotypicDecomposition dec;
  Mat q_unitary(d, d);
  Eigen::Index col = 0;
  for (const auto& members : classes) {
    IsotypicBlock blk;
    blk.w = copies[members[0]].basis.cols();
    blk.m = static_cast<Eigen::Index>(members.size());
    blk.col = col;
    blk.irrep_gens = copies[members[0]].gen_blocks;
    for (int idx : members) {
      q_unitary.middleCols(col, blk.w) = copies[idx].basis * aligners[idx];
      col += blk.w;
    }
    dec.blocks.push_back(std::move(blk));
  }
  assert(col == d);
  dec.Q = minv * q_unitary;
  dec.Qinv = q_unitary.adjoint() * m;

  // Safety: the conjugated generators must be block diagonal with repeated
  // copies; a failure here means the splitting lied.
  for (std::size_t k = 0; k < ugens.size(); ++k) {
    Mat conj = dec.Qinv * r.mats[r.table.gens[k]] * dec.Q;
    for (const auto& blk : dec.blocks)
      for (Eigen::Index c0 = 0; c0 < blk.m; ++c0) {
        Mat sub = conj.block(blk.col + c0 * blk.w, blk.col + c0 * blk.w, blk.w,
                             blk.w);
        if ((sub - blk.irrep_gens[k]).norm() > 1e-6)
          throw InternalInconsistency("aligned copies disagree after conjugation");
      }
  }
  return dec;
}

MatSubspace pair_symmetry_space(const CoupledRep& c, double tol) {
  const Eigen::Index du = c.U.dim(), dv = c.V.dim();
  const MatSubspace inter = intertwiner_basis(c.U, c.V, tol);
  // Unknown x = [vec(tU); vec(tV)], constraint per basis element L:
  // tV L - L tU = 0, i.e. (L^T (x) I_dv) vec(tV) - (I_du (x) L) vec(tU) = 0.
  Mat cons(inter.dim() * du * dv, du * du + dv * dv);
  const Mat idu = Mat::Identity(du, du), idv = Mat::Identity(dv, dv);
  for (Eigen::Index k = 0; k < inter.dim(); ++k) {
    const Mat& L = inter.basis[k];
    cons.block(k * du * dv, 0, du * dv, du * du) = -kron(idu, L);
    cons.block(k * du * dv, du * du, du * dv, dv * dv) =
        kron(L.transpose(), idv);
  }
  Mat ns = cons.rows() == 0
               ? Mat(Mat::Identity(du * du + dv * dv, du * du + dv * dv))
               : nullspace(cons, tol);
  MatSubspace out;
  out.rows = out.cols = du + dv;
  out.basis.reserve(ns.cols());
  for (Eigen::Index k = 0; k < ns.cols(); ++k) {
    Mat blk = Mat::Zero(du + dv, du + dv);
    blk.topLeftCorner(du, du) = unvec(ns.col(k).head(du * du), du, du);
    blk.bottomRightCorner(dv, dv) = unvec(ns.col(k).tail(dv * dv), dv, dv);
    out.basis.push_back(std::move(blk));
  }
  return out;
}

PredictedPairSpace predicted_pair_space(const CoupledRep& c, double tol,
                                        std::uint64_t seed) {
  PredictedPairSpace out;
  out.dec_u = decompose(c.U, tol, seed);
  out.dec_v = decompose(c.V, tol, seed + 1);
  const auto& bu = out.dec_u.blocks;
  const auto& bv = out.dec_v.blocks;
  const Eigen::Index du = c.U.dim(), dv = c.V.dim();

  std::vector<int> match_u(bu.size(), -1), match_v(bv.size(), -1);
  for (std::size_t i = 0; i < bu.size(); ++i)
    for (std::size_t j = 0; j < bv.size(); ++j) {
      if (bu[i].w != bv[j].w) continue;
      Mat t = unitary_intertwiner(bu[i].irrep_gens, bv[j].irrep_gens, tol);
      if (t.size() == 0) continue;
      if (match_u[i] >= 0 || match_v[j] >= 0)
        throw MatchingAmbiguous("an irreducible block matched twice");
      match_u[i] = static_cast<int>(j);
      match_v[j] = static_cast<int>(i);
      out.degeneracy.matched.push_back(
          {static_cast<int>(i), static_cast<int>(j), std::move(t)});
    }
  for (std::size_t i = 0; i < bu.size(); ++i)
    if (match_u[i] < 0) out.degeneracy.u_only.push_back(static_cast<int>(i));
  for (std::size_t j = 0; j < bv.size(); ++j)
    if (match_v[j] < 0) out.degeneracy.v_only.push_back(static_cast<int>(j));

  // Assemble basis elements in decomposed coordinates, conjugate back, and
  // orthonormalize at the end (Q need not be unitary).
  std::vector<Mat> span;
  auto push_pair = [&](const Mat& xu, const Mat& xv) {
    Mat blk = Mat::Zero(du + dv, du + dv);
    blk.topLeftCorner(du, du) = out.dec_u.Q * xu * out.dec_u.Qinv;
    blk.bottomRightCorner(dv, dv) = out.dec_v.Q * xv * out.dec_v.Qinv;
    span.push_back(std::move(blk));
  };

  // Shared endomorphism per matched irreducible: I_n (x) E on the U side,
  // I_m (x) (M E M^-1) on the V side.
  for (const auto& mt : out.degeneracy.matched) {
    const auto& ub = bu[mt.u_block];
    const auto& vb = bv[mt.v_block];
    for (Eigen::Index a = 0; a < ub.w; ++a)
      for (Eigen::Index b = 0; b < ub.w; ++b) {
        Mat e = Mat::Zero(ub.w, ub.w);
        e(a, b) = 1.0;
        Mat xu = Mat::Zero(du, du), xv = Mat::Zero(dv, dv);
        for (Eigen::Index cpy = 0; cpy < ub.m; ++cpy)
          xu.block(ub.col + cpy * ub.w, ub.col + cpy * ub.w, ub.w, ub.w) = e;
        const Mat ev = mt.m * e * mt.m.adjoint();
        for (Eigen::Index cpy = 0; cpy < vb.m; ++cpy)
          xv.block(vb.col + cpy * vb.w, vb.col + cpy * vb.w, vb.w, vb.w) = ev;
        push_pair(xu, xv);
      }
  }
  // Rows of t_U feeding a U-only target block are unconstrained.
  for (int i : out.degeneracy.u_only) {
    const Eigen::Index r0 = bu[i].col, nr = bu[i].w * bu[i].m;
    for (Eigen::Index rr = 0; rr < nr; ++rr)
      for (Eigen::Index cc = 0; cc < du; ++cc) {
        Mat xu = Mat::Zero(du, du);
        xu(r0 + rr, cc) = 1.0;
        push_pair(xu, Mat::Zero(dv, dv));
      }
  }
  // Columns of t_V fed from a V-only source block are unconstrained.
  for (int j : out.degeneracy.v_only) {
    const Eigen::Index c0 = bv[j].col, nc = bv[j].w * bv[j].m;
    for (Eigen::Index cc = 0; cc < nc; ++cc)
      for (Eigen::Index rr = 0; rr < dv; ++rr) {
        Mat xv = Mat::Zero(dv, dv);
        xv(rr, c0 + cc) = 1.0;
        push_pair(Mat::Zero(du, du), xv);
      }
  }
  out.space = subspace_from_span(span, tol);
  if (out.space.dim() != static_cast<Eigen::Index>(span.size()))
    throw InternalInconsistency(
        "predicted pair-space basis is linearly dependent");
  return out;
}

Mat rho_tilde(const Rep& r, const std::vector<cplx>& coeffs) {
  if (coeffs.size() != r.size())
    throw ShapeMismatch("rho_tilde: one coefficient per element required");
  Mat acc = Mat::Zero(r.dim(), r.dim());
  for (std::size_t k = 0; k < coeffs.size(); ++k) acc += coeffs[k] * r.mats[k];
  return acc;
}

}  // namespace eqmap::rep
