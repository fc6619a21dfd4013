#pragma once

// Matrix representations of finite groups/semigroups on a shared Cayley
// table: intertwiner spaces, commutants, isotypic decomposition, and the two
// routes (direct nullspace vs block construction) to the pair-symmetry space
// of a coupled representation.

#include <cstdint>
#include <vector>

#include "eqmap/algebra.hpp"
#include "eqmap/linalg.hpp"

namespace eqmap::rep {

struct Rep {
  algebra::SemigroupTable table;
  std::vector<Mat> mats;  // one image per table element

  Eigen::Index dim() const { return mats.empty() ? 0 : mats[0].rows(); }
  const Mat& operator[](int k) const { return mats[k]; }
  std::size_t size() const { return mats.size(); }
};

// Close the generators into a table and carry the images along.
Rep rep_from_generators(const std::vector<Mat>& gen_images, double tol = 1e-9,
                        std::size_t cap = 10000);
// Images for an existing table, filled along the closure provenance.
Rep rep_on_table(const algebra::SemigroupTable& table,
                 const std::vector<Mat>& gen_images);
// Permutation matrices of a closed permutation semigroup.
Rep perm_rep(const algebra::PermClosure& pc);

// Two representations of the same underlying table.
struct CoupledRep {
  Rep U, V;
  const algebra::SemigroupTable& table() const { return U.table; }
};

// Closes the block-diagonal pairs diag(gu, gv) jointly so element identity is
// decided on the couple, then splits into the two legs.
CoupledRep coupled_from_generators(const std::vector<Mat>& gen_u,
                                   const std::vector<Mat>& gen_v,
                                   double tol = 1e-9, std::size_t cap = 10000);

// Block-diagonal images diag(rho_U(g), rho_V(g)) for every element.
std::vector<Mat> coupled_images(const CoupledRep& c);

// {L : rho_V(g) L = L rho_U(g) for all g}; constraints stacked over the
// generators (sufficient: products inherit the relation).
linalg::MatSubspace intertwiner_basis(const Rep& u, const Rep& v,
                                      double tol = 1e-9);

// {X : X A = A X for all A in mats} and its double.
linalg::MatSubspace commutant(const std::vector<Mat>& mats, double tol = 1e-9);
linalg::MatSubspace bicommutant(const std::vector<Mat>& mats,
                                double tol = 1e-9);

struct SchurReport {
  bool irreducible = false;
  Eigen::Index commutant_dim = 0;
};
// Over C: irreducible iff the commutant is the scalars.
SchurReport strong_schur_check(const Rep& r, double tol = 1e-9);

struct IsotypicBlock {
  Eigen::Index w = 0;  // irreducible dimension
  Eigen::Index m = 0;  // multiplicity
  Eigen::Index col = 0;          // first column of the block inside Q
  std::vector<Mat> irrep_gens;   // generator images inside one copy (w x w)
};

struct IsotypicDecomposition {
  Mat Q, Qinv;  // Qinv * rho(g) * Q is block diagonal, copies identical
  std::vector<IsotypicBlock> blocks;
};

// Random-commutant eigenspace splitting (deterministic under `seed`, up to 8
// re-draws before DecompositionUnstable). Requires a group (NotAGroup).
// Non-unitary input is conjugated unitary first via the group-averaged Gram.
IsotypicDecomposition decompose(const Rep& r, double tol = 1e-9,
                                std::uint64_t seed = 0xDECAF);

// Pairs (t_U, t_V) with t_V L = L t_U for every intertwiner L, embedded as
// block-diagonal (dU+dV) x (dU+dV) matrices.
linalg::MatSubspace pair_symmetry_space(const CoupledRep& c, double tol = 1e-9);

struct BlockMatch {
  int u_block = -1;
  int v_block = -1;
  Mat m;  // unitary w x w, rho_V-block(g) * m = m * rho_U-block(g)
};

struct DegeneracyReport {
  std::vector<int> u_only;  // U-decomposition blocks absent from V
  std::vector<int> v_only;
  std::vector<BlockMatch> matched;
};

struct PredictedPairSpace {
  linalg::MatSubspace space;  // same embedding as pair_symmetry_space
  DegeneracyReport degeneracy;
  IsotypicDecomposition dec_u, dec_v;
};

// The block-structure route to the same space: shared endomorphism per
// common irreducible, free strips where a block is missing on one side.
PredictedPairSpace predicted_pair_space(const CoupledRep& c, double tol = 1e-9,
                                        std::uint64_t seed = 0xDECAF);

// Action of a semigroup-algebra element: sum_k coeffs[k] * rho(elem k).
Mat rho_tilde(const Rep& r, const std::vector<cplx>& coeffs);

}  // namespace eqmap::rep
