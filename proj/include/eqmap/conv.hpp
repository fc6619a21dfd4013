#pragma once

// Finite measure-space convolution machinery: signal operators from
// transition kernels, the kernel-invariance <-> operator-equivariance
// equivalence, equivariant operator spaces, coordinate-form group
// convolutions over free orbits, and the exhaustive symmetry enumeration
// that pins the surviving coupled symmetries of the equivariant class.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "eqmap/algebra.hpp"
#include "eqmap/linalg.hpp"

namespace eqmap::conv {

// A finite set X with a (semi)group of permutations indexed by a Cayley
// table, positive per-point weights, and the induced orbit partition.
struct GSpace {
  algebra::SemigroupTable table;
  std::vector<algebra::Perm> action;  // one permutation of X per element
  std::vector<double> mu;             // strictly positive point weights
  std::vector<std::vector<int>> orbits;
  std::vector<int> orbit_of;

  int points() const { return static_cast<int>(mu.size()); }
  int base_point(int orbit) const { return orbits[orbit][0]; }
  // g -> action[g](base) hits the whole orbit without repeats.
  bool orbit_free(int orbit) const;
  bool mu_invariant(double tol = 1e-12) const;
};

// Validates bijectivity, the left-action law action[ij] = action[i] o
// action[j], and weight positivity; computes orbits. Empty mu means uniform
// 1/|X|.
GSpace make_gspace(const algebra::SemigroupTable& table,
                   const std::vector<algebra::Perm>& action,
                   std::vector<double> mu = {});

// The (semi)group acting on itself by left translation.
GSpace regular_gspace(const algebra::SemigroupTable& table);

// Disjoint union of `copies` left-translation orbits.
GSpace free_orbit_sum(const algebra::SemigroupTable& table, int copies);

// Composition operator (C_t f)(x) = f(t(x)); t need not be injective.
Mat composition_matrix(const std::vector<int>& t);

// A row-per-output-point transition kernel is itself the operator matrix;
// this only checks shape against the declared sizes.
Mat kernel_operator(const Mat& kappa, int x_points, int y_points);

// Operator of a kernel function k (indexed [y][x]) against weights mu:
// L[y][x] = k[y][x] * mu[x].
Mat integral_operator(const Mat& k, const std::vector<double>& mu);

struct KernelChecks {
  bool kernel_invariant = false;     // kappa[tY(y)][tX(x)] == kappa[y][x]
  bool operator_equivariant = false; // C_tY kappa == kappa C_tX
};

// Both sides computed independently; they must agree (the equivalence is a
// theorem), so disagreement raises InternalInconsistency.
KernelChecks kernel_invariance_iff_equivariance(const Mat& kappa,
                                                const algebra::Perm& t_x,
                                                const algebra::Perm& t_y,
                                                double tol = 1e-9);

struct KernelFnChecks {
  bool mu_preserved = false;         // mu(tX(x)) == mu(x)
  bool operator_equivariant = false;
  bool function_invariant = false;   // k[tY(y)][x] == k[y][tX^-1(x)] on mu>0
};

// Finite form of "equivariance forces kernel-function invariance when the
// input map preserves the measure".
KernelFnChecks kernel_function_invariance(const Mat& k,
                                          const std::vector<double>& mu,
                                          const algebra::Perm& t_x,
                                          const algebra::Perm& t_y,
                                          double tol = 1e-9);

// {L : C^Y_g L = L C^X_g for every generator g}; orthonormal |Y| x |X| basis.
linalg::MatSubspace equivariant_operator_basis(const GSpace& gx,
                                               const GSpace& gy,
                                               double tol = 1e-9);

// Convolution kernel in G x (X/G) coordinates: one scalar per
// (group element, input orbit, output orbit).
struct ConvKernel {
  Eigen::Index n_elems = 0, in_orbits = 0, out_orbits = 0;
  std::vector<cplx> data;

  static ConvKernel zeros(Eigen::Index n_elems, Eigen::Index in_orbits,
                          Eigen::Index out_orbits);
  cplx& at(int g, int o, int p);
  const cplx& at(int g, int o, int p) const;
};

// (Lf)(h,p) = sum_{o,g} ell(h^-1 g, o, p) f(g,o) lambda(g) w(o) with
// lambda = 1/|G| and free-orbit coordinates x = action[g](base_o).
// Requires a group and every orbit free (NonFreeOrbit); the result is
// verified equivariant before being returned.
Mat conv_operator(const ConvKernel& ell, const GSpace& gx, const GSpace& gy,
                  const std::vector<double>& orbit_weights = {});

struct CompletenessReport {
  bool complete = false;
  double residual = 0.0;       // worst least-squares misfit over the basis
  Eigen::Index basis_dim = 0;  // equivariant operator space dimension
  Eigen::Index kernel_params = 0;
};

// Solves for a ConvKernel reproducing each equivariant basis operator;
// complete when every one is hit within tol.
CompletenessReport conv_completeness_check(const GSpace& gx, const GSpace& gy,
                                           double tol = 1e-9);

struct EnumerationReport {
  std::vector<std::pair<algebra::Perm, algebra::Perm>> pairs;  // survivors
  std::vector<std::pair<algebra::Perm, algebra::Perm>> g_image;
  bool matches_g_image = false;
  bool closed_under_composition = false;
  long long candidates_tried = 0;  // tX candidates after the mu filter
};

// Exhaustively enumerates (tX preserving mu, tY any bijection) such that
// every equivariant basis operator commutes with the pair. Pruning: a seeded
// random invertible equivariant operator R pins C_tY = R C_tX R^-1, which is
// lossless; without an invertible R the tY side is enumerated too.
// SearchTooLarge beyond 8 points on an enumerated side.
EnumerationReport symmetry_enumeration(const GSpace& gx, const GSpace& gy,
                                       std::uint64_t seed = 0xDECAF,
                                       double tol = 1e-9);

// Convolutions of a signal on the (semi)group itself, lambda = 1/|S|:
//   group-like     (Lf)(h) = sum_g ell(g) f(hg) lambda(g)
//   semigroup-like (Lf)(h) = sum_g ell(g) f(gh) lambda(g)
CVec group_like_conv(const algebra::SemigroupTable& table,
                     const std::vector<cplx>& ell, const CVec& f);
CVec semigroup_like_conv(const algebra::SemigroupTable& table,
                         const std::vector<cplx>& ell, const CVec& f);
// Classical form sum_g ell(h^-1 g) f(g) lambda(g); groups only (NotAGroup).
CVec classical_group_conv(const algebra::SemigroupTable& table,
                          const std::vector<cplx>& ell, const CVec& f);

// Signal operators of right multiplication, (M_t f)(s) = f(st); these are
// not permutations in a general semigroup.
std::vector<Mat> right_mult_actions(const algebra::SemigroupTable& table);

struct EquivSetReport {
  std::vector<int> survivors;     // indices into the candidate list
  std::vector<double> residuals;  // ||candY L - L candX|| per candidate
};

EquivSetReport operator_equivariance_set(
    const Mat& op, const std::vector<std::pair<Mat, Mat>>& candidates,
    double tol = 1e-9);

struct HomogeneousReport {
  Mat op;                          // (Lf)(x) = sum_g ell(g) f(g_x g x0) / |G|
  std::vector<double> residuals;   // equivariance residual per T element
  bool g_abelian = false;
  bool t_commutes_with_g = false;  // pointwise, on X
  bool t_inside_g_image = false;
  bool images_equal = false;
  int witness = -1;                // first offending T element, when any
  std::string status;  // equal-certified | contained-certified |
                       // equal-observed-unproven | differ
};

// Audits a candidate symmetry family T against a transitive G-space: builds
// the section-based convolution at base point x0, then certifies T's image
// inside/equal to G's exactly when G is abelian and T commutes with it
// (the provable route); otherwise only observes and reports.
HomogeneousReport homogeneous_conv_audit(const GSpace& gx, int x0,
                                         const std::vector<cplx>& ell,
                                         const std::vector<algebra::Perm>& t,
                                         double tol = 1e-9);

}  // namespace eqmap::conv
