#pragma once

// Dense complex linear algebra used by the representation-theoretic modules:
// vectorization/Kronecker identities, numerically tolerant nullspaces,
// subspaces of matrices under the Frobenius inner product, principal angles,
// the matrix exponential, and multiplicative closure of matrix subspaces.

#include <complex>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "eqmap/errors.hpp"

namespace eqmap {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;

namespace linalg {

// Kronecker product A (x) B.
Mat kron(const Mat& a, const Mat& b);

// Column-major stacking; satisfies vec(A X B) = (B^T (x) A) vec(X).
CVec vec(const Mat& m);
Mat unvec(const CVec& v, Eigen::Index rows, Eigen::Index cols);

// Orthonormal basis (columns) of {x : A x = 0}. Singular values at or below
// tol * max(1, sigma_max) are treated as zero. Columns get a deterministic
// phase (largest-modulus entry real positive) so runs are reproducible.
Mat nullspace(const Mat& a, double tol = 1e-9);

// A linear subspace of rows x cols matrices, basis orthonormal under the
// Frobenius inner product <A,B> = tr(A^H B).
struct MatSubspace {
  Eigen::Index rows = 0;
  Eigen::Index cols = 0;
  std::vector<Mat> basis;

  Eigen::Index dim() const { return static_cast<Eigen::Index>(basis.size()); }
  Mat project(const Mat& x) const;
  double distance(const Mat& x) const;  // ||x - project(x)||_F
  bool contains(const Mat& x, double tol) const;
};

// Orthonormalize a spanning set (rank decided at tol * max(1, sigma_max)).
MatSubspace subspace_from_span(const std::vector<Mat>& span, double tol = 1e-9);

// Largest principal angle, symmetrized so that 0 iff the subspaces are equal
// (subspaces of different dimension are at angle >= the directed gap both
// ways; in particular never 0). Result in [0, pi/2].
double principal_angle(const MatSubspace& a, const MatSubspace& b);
// Same, for column spaces of two matrices with orthonormal columns.
double principal_angle_cols(const Mat& qa, const Mat& qb);

// Matrix exponential by scaling-and-squaring with a fixed order-18 Taylor
// evaluation once ||A / 2^s||_1 <= 0.5.
Mat expm(const Mat& a);

// Smallest subspace containing span(s) and the identity that is closed under
// matrix multiplication. Matrices must be square. Throws CapExceeded if the
// dimension fails to stabilize within max_rounds (it cannot, mathematically,
// take more than rows^2 rounds; the cap guards numerical runaway).
MatSubspace mult_closure(const MatSubspace& s, double tol = 1e-9,
                         int max_rounds = 256);

// Deterministic standard-normal generator (Box-Muller over a seeded xorshift)
// so that seeded results do not depend on the standard library in use.
class NormalSampler {
 public:
  explicit NormalSampler(std::uint64_t seed);
  double operator()();
  cplx complex_normal();  // independent real and imaginary parts

 private:
  std::uint64_t state_;
  bool have_spare_ = false;
  double spare_ = 0.0;
  double next_uniform();  // in (0, 1)
};

}  // namespace linalg
}  // namespace eqmap
