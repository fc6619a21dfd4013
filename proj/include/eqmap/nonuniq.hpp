#pragma once

// Non-uniqueness audits for equivariant model constructions: symmetry tuples
// of linear networks, gated layers with invariant gates, algebra elements
// acting through a representation, and the finite learnability-tradeoff scan.

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "eqmap/algebra.hpp"
#include "eqmap/rep.hpp"

namespace eqmap::nonuniq {

// Pure linear network: layers[k] maps C^{d_k} -> C^{d_{k+1}}.
struct LinearNetwork {
  std::vector<Mat> layers;
};

// Tuples (t_0, ..., t_N) with t_{k+1} L_k = L_k t_k, stored per depth.
// Basis tuples are orthonormal under the stacked vec embedding.
struct TupleSpace {
  std::vector<Eigen::Index> dims;
  std::vector<std::vector<Mat>> basis;
  Eigen::Index dim() const { return static_cast<Eigen::Index>(basis.size()); }
};

// Nullspace of the stacked per-layer commutation constraints. Every basis
// tuple is re-checked end to end (the composed network commutes with the
// endpoints); a violation is an internal error, not a caller mistake.
TupleSpace network_symmetry_tuple_space(const LinearNetwork& net,
                                        double tol = 1e-9);

// || t_N (L_{N-1} ... L_0) - (L_{N-1} ... L_0) t_0 ||.
double end_to_end_residual(const LinearNetwork& net,
                           const std::vector<Mat>& tuple);

// Closed registry of gate nonlinearities. The nonlinear ones act on the real
// part of the gate value; identity passes the complex scalar through.
enum class Sigma { identity, tanh, relu, sigmoid };
Sigma sigma_from_name(const std::string& name);  // ParseError on unknown name
const char* sigma_name(Sigma s);
cplx sigma_eval(Sigma s, cplx z);

// x |-> (+)_r sigma(s_r x) (Lx)^{(r)}: one scalar gate per output block.
struct GatedLayer {
  Mat L;
  std::vector<Mat> gates;                 // row vectors, 1 x d_in
  std::vector<Eigen::Index> block_sizes;  // partition of d_out
  Sigma sigma = Sigma::identity;
};

CVec gated_apply(const GatedLayer& layer, const CVec& x);

// Checks the three hypotheses behind gate equivariance -- t_out L = L t_in,
// gate invariance s_r t_in = s_r, and t_out commuting with the per-sample
// gate scaling (the block-scalar action) -- then returns the max sample
// residual || layer(t_in x) - t_out layer(x) ||.
// Throws HypothesisViolated naming the failing constraint.
double gated_layer_equivariance_check(const GatedLayer& layer, const Mat& t_in,
                                      const Mat& t_out,
                                      const std::vector<CVec>& samples,
                                      double tol = 1e-9);

// Semigroup-algebra convolution of dense coefficient vectors:
// (ab)(s) = sum_{tu = s} a(t) b(u).
std::vector<cplx> convolve(const algebra::SemigroupTable& table,
                           const std::vector<cplx>& a,
                           const std::vector<cplx>& b);

struct K1Product {
  std::vector<cplx> product;
  bool sums_to_one = false;  // coefficient sum of the product, within tol
};

// Requires both inputs to sum to 1 (HypothesisViolated otherwise); the
// product sum is then reported, it is 1 identically for any table.
K1Product k1_closure_check(const algebra::SemigroupTable& table,
                           const std::vector<cplx>& a,
                           const std::vector<cplx>& b, double tol = 1e-9);

// max over points of || f(rho~_U(a) x) - rho~_V(a) f(x) || where rho~ is the
// algebra action sum_s a(s) rho(s). Nonzero values witness that equivariance
// under the semigroup does not extend to its algebra for nonlinear f.
double algebra_witness_residual(const rep::CoupledRep& c,
                                const std::vector<cplx>& a,
                                const std::function<CVec(const CVec&)>& f,
                                const std::vector<CVec>& points);

// Finite model of a learnability relation: F x Gamma with a boolean
// "is symmetric" matrix R, an ansatz A of usable symmetric pairs, and a
// symmetry transport H on Gamma. At this scale closure(A) = A.
struct FiniteLearnabilityInstance {
  std::vector<std::string> f_names;
  std::vector<std::string> gamma_names;
  std::vector<std::vector<bool>> R;       // |F| x |Gamma|
  std::vector<std::pair<int, int>> A;     // (f index, gamma index), inside R
  std::vector<int> H;                     // gamma index -> gamma index
};

struct UnlearnabilityReport {
  // Every ansatz pair stays symmetric after transport: (f, H(g)) in R.
  bool subset_hypothesis = false;
  // Stronger: ansatz pairs transport into the ansatz itself.
  bool ansatz_closed_under_h = false;
  // (f, H(g)) in R implies (f, g) in R, for every pair.
  bool symmetry_reflects = false;
  // Symmetric pairs whose transport leaves R: never enter the ansatz closure.
  std::vector<std::pair<int, int>> unlearnable;
  // Gammas where "symmetric learnable objects form learnable pairs" and
  // "some learnable object separates gamma from H(gamma)" both hold; must be
  // empty whenever the two stronger hypotheses above verify.
  std::vector<int> tradeoff;
};

UnlearnabilityReport unlearnability_audit(
    const FiniteLearnabilityInstance& inst);  // AnsatzNotSubsetOfR

}  // namespace eqmap::nonuniq
