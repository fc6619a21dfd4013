#include "eqmap/nonuniq.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "eqmap/errors.hpp"
#include "eqmap/linalg.hpp"

namespace eqmap::nonuniq {

using linalg::kron;
using linalg::nullspace;
using linalg::unvec;

TupleSpace network_symmetry_tuple_space(const LinearNetwork& net, double tol) {
  const std::size_t m = net.layers.size();
  if (m == 0) throw ShapeMismatch("network has no layers");
  TupleSpace out;
  out.dims.push_back(net.layers[0].cols());
  for (const Mat& l : net.layers) {
    if (l.cols() != out.dims.back())
      throw ShapeMismatch("layer shapes do not chain");
    out.dims.push_back(l.rows());
  }

  // Column offsets of vec(t_k) in the stacked unknown.
  std::vector<Eigen::Index> off(out.dims.size() + 1, 0);
  for (std::size_t k = 0; k < out.dims.size(); ++k)
    off[k + 1] = off[k] + out.dims[k] * out.dims[k];
  const Eigen::Index total = off.back();

  Eigen::Index nrows = 0;
  for (const Mat& l : net.layers) nrows += l.rows() * l.cols();
  Mat cons = Mat::Zero(nrows, total);
  Eigen::Index row = 0;
  for (std::size_t k = 0; k < m; ++k) {
    const Mat& l = net.layers[k];
    const Eigen::Index din = l.cols(), dout = l.rows();
    cons.block(row, off[k], dout * din, din * din) =
        -kron(Mat::Identity(din, din), l);
    cons.block(row, off[k + 1], dout * din, dout * dout) =
        kron(l.transpose(), Mat::Identity(dout, dout));
    row += dout * din;
  }

  Mat ns = nullspace(cons, tol);
  out.basis.reserve(ns.cols());
  for (Eigen::Index j = 0; j < ns.cols(); ++j) {
    std::vector<Mat> tuple;
    for (std::size_t k = 0; k < out.dims.size(); ++k)
      tuple.push_back(
          unvec(ns.col(j).segment(off[k], out.dims[k] * out.dims[k]),
                out.dims[k], out.dims[k]));
    if (end_to_end_residual(net, tuple) > 1e-9)
      throw InternalInconsistency(
          "tuple satisfies layer constraints but not the composed network");
    out.basis.push_back(std::move(tuple));
  }
  return out;
}

double end_to_end_residual(const LinearNetwork& net,
                           const std::vector<Mat>& tuple) {
  if (tuple.size() != net.layers.size() + 1)
    throw ShapeMismatch("tuple length must be layer count + 1");
  Mat composed = net.layers[0];
  for (std::size_t k = 1; k < net.layers.size(); ++k)
    composed = net.layers[k] * composed;
  return (tuple.back() * composed - composed * tuple.front()).norm();
}

Sigma sigma_from_name(const std::string& name) {
  if (name == "identity") return Sigma::identity;
  if (name == "tanh") return Sigma::tanh;
  if (name == "relu") return Sigma::relu;
  if (name == "sigmoid") return Sigma::sigmoid;
  throw ParseError("unknown gate nonlinearity '" + name + "'");
}

const char* sigma_name(Sigma s) {
  switch (s) {
    case Sigma::identity: return "identity";
    case Sigma::tanh: return "tanh";
    case Sigma::relu: return "relu";
    case Sigma::sigmoid: return "sigmoid";
  }
  return "?";
}

cplx sigma_eval(Sigma s, cplx z) {
  switch (s) {
    case Sigma::identity: return z;
    case Sigma::tanh: return std::tanh(z.real());
    case Sigma::relu: return std::max(z.real(), 0.0);
    case Sigma::sigmoid: return 1.0 / (1.0 + std::exp(-z.real()));
  }
  return z;
}

namespace {

void check_layer_shapes(const GatedLayer& layer) {
  if (layer.gates.size() != layer.block_sizes.size())
    throw ShapeMismatch("gate count must equal block count");
  Eigen::Index covered = 0;
  for (Eigen::Index b : layer.block_sizes) {
    if (b <= 0) throw ShapeMismatch("empty gate block");
    covered += b;
  }
  if (covered != layer.L.rows())
    throw ShapeMismatch("blocks do not partition the output dimension");
  for (const Mat& s : layer.gates)
    if (s.rows() != 1 || s.cols() != layer.L.cols())
      throw ShapeMismatch("gates must be 1 x input-dim row vectors");
}

// Diagonal gate scaling at the point x: sigma(s_r x) repeated over block r.
Mat gate_scaling(const GatedLayer& layer, const CVec& x) {
  Mat d = Mat::Zero(layer.L.rows(), layer.L.rows());
  Eigen::Index at = 0;
  for (std::size_t r = 0; r < layer.gates.size(); ++r) {
    const cplx v = sigma_eval(layer.sigma, (layer.gates[r] * x)(0, 0));
    for (Eigen::Index i = 0; i < layer.block_sizes[r]; ++i)
      d(at + i, at + i) = v;
    at += layer.block_sizes[r];
  }
  return d;
}

}  // namespace

CVec gated_apply(const GatedLayer& layer, const CVec& x) {
  check_layer_shapes(layer);
  if (x.size() != layer.L.cols())
    throw ShapeMismatch("gated_apply: point dimension mismatch");
  return gate_scaling(layer, x) * (layer.L * x);
}

double gated_layer_equivariance_check(const GatedLayer& layer, const Mat& t_in,
                                      const Mat& t_out,
                                      const std::vector<CVec>& samples,
                                      double tol) {
  check_layer_shapes(layer);
  const Eigen::Index din = layer.L.cols(), dout = layer.L.rows();
  if (t_in.rows() != din || t_in.cols() != din)
    throw ShapeMismatch("t_in must be square on the input space");
  if (t_out.rows() != dout || t_out.cols() != dout)
    throw ShapeMismatch("t_out must be square on the output space");

  if ((t_out * layer.L - layer.L * t_in).norm() >
      tol * std::max(1.0, layer.L.norm()))
    throw HypothesisViolated("t_out L = L t_in fails");
  for (std::size_t r = 0; r < layer.gates.size(); ++r)
    if ((layer.gates[r] * t_in - layer.gates[r]).norm() >
        tol * std::max(1.0, layer.gates[r].norm()))
      throw HypothesisViolated("gate " + std::to_string(r) +
                               " is not invariant: s t_in != s");
  for (const CVec& x : samples) {
    const Mat d = gate_scaling(layer, x);
    if ((t_out * d - d * t_out).norm() > tol * std::max(1.0, t_out.norm()))
      throw HypothesisViolated(
          "t_out does not commute with the gate scaling (block-scalar "
          "action fails at a sample)");
  }

  double worst = 0.0;
  for (const CVec& x : samples) {
    const CVec lhs = gated_apply(layer, CVec(t_in * x));
    const CVec rhs = t_out * gated_apply(layer, x);
    worst = std::max(worst, (lhs - rhs).norm());
  }
  return worst;
}

std::vector<cplx> convolve(const algebra::SemigroupTable& table,
                           const std::vector<cplx>& a,
                           const std::vector<cplx>& b) {
  const std::size_t n = static_cast<std::size_t>(table.n);
  if (a.size() != n || b.size() != n)
    throw ShapeMismatch("coefficient vectors must cover the table");
  std::vector<cplx> out(n, cplx(0, 0));
  for (std::size_t t = 0; t < n; ++t) {
    if (a[t] == cplx(0, 0)) continue;
    for (std::size_t u = 0; u < n; ++u)
      out[static_cast<std::size_t>(
          table.at(static_cast<int>(t), static_cast<int>(u)))] += a[t] * b[u];
  }
  return out;
}

K1Product k1_closure_check(const algebra::SemigroupTable& table,
                           const std::vector<cplx>& a,
                           const std::vector<cplx>& b, double tol) {
  auto total = [](const std::vector<cplx>& v) {
    return std::accumulate(v.begin(), v.end(), cplx(0, 0));
  };
  if (std::abs(total(a) - 1.0) > tol || std::abs(total(b) - 1.0) > tol)
    throw HypothesisViolated("k1_closure_check: inputs must sum to 1");
  K1Product out;
  out.product = convolve(table, a, b);
  out.sums_to_one = std::abs(total(out.product) - 1.0) <= tol;
  return out;
}

double algebra_witness_residual(const rep::CoupledRep& c,
                                const std::vector<cplx>& a,
                                const std::function<CVec(const CVec&)>& f,
                                const std::vector<CVec>& points) {
  const Mat au = rep::rho_tilde(c.U, a);
  const Mat av = rep::rho_tilde(c.V, a);
  double worst = 0.0;
  for (const CVec& x : points) {
    if (x.size() != au.cols())
      throw ShapeMismatch("witness point dimension mismatch");
    worst = std::max(worst, (f(CVec(au * x)) - av * f(x)).norm());
  }
  return worst;
}

UnlearnabilityReport unlearnability_audit(
    const FiniteLearnabilityInstance& inst) {
  const int nf = static_cast<int>(inst.f_names.size());
  const int ng = static_cast<int>(inst.gamma_names.size());
  if (static_cast<int>(inst.R.size()) != nf)
    throw ShapeMismatch("R must have one row per object");
  for (const auto& row : inst.R)
    if (static_cast<int>(row.size()) != ng)
      throw ShapeMismatch("R must have one column per symmetry");
  if (static_cast<int>(inst.H.size()) != ng)
    throw ShapeMismatch("H must map every symmetry");
  for (int h : inst.H)
    if (h < 0 || h >= ng) throw ShapeMismatch("H value out of range");
  for (auto [f, g] : inst.A) {
    if (f < 0 || f >= nf || g < 0 || g >= ng)
      throw ShapeMismatch("ansatz index out of range");
    if (!inst.R[f][g])
      throw AnsatzNotSubsetOfR("(" + inst.f_names[f] + ", " +
                               inst.gamma_names[g] + ") is not symmetric");
  }

  const std::set<std::pair<int, int>> ansatz(inst.A.begin(), inst.A.end());
  std::set<int> learnable_f;  // F_A: objects occurring in the ansatz
  for (auto [f, g] : inst.A) learnable_f.insert(f);

  UnlearnabilityReport rep;
  rep.subset_hypothesis = true;
  rep.ansatz_closed_under_h = true;
  for (auto [f, g] : inst.A) {
    if (!inst.R[f][inst.H[g]]) rep.subset_hypothesis = false;
    if (!ansatz.count({f, inst.H[g]})) rep.ansatz_closed_under_h = false;
  }
  rep.symmetry_reflects = true;
  for (int f = 0; f < nf; ++f)
    for (int g = 0; g < ng; ++g)
      if (inst.R[f][inst.H[g]] && !inst.R[f][g]) rep.symmetry_reflects = false;

  // Transporting a symmetric pair out of R bars it from the ansatz closure
  // (= the ansatz itself at this scale); only meaningful when the subset
  // hypothesis verified.
  if (rep.subset_hypothesis)
    for (int f = 0; f < nf; ++f)
      for (int g = 0; g < ng; ++g)
        if (inst.R[f][g] && !inst.R[f][inst.H[g]])
          rep.unlearnable.push_back({f, g});

  for (int g = 0; g < ng; ++g) {
    bool cond_i = true;   // learnable + symmetric under g => pair learnable
    bool cond_ii = false; // some learnable f separates g from H(g)
    for (int f : learnable_f) {
      if (inst.R[f][g] && !ansatz.count({f, g})) cond_i = false;
      if (inst.R[f][g] != inst.R[f][inst.H[g]]) cond_ii = true;
    }
    if (cond_i && cond_ii) rep.tradeoff.push_back(g);
  }
  return rep;
}

}  // namespace eqmap::nonuniq
