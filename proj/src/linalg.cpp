#include "eqmap/linalg.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>

namespace eqmap::linalg {

Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

CVec vec(const Mat& m) {
  return Eigen::Map<const CVec>(m.data(), m.size());
}

Mat unvec(const CVec& v, Eigen::Index rows, Eigen::Index cols) {
  if (v.size() != rows * cols)
    throw ShapeMismatch("unvec: vector of size " + std::to_string(v.size()) +
                        " cannot fill " + std::to_string(rows) + "x" +
                        std::to_string(cols));
  return Eigen::Map<const Mat>(v.data(), rows, cols);
}

namespace {

// Deterministic column phase: rotate so the largest-modulus entry is real
// positive. Keeps SVD-derived bases reproducible across runs.
void fix_phase(Eigen::Ref<Mat> cols) {
  for (Eigen::Index j = 0; j < cols.cols(); ++j) {
    Eigen::Index imax = 0;
    cols.col(j).cwiseAbs().maxCoeff(&imax);
    const cplx p = cols(imax, j);
    if (std::abs(p) > 0) cols.col(j) *= std::conj(p) / std::abs(p);
  }
}

}  // namespace

Mat nullspace(const Mat& a, double tol) {
  if (a.rows() == 0) {  // no constraints: kernel is everything
    Mat id = Mat::Identity(a.cols(), a.cols());
    return id;
  }
  Eigen::JacobiSVD<Mat> svd(a, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  const double cut = tol * std::max(1.0, s.size() ? s(0) : 0.0);
  Eigen::Index rank = 0;
  while (rank < s.size() && s(rank) > cut) ++rank;
  Mat basis = svd.matrixV().rightCols(a.cols() - rank);
  fix_phase(basis);
  return basis;
}

Mat MatSubspace::project(const Mat& x) const {
  if (x.rows() != rows || x.cols() != cols)
    throw ShapeMismatch("MatSubspace::project: element has wrong shape");
  Mat acc = Mat::Zero(rows, cols);
  for (const Mat& b : basis) acc += (b.conjugate().cwiseProduct(x)).sum() * b;
  return acc;
}

double MatSubspace::distance(const Mat& x) const {
  return (x - project(x)).norm();
}

bool MatSubspace::contains(const Mat& x, double tol) const {
  return distance(x) <= tol * std::max(1.0, x.norm());
}

MatSubspace subspace_from_span(const std::vector<Mat>& span, double tol) {
  MatSubspace out;
  if (span.empty()) return out;
  out.rows = span[0].rows();
  out.cols = span[0].cols();
  Mat stacked(out.rows * out.cols, static_cast<Eigen::Index>(span.size()));
  for (std::size_t k = 0; k < span.size(); ++k) {
    if (span[k].rows() != out.rows || span[k].cols() != out.cols)
      throw ShapeMismatch("subspace_from_span: mixed shapes");
    stacked.col(static_cast<Eigen::Index>(k)) = vec(span[k]);
  }
  Eigen::JacobiSVD<Mat> svd(stacked, Eigen::ComputeFullU);
  const auto& s = svd.singularValues();
  const double cut = tol * std::max(1.0, s.size() ? s(0) : 0.0);
  Eigen::Index rank = 0;
  while (rank < s.size() && s(rank) > cut) ++rank;
  Mat u = svd.matrixU().leftCols(rank);
  fix_phase(u);
  out.basis.reserve(rank);
  for (Eigen::Index k = 0; k < rank; ++k)
    out.basis.push_back(unvec(u.col(k), out.rows, out.cols));
  return out;
}

namespace {

Mat basis_matrix(const MatSubspace& s) {
  Mat b(s.rows * s.cols, s.dim());
  for (Eigen::Index k = 0; k < s.dim(); ++k) b.col(k) = vec(s.basis[k]);
  return b;
}

// sin of the directed gap from col(qa) into col(qb).
double directed_gap(const Mat& qa, const Mat& qb) {
  if (qa.cols() == 0) return 0.0;
  Mat resid = qa - qb * (qb.adjoint() * qa);
  Eigen::JacobiSVD<Mat> svd(resid);
  return std::min(1.0, svd.singularValues()(0));
}

}  // namespace

double principal_angle_cols(const Mat& qa, const Mat& qb) {
  if (qa.rows() != qb.rows())
    throw ShapeMismatch("principal_angle: ambient dimensions differ");
  const double s = std::max(directed_gap(qa, qb), directed_gap(qb, qa));
  return std::asin(std::min(1.0, std::max(0.0, s)));
}

double principal_angle(const MatSubspace& a, const MatSubspace& b) {
  if (a.rows != b.rows || a.cols != b.cols)
    throw ShapeMismatch("principal_angle: subspaces of different shapes");
  return principal_angle_cols(basis_matrix(a), basis_matrix(b));
}

Mat expm(const Mat& a) {
  if (a.rows() != a.cols()) throw ShapeMismatch("expm: matrix not square");
  const double norm1 = a.cwiseAbs().colwise().sum().maxCoeff();
  int s = 0;
  double scaled = norm1;
  while (scaled > 0.5) {
    scaled *= 0.5;
    ++s;
  }
  Mat b = a / std::pow(2.0, s);
  // Order-18 Taylor sum, Horner style.
  const int order = 18;
  Mat t = Mat::Identity(a.rows(), a.cols());
  for (int k = order; k >= 1; --k)
    t = Mat::Identity(a.rows(), a.cols()) + (b * t) / static_cast<double>(k);
  for (int k = 0; k < s; ++k) t = t * t;
  return t;
}

MatSubspace mult_closure(const MatSubspace& s, double tol, int max_rounds) {
  if (s.rows != s.cols)
    throw ShapeMismatch("mult_closure: matrices must be square");
  std::vector<Mat> gen = s.basis;
  gen.push_back(Mat::Identity(s.rows, s.cols));
  MatSubspace cur = subspace_from_span(gen, tol);
  for (int round = 0; round < max_rounds; ++round) {
    std::vector<Mat> next = cur.basis;
    for (const Mat& x : cur.basis)
      for (const Mat& y : cur.basis) next.push_back(x * y);
    MatSubspace grown = subspace_from_span(next, tol);
    if (grown.dim() == cur.dim()) return grown;
    cur = std::move(grown);
  }
  throw CapExceeded("mult_closure: dimension did not stabilize after " +
                    std::to_string(max_rounds) + " rounds");
}

NormalSampler::NormalSampler(std::uint64_t seed) : state_(seed ? seed : 1) {}

double NormalSampler::next_uniform() {
  // xorshift64*; scale into (0,1).
  state_ ^= state_ >> 12;
  state_ ^= state_ << 25;
  state_ ^= state_ >> 27;
  const std::uint64_t z = state_ * 0x2545F4914F6CDD1DULL;
  return (static_cast<double>(z >> 11) + 0.5) / 9007199254740992.0;
}

double NormalSampler::operator()() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  const double u = next_uniform(), v = next_uniform();
  const double r = std::sqrt(-2.0 * std::log(u));
  spare_ = r * std::sin(2.0 * M_PI * v);
  have_spare_ = true;
  return r * std::cos(2.0 * M_PI * v);
}

cplx NormalSampler::complex_normal() {
  const double re = (*this)();
  const double im = (*this)();
  return {re, im};
}

}  // namespace eqmap::linalg
