// Acceptance gates. Each invocation runs one numbered end-to-end criterion
// (argv[1] in 1..9), prints a single PASS/FAIL line, and exits 0/1. Failing
// sub-checks are listed in the line together with the measured value, so a
// red gate states what was observed, not just that something broke.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <eqmap/algebra.hpp>
#include <eqmap/conv.hpp>
#include <eqmap/convergence.hpp>
#include <eqmap/errors.hpp>
#include <eqmap/linalg.hpp>
#include <eqmap/nonuniq.hpp>
#include <eqmap/rep.hpp>

#include "test_support.hpp"

namespace {

using eqmap::CVec;
using eqmap::cplx;
using eqmap::Mat;
namespace alg = eqmap::algebra;
namespace conv = eqmap::conv;
namespace convergence = eqmap::convergence;
namespace lin = eqmap::linalg;
namespace nonuniq = eqmap::nonuniq;
namespace rep = eqmap::rep;

struct Gate {
  std::vector<std::string> failed;
  void expect(bool ok, const std::string& what) {
    if (!ok) failed.push_back(what);
  }
};

std::string fmt(const char* f, ...) {
  char buf[256];
  va_list args;
  va_start(args, f);
  std::vsnprintf(buf, sizeof(buf), f, args);
  va_end(args);
  return buf;
}

double max_abs(const Mat& m) { return m.cwiseAbs().maxCoeff(); }

using Clock = std::chrono::steady_clock;
double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

alg::SemigroupTable z2_table() {
  return alg::close_perm_generators({{1, 0}}).table;
}
alg::SemigroupTable z4_table() {
  return alg::close_perm_generators({{1, 2, 3, 0}}).table;
}
alg::SemigroupTable s3_table() {
  return alg::close_perm_generators({{1, 0, 2}, {1, 2, 0}}).table;
}
alg::SemigroupTable max3_table() {
  alg::SemigroupTable t;
  t.n = 3;
  t.mul = {{0, 1, 2}, {1, 1, 2}, {2, 2, 2}};
  return t;
}

// 1. The three-point two-representation pair: isotypic shapes, the golden
//    intertwiner, block reproduction under the pinned basis change, and the
//    entrywise -2/3 shift, all inside one second.
void c1(Gate& g) {
  const auto t0 = Clock::now();

  auto pc = alg::close_perm_generators({{1, 0, 2}, {1, 2, 0}});
  rep::Rep nat = rep::perm_rep(pc);
  auto dec = rep::decompose(nat);
  std::multiset<std::pair<int, int>> shapes;
  for (const auto& b : dec.blocks) shapes.insert({b.w, b.m});
  const std::multiset<std::pair<int, int>> want = {{1, 1}, {2, 1}};
  g.expect(shapes == want, "isotypic shapes are (1,1) and (2,1)");

  rep::CoupledRep c = support::s3pair::coupled();
  lin::MatSubspace iw = rep::intertwiner_basis(c.U, c.V);
  g.expect(iw.dim() == 1, fmt("intertwiner dim 1 (got %d)",
                              static_cast<int>(iw.dim())));
  if (iw.dim() == 1) {
    const Mat gold = support::s3pair::intertwiner_golden();
    const Mat b = iw.basis[0];
    const Mat scaled = b * (gold(0, 0) / b(0, 0));
    g.expect(max_abs(scaled - gold) < 1e-9,
             fmt("normalized intertwiner matches the golden projector "
                 "(max dev %.3g)",
                 max_abs(scaled - gold)));
  }

  const Mat P = support::s3pair::P();
  const Mat Pinv = support::s3pair::Pinv();
  const auto bu = support::s3pair::blocks_u();
  const auto bv = support::s3pair::blocks_v();
  bool blocks_ok = c.U.size() == 6;
  std::array<bool, 6> hit{};
  for (std::size_t k = 0; blocks_ok && k < c.U.size(); ++k) {
    const Mat cu = Pinv * c.U[k] * P;
    const Mat cv = Pinv * c.V[k] * P;
    int match = -1;
    for (int j = 0; j < 6; ++j)
      if (max_abs(cu - bu[j]) < 1e-9 && max_abs(cv - bv[j]) < 1e-9) match = j;
    if (match < 0 || hit[match])
      blocks_ok = false;
    else
      hit[match] = true;
  }
  g.expect(blocks_ok,
           "conjugated images reproduce the six block matrices, one each");

  // Entrywise shift V = U - 2/3, required here for every element. The even
  // elements (identity included) have V = U, so the measured worst deviation
  // is reported rather than hidden.
  double worst = 0.0;
  const Mat shift = Mat::Constant(3, 3, 2.0 / 3.0);
  for (std::size_t k = 0; k < c.U.size(); ++k)
    worst = std::max(worst, max_abs(c.V[k] - (c.U[k] - shift)));
  g.expect(worst < 1e-12,
           fmt("entrywise -2/3 shift for every element (worst dev %.3g)",
               worst));

  g.expect(seconds_since(t0) < 1.0, "runtime < 1 s");
}

// 2. Dual-route pair-space agreement on random coupled representations.
void c2(Gate& g) {
  const auto t0 = Clock::now();

  rep::CoupledRep c = support::s3pair::coupled();
  g.expect(rep::pair_symmetry_space(c).dim() == 10,
           "pair-space dim 10 on the three-point pair");

  using Group = support::randrep::Group;
  const Group groups[] = {Group::C2, Group::C3, Group::C4, Group::S3};
  int checked = 0;
  double worst = 0.0;
  for (int t = 0; t < 24; ++t) {
    rep::CoupledRep cr =
        support::randrep::random_coupled(groups[t % 4], 4242 + 101 * t);
    lin::MatSubspace direct = rep::pair_symmetry_space(cr);
    rep::PredictedPairSpace pred = rep::predicted_pair_space(cr);
    if (direct.dim() != pred.space.dim()) {
      g.expect(false, fmt("dims agree on draw %d", t));
      continue;
    }
    worst = std::max(worst, lin::principal_angle(direct, pred.space));
    ++checked;
  }
  g.expect(checked >= 20, fmt("at least 20 draws checked (%d)", checked));
  g.expect(worst < 1e-8,
           fmt("principal angle < 1e-8 across draws (worst %.3g)", worst));
  g.expect(seconds_since(t0) < 30.0, "runtime < 30 s");
}

// 3. Nonlinear witness against algebra elements: the quadratic invariant at
//    (1,0) under id + sqrt(2) * swap, and the vanishing delta-at-identity case.
void c3(Gate& g) {
  const Mat swap = alg::perm_matrix({1, 0});
  const Mat one = Mat::Identity(1, 1);
  rep::CoupledRep c = rep::coupled_from_generators({swap}, {one});
  g.expect(c.U.size() == 2, "closure has two elements");

  std::vector<cplx> a(c.U.size()), delta_id(c.U.size());
  for (std::size_t k = 0; k < c.U.size(); ++k) {
    const bool is_id = max_abs(c.U[k] - Mat::Identity(2, 2)) < 1e-12;
    a[k] = is_id ? 1.0 : std::sqrt(2.0);
    delta_id[k] = is_id ? 1.0 : 0.0;
  }

  auto f = [](const CVec& x) {
    CVec y(1);
    y(0) = x(0) * x(0) + x(1) * x(1);
    return y;
  };
  CVec p(2);
  p << 1.0, 0.0;

  const double r = nonuniq::algebra_witness_residual(c, a, f, {p});
  g.expect(std::abs(r - 0.58578643762690508) < 1e-9,
           fmt("witness residual |3-(1+sqrt 2)| (got %.17g)", r));
  const double r0 = nonuniq::algebra_witness_residual(c, delta_id, f, {p});
  g.expect(r0 <= 1e-12, fmt("delta-at-identity residual 0 (got %.3g)", r0));
}

// 4. Kernel completeness: every equivariant operator is a convolution, on
//    both regular spaces and a two-orbit input.
void c4(Gate& g) {
  const auto t0 = Clock::now();

  conv::GSpace z4 = conv::regular_gspace(z4_table());
  conv::CompletenessReport a = conv::conv_completeness_check(z4, z4);
  g.expect(a.complete && a.residual < 1e-9,
           fmt("four-cycle regular space complete (residual %.3g)",
               a.residual));
  g.expect(static_cast<int>(a.basis_dim) == 4,
           fmt("four-cycle equivariant dim 4 (got %d)",
               static_cast<int>(a.basis_dim)));

  conv::GSpace s3 = conv::regular_gspace(s3_table());
  conv::CompletenessReport b = conv::conv_completeness_check(s3, s3);
  g.expect(b.complete && b.residual < 1e-9,
           fmt("six-element regular space complete (residual %.3g)",
               b.residual));
  g.expect(static_cast<int>(b.basis_dim) == 6,
           fmt("six-element equivariant dim 6 (got %d)",
               static_cast<int>(b.basis_dim)));

  conv::GSpace two = conv::free_orbit_sum(z2_table(), 2);
  conv::GSpace reg2 = conv::regular_gspace(z2_table());
  conv::CompletenessReport tw = conv::conv_completeness_check(two, reg2);
  g.expect(tw.complete && tw.residual < 1e-9,
           fmt("two-orbit input complete (residual %.3g)", tw.residual));

  g.expect(seconds_since(t0) < 5.0, "runtime < 5 s");
}

// 5. Exhaustive symmetry-pair enumeration equals the translation image,
//    as exact permutation sets.
void c5(Gate& g) {
  const auto t0 = Clock::now();

  auto run = [&](const alg::SemigroupTable& t, const char* name,
                 std::size_t order) {
    conv::GSpace x = conv::regular_gspace(t);
    conv::EnumerationReport e = conv::symmetry_enumeration(x, x);
    const std::set<std::pair<alg::Perm, alg::Perm>> got(e.pairs.begin(),
                                                        e.pairs.end());
    const std::set<std::pair<alg::Perm, alg::Perm>> img(e.g_image.begin(),
                                                        e.g_image.end());
    g.expect(got == img,
             fmt("%s survivors equal the translation image exactly", name));
    g.expect(e.matches_g_image, fmt("%s flagged as matching", name));
    g.expect(img.size() == order,
             fmt("%s image has %zu elements", name, order));
  };
  run(z4_table(), "four-cycle", 4);
  run(s3_table(), "six-element", 6);

  g.expect(seconds_since(t0) < 60.0, "runtime < 60 s");
}

// 6. Form split on the commutative max-monoid: the semigroup-like signal
//    operator must commute with every right multiplication while the
//    group-like one must break at least one. Both measured residual sets are
//    reported; on a commutative table the two operators coincide.
void c6(Gate& g) {
  const alg::SemigroupTable t = max3_table();
  lin::NormalSampler rng(0xDECAF);
  std::vector<cplx> ell(t.n);
  for (auto& v : ell) v = rng();

  auto op_from = [&](CVec (*fn)(const alg::SemigroupTable&,
                                const std::vector<cplx>&, const CVec&)) {
    Mat op = Mat::Zero(t.n, t.n);
    for (int j = 0; j < t.n; ++j) {
      CVec d = CVec::Zero(t.n);
      d(j) = 1.0;
      op.col(j) = fn(t, ell, d);
    }
    return op;
  };
  const Mat sl = op_from(conv::semigroup_like_conv);
  const Mat gl = op_from(conv::group_like_conv);

  std::vector<std::pair<Mat, Mat>> cands;
  for (const Mat& m : conv::right_mult_actions(t)) cands.push_back({m, m});
  const auto sl_set = conv::operator_equivariance_set(sl, cands, 1e-12);
  const auto gl_set = conv::operator_equivariance_set(gl, cands, 1e-12);

  const double sl_worst =
      *std::max_element(sl_set.residuals.begin(), sl_set.residuals.end());
  const double gl_worst =
      *std::max_element(gl_set.residuals.begin(), gl_set.residuals.end());
  g.expect(sl_worst < 1e-12,
           fmt("semigroup-like commutes with all right multiplications "
               "(worst %.3g)",
               sl_worst));
  g.expect(gl_worst > 1e-3,
           fmt("group-like fails at least one right multiplication "
               "(max residual %.3g)",
               gl_worst));
}

// 7. Gated layers with invariant gates stay equivariant under coefficient-sum-
//    one algebra elements, not only under the group itself.
void c7(Gate& g) {
  auto run = [&](const char* name, const std::vector<alg::Perm>& gens,
                 const Mat& L) {
    rep::Rep r = rep::perm_rep(alg::close_perm_generators(gens));
    const int n = static_cast<int>(L.rows());
    nonuniq::GatedLayer layer;
    layer.L = L;
    layer.gates = {Mat::Ones(1, n)};
    layer.block_sizes = {n};
    layer.sigma = nonuniq::Sigma::tanh;

    lin::NormalSampler rng(0xC0FFEE + n);
    std::vector<CVec> samples;
    for (int i = 0; i < 100; ++i) {
      CVec x(n);
      for (int k = 0; k < n; ++k) x(k) = rng();
      samples.push_back(x);
    }

    double worst = 0.0;
    for (int t = 0; t < 20; ++t) {
      const auto a = support::random_k1(static_cast<int>(r.size()), rng);
      const Mat A = rep::rho_tilde(r, a);
      worst = std::max(
          worst, nonuniq::gated_layer_equivariance_check(layer, A, A, samples));
    }
    g.expect(worst < 1e-7,
             fmt("%s gated layer equivariant under 20 algebra elements "
                 "(worst %.3g)",
                 name, worst));
  };

  Mat l2(2, 2);
  l2 << 2, 1, 1, 2;
  run("two-point", {{1, 0}}, l2);
  const Mat l3 =
      Mat::Identity(3, 3) - Mat::Constant(3, 3, cplx(1.0 / 3.0, 0.0));
  run("three-point", {{1, 0, 2}, {1, 2, 0}}, l3);
}

// 8. Property suites: kernel boolean agreement, end-to-end tuple residuals,
//    generator-deviation decay, spiral coverage, and the closedness negative
//    control.
void c8(Gate& g) {
  {
    alg::PermClosure s4 =
        alg::close_perm_generators({{1, 0, 2, 3}, {1, 2, 3, 0}});
    lin::NormalSampler rng(404);
    const int n = 4;
    Mat base(n, n);
    for (int y = 0; y < n; ++y)
      for (int x = 0; x < n; ++x) base(y, x) = 10.0 + ((y - x + n) % n);

    int disagreements = 0, true_seen = 0, false_seen = 0;
    for (int t = 0; t < 200; ++t) {
      const int i = static_cast<int>(std::floor(std::abs(rng()) * 1000)) % 24;
      const alg::Perm& tx = s4.elems[i];
      Mat kappa;
      alg::Perm ty;
      if (t % 2 == 0) {
        ty = tx;
        kappa = base;
      } else {
        const int j =
            static_cast<int>(std::floor(std::abs(rng()) * 1000)) % 24;
        ty = s4.elems[j];
        kappa = Mat(n, n);
        for (int y = 0; y < n; ++y)
          for (int x = 0; x < n; ++x) kappa(y, x) = rng();
      }
      conv::KernelChecks kc =
          conv::kernel_invariance_iff_equivariance(kappa, tx, ty);
      if (kc.kernel_invariant != kc.operator_equivariant) ++disagreements;
      (kc.kernel_invariant ? true_seen : false_seen)++;
    }
    bool both_outcomes = true_seen > 0 && false_seen > 0;
    g.expect(disagreements == 0 && both_outcomes,
             fmt("kernel booleans agree on 200 draws (%d disagreements)",
                 disagreements));
  }

  {
    lin::NormalSampler rng(909);
    double worst = 0.0;
    for (int t = 0; t < 50; ++t) {
      const int depth = 1 + (t % 3);
      std::vector<int> dims;
      for (int k = 0; k <= depth; ++k)
        dims.push_back(1 +
                       static_cast<int>(std::floor(std::abs(rng()) * 100)) % 4);
      nonuniq::LinearNetwork net;
      for (int k = 0; k < depth; ++k) {
        Mat L(dims[k + 1], dims[k]);
        for (int r = 0; r < L.rows(); ++r)
          for (int c = 0; c < L.cols(); ++c) L(r, c) = rng.complex_normal();
        net.layers.push_back(L);
      }
      const auto space = nonuniq::network_symmetry_tuple_space(net);
      for (const auto& tuple : space.basis)
        worst = std::max(worst, nonuniq::end_to_end_residual(net, tuple));
    }
    g.expect(worst < 1e-9,
             fmt("end-to-end residual < 1e-9 on 50 random networks "
                 "(worst %.3g)",
                 worst));
  }

  {
    Mat a0(2, 2), b0(2, 2), e1(2, 2), e2(2, 2);
    a0 << 0.8, 0.1, 0.0, 0.9;
    b0 << 0.0, -0.7, 0.7, 0.0;
    e1 << 0.3, -0.2, 0.5, 0.1;
    e2 << -0.4, 0.2, 0.3, -0.3;
    std::vector<std::vector<Mat>> seq;
    for (double n : {10.0, 100.0, 1000.0})
      seq.push_back({a0 + e1 / (n * n), b0 + e2 / (n * n)});
    const auto audit =
        convergence::generator_convergence_audit(seq, {a0, b0}, 6);
    const bool decays = audit.generators_converging &&
                        audit.sup_deviation[0] / audit.sup_deviation[1] > 10.0 &&
                        audit.sup_deviation[1] / audit.sup_deviation[2] > 10.0;
    g.expect(decays,
             fmt("word deviations fall 10x per 10x steps (%.3g, %.3g, %.3g)",
                 audit.sup_deviation[0], audit.sup_deviation[1],
                 audit.sup_deviation[2]));
  }

  {
    const auto annulus = convergence::annulus_grid(0.5, 2.0, 7, 16);
    const auto thick =
        convergence::spiral_orbit_demo(0.02, -200.0, 200.0, 200000, annulus);
    g.expect(thick.coverage < 0.05,
             fmt("spiral coverage < 0.05 on the annulus at eps 0.02 "
                 "(got %.6g)",
                 thick.coverage));
    const auto circle = convergence::circle_grid(1.0, 1000);
    const auto thin =
        convergence::spiral_orbit_demo(0.0, -200.0, 200.0, 200000, circle);
    g.expect(thin.coverage < 1e-3,
             fmt("on-circle coverage < 1e-3 at eps 0 (got %.3g)",
                 thin.coverage));
  }

  {
    const Mat swap = alg::perm_matrix({1, 0});
    rep::CoupledRep c = rep::coupled_from_generators({swap}, {swap});
    std::vector<CVec> samples;
    lin::NormalSampler rng(23);
    for (int i = 0; i < 5; ++i) {
      CVec x(2);
      x << rng(), rng();
      samples.push_back(x);
    }
    Mat rot(2, 2);
    rot << std::cos(0.7), -std::sin(0.7), std::sin(0.7), std::cos(0.7);
    const Mat wrong = rot * swap * rot.inverse();
    std::vector<Mat> bad_seq;
    std::vector<rep::CoupledRep> reps;
    for (int i = 1; i <= 6; ++i) {
      bad_seq.push_back((1.0 + 1.0 / i) * wrong);
      reps.push_back(c);
    }
    const auto bad = convergence::equivariance_closedness_demo(
        bad_seq, reps, wrong, c, samples);
    const double low =
        *std::min_element(bad.step_residuals.begin(), bad.step_residuals.end());
    g.expect(!bad.inputs_equivariant && low > 1e-2 && bad.limit_residual > 1e-2,
             fmt("negative control plateaus above 1e-2 (min step %.3g, "
                 "limit %.3g)",
                 low, bad.limit_residual));
  }
}

// 9. Commutant/bicommutant of the two-dimensional irreducible block, and
//    multiplicative closures equal to w^2 for every irreducible image span.
void c9(Gate& g) {
  Mat std12(2, 2), std123(2, 2);
  std12 << -1, 1, 0, 1;
  std123 << 0, -1, 1, -1;
  rep::Rep r2 = rep::rep_from_generators({std12, std123});
  g.expect(r2.size() == 6, "two-dim irreducible closure has 6 elements");
  const auto comm = rep::commutant(r2.mats);
  g.expect(comm.dim() == 1,
           fmt("commutant dim 1 (got %d)", static_cast<int>(comm.dim())));
  const auto bicomm = rep::bicommutant(r2.mats);
  g.expect(bicomm.dim() == 4,
           fmt("bicommutant dim 4 (got %d)", static_cast<int>(bicomm.dim())));

  struct IrrepCase {
    const char* name;
    std::vector<Mat> gens;  // images of the table generators, repeats allowed
    int w;
  };
  auto scal = [](cplx z) {
    Mat m(1, 1);
    m(0, 0) = z;
    return m;
  };
  const cplx i(0, 1);
  const std::vector<IrrepCase> s3_cases = {
      {"trivial", {scal(1), scal(1)}, 1},
      {"sign", {scal(-1), scal(1)}, 1},
      {"standard", {std12, std123}, 2},
  };
  const std::vector<IrrepCase> z4_cases = {
      {"chi0", {scal(1)}, 1},
      {"chi1", {scal(i)}, 1},
      {"chi2", {scal(-1)}, 1},
      {"chi3", {scal(-i)}, 1},
  };
  auto check_cases = [&](const alg::SemigroupTable& table,
                         const std::vector<IrrepCase>& cases) {
    for (const auto& cs : cases) {
      rep::Rep r = rep::rep_on_table(table, cs.gens);
      const auto closed = lin::mult_closure(lin::subspace_from_span(r.mats));
      g.expect(static_cast<int>(closed.dim()) == cs.w * cs.w,
               fmt("%s image span closes at dim %d (got %d)", cs.name,
                   cs.w * cs.w, static_cast<int>(closed.dim())));
    }
  };
  check_cases(s3_table(), s3_cases);
  check_cases(z4_table(), z4_cases);
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: acceptance <criterion 1-9>\n";
    return 2;
  }
  const int n = std::atoi(argv[1]);
  Gate g;
  try {
    switch (n) {
      case 1: c1(g); break;
      case 2: c2(g); break;
      case 3: c3(g); break;
      case 4: c4(g); break;
      case 5: c5(g); break;
      case 6: c6(g); break;
      case 7: c7(g); break;
      case 8: c8(g); break;
      case 9: c9(g); break;
      default:
        std::cerr << "usage: acceptance <criterion 1-9>\n";
        return 2;
    }
  } catch (const std::exception& e) {
    g.expect(false, fmt("threw: %s", e.what()));
  }

  if (g.failed.empty()) {
    std::printf("criterion %d: PASS\n", n);
    return 0;
  }
  std::string detail;
  for (std::size_t k = 0; k < g.failed.size(); ++k) {
    if (k) detail += "; ";
    detail += g.failed[k];
  }
  std::printf("criterion %d: FAIL [%s]\n", n, detail.c_str());
  return 1;
}
