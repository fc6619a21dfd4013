#include <doctest.h>

#include <algorithm>
#include <set>
#include <vector>

#include <eqmap/conv.hpp>
#include <eqmap/errors.hpp>
#include <eqmap/rep.hpp>

#include "test_support.hpp"

using eqmap::cplx;
using eqmap::CVec;
using eqmap::Mat;
using namespace eqmap::conv;
namespace alg = eqmap::algebra;
namespace lin = eqmap::linalg;

namespace {

alg::SemigroupTable z4_table() {
  return alg::close_perm_generators({{1, 2, 3, 0}}).table;
}
alg::SemigroupTable z2_table() {
  return alg::close_perm_generators({{1, 0}}).table;
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
alg::SemigroupTable t2_table() {
  alg::SemigroupTable t;
  t.n = 4;
  t.mul = {{0, 1, 2, 3}, {1, 0, 3, 2}, {2, 2, 2, 2}, {3, 3, 3, 3}};
  return t;
}

GSpace a4_natural() {
  alg::PermClosure pc =
      alg::close_perm_generators({{1, 2, 0, 3}, {1, 0, 3, 2}});
  REQUIRE(pc.elems.size() == 12);
  return make_gspace(pc.table, pc.elems);
}

int identity_of(const alg::SemigroupTable& t) {
  alg::StructureReport sr = alg::classify(t);
  REQUIRE(sr.identity >= 0);
  return sr.identity;
}

}  // namespace

TEST_CASE("make_gspace validates actions and exposes orbits") {
  GSpace g = regular_gspace(z4_table());
  CHECK(g.points() == 4);
  REQUIRE(g.orbits.size() == 1);
  CHECK(g.orbit_free(0));
  CHECK(g.mu_invariant());
  for (double w : g.mu) CHECK(w == doctest::Approx(0.25));
  for (int x = 0; x < 4; ++x) CHECK(g.orbit_of[x] == 0);

  // Non-bijective rows are rejected.
  CHECK_THROWS_AS(make_gspace(z2_table(), {{0, 0}, {0, 1}}),
                  eqmap::ShapeMismatch);
  // Rows that are bijections but do not realize the table are rejected.
  CHECK_THROWS_AS(make_gspace(z2_table(), {{1, 0}, {1, 0}}),
                  eqmap::ShapeMismatch);
  // Weights must be strictly positive and sized to X.
  CHECK_THROWS_AS(make_gspace(z2_table(), {{1, 0}, {0, 1}}, {1.0, -1.0}),
                  eqmap::ShapeMismatch);
  CHECK_THROWS_AS(make_gspace(z2_table(), {{1, 0}, {0, 1}}, {1.0}),
                  eqmap::ShapeMismatch);

  // A semigroup with non-bijective translations has no regular space.
  CHECK_THROWS_AS(regular_gspace(max3_table()), eqmap::ShapeMismatch);
}

TEST_CASE("free_orbit_sum glues disjoint regular orbits") {
  GSpace g = free_orbit_sum(z2_table(), 2);
  CHECK(g.points() == 4);
  REQUIRE(g.orbits.size() == 2);
  CHECK(g.base_point(0) == 0);
  CHECK(g.base_point(1) == 2);
  CHECK(g.orbit_free(0));
  CHECK(g.orbit_free(1));
  CHECK(g.mu_invariant());
  CHECK_THROWS_AS(free_orbit_sum(z2_table(), 0), eqmap::ShapeMismatch);
}

TEST_CASE("composition and integral operators: hand goldens") {
  // (C_t f)(x) = f(t(x)) for the non-injective map sending both points to 1.
  Mat c = composition_matrix({1, 1});
  CHECK(c(0, 1) == cplx(1));
  CHECK(c(1, 1) == cplx(1));
  CHECK(c(0, 0) == cplx(0));
  CHECK_THROWS_AS(composition_matrix({0, 7}), eqmap::ShapeMismatch);

  Mat k(2, 2);
  k << 1, 2, 3, 4;
  Mat li = integral_operator(k, {0.3, 0.7});
  CHECK(std::abs(li(0, 0) - cplx(0.3)) < 1e-15);
  CHECK(std::abs(li(0, 1) - cplx(1.4)) < 1e-15);
  CHECK(std::abs(li(1, 1) - cplx(2.8)) < 1e-15);
  CHECK_THROWS_AS(integral_operator(k, {0.3}), eqmap::ShapeMismatch);

  CHECK(kernel_operator(k, 2, 2) == k);
  CHECK_THROWS_AS(kernel_operator(k, 3, 2), eqmap::ShapeMismatch);
}

TEST_CASE("kernel invariance and operator equivariance decide together") {
  // Translation-invariant kernel on the 4-cycle.
  const int n = 4;
  Mat kappa(n, n);
  for (int y = 0; y < n; ++y)
    for (int x = 0; x < n; ++x) kappa(y, x) = 10.0 + ((y - x + n) % n);
  alg::Perm rot = {1, 2, 3, 0};
  KernelChecks inv = kernel_invariance_iff_equivariance(kappa, rot, rot);
  CHECK(inv.kernel_invariant);
  CHECK(inv.operator_equivariant);

  // A generic kernel fails both ways.
  Mat noise(n, n);
  lin::NormalSampler rng(2);
  for (int y = 0; y < n; ++y)
    for (int x = 0; x < n; ++x) noise(y, x) = rng();
  KernelChecks off = kernel_invariance_iff_equivariance(noise, rot, rot);
  CHECK(!off.kernel_invariant);
  CHECK(!off.operator_equivariant);

  // Identity maps make any kernel pass.
  alg::Perm id = {0, 1, 2, 3};
  KernelChecks triv = kernel_invariance_iff_equivariance(noise, id, id);
  CHECK(triv.kernel_invariant);
  CHECK(triv.operator_equivariant);

  CHECK_THROWS_AS(kernel_invariance_iff_equivariance(noise, {0, 0, 2, 3}, rot),
                  eqmap::ShapeMismatch);
}

TEST_CASE("the two kernel checks agree across random draws") {
  // 200 seeded draws of (kernel, pair of bijections): the two independently
  // computed booleans always coincide; mixing in shifted copies of an
  // invariant kernel makes sure both outcomes occur.
  alg::PermClosure s4 = alg::close_perm_generators({{1, 0, 2, 3}, {1, 2, 3, 0}});
  lin::NormalSampler rng(404);
  const int n = 4;
  Mat base(n, n);
  for (int y = 0; y < n; ++y)
    for (int x = 0; x < n; ++x) base(y, x) = 10.0 + ((y - x + n) % n);

  int true_seen = 0, false_seen = 0;
  for (int t = 0; t < 200; ++t) {
    const int i =
        static_cast<int>(std::floor(std::abs(rng()) * 1000)) % 24;
    const alg::Perm& tx = s4.elems[i];
    Mat kappa;
    alg::Perm ty;
    if (t % 2 == 0) {
      // Invariant construction: kappa = C_ty^T base C_tx recovers
      // invariance exactly when ty matches the conjugation used.
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
    KernelChecks kc = kernel_invariance_iff_equivariance(kappa, tx, ty);
    CHECK(kc.kernel_invariant == kc.operator_equivariant);
    (kc.kernel_invariant ? true_seen : false_seen)++;
  }
  CHECK(true_seen > 0);
  CHECK(false_seen > 0);
}

TEST_CASE("kernel-function invariance needs the measure preserved") {
  const int n = 4;
  Mat k(n, n);
  for (int y = 0; y < n; ++y)
    for (int x = 0; x < n; ++x) k(y, x) = 1.0 + ((y - x + n) % n);
  std::vector<double> unif(n, 0.25);
  alg::Perm rot = {1, 2, 3, 0};
  KernelFnChecks good = kernel_function_invariance(k, unif, rot, rot);
  CHECK(good.mu_preserved);
  CHECK(good.operator_equivariant);
  CHECK(good.function_invariant);

  // A lopsided measure is not preserved by the rotation.
  std::vector<double> lop = {0.7, 0.1, 0.1, 0.1};
  KernelFnChecks bad = kernel_function_invariance(k, lop, rot, rot);
  CHECK(!bad.mu_preserved);

  lin::NormalSampler rng(6);
  Mat noise(n, n);
  for (int y = 0; y < n; ++y)
    for (int x = 0; x < n; ++x) noise(y, x) = rng();
  KernelFnChecks off = kernel_function_invariance(noise, unif, rot, rot);
  CHECK(off.mu_preserved);
  CHECK(!off.operator_equivariant);
  CHECK(!off.function_invariant);
}

TEST_CASE("equivariant operator spaces: frozen dimensions") {
  GSpace z4 = regular_gspace(z4_table());
  GSpace s3 = regular_gspace(s3_table());
  GSpace two = free_orbit_sum(z2_table(), 2);
  GSpace reg2 = regular_gspace(z2_table());

  CHECK(equivariant_operator_basis(z4, z4).dim() == 4);
  CHECK(equivariant_operator_basis(s3, s3).dim() == 6);
  CHECK(equivariant_operator_basis(two, reg2).dim() == 4);
  CHECK(equivariant_operator_basis(two, two).dim() == 8);

  GSpace a4 = a4_natural();
  lin::MatSubspace nat = equivariant_operator_basis(a4, a4);
  CHECK(nat.dim() == 2);
  // On a non-free orbit the space is just {aI + bJ}.
  CHECK(nat.contains(Mat::Identity(4, 4), 1e-9));
  CHECK(nat.contains(Mat::Ones(4, 4), 1e-9));

  // Every basis element commutes with the full action, not only with the
  // generators the solver used.
  lin::MatSubspace b = equivariant_operator_basis(two, reg2);
  for (const Mat& l : b.basis)
    for (int g = 0; g < two.table.n; ++g) {
      Mat cy = composition_matrix(reg2.action[g]);
      Mat cx = composition_matrix(two.action[g]);
      CHECK((cy * l - l * cx).norm() < 1e-9);
    }

  CHECK_THROWS_AS(equivariant_operator_basis(z4, reg2),
                  eqmap::ShapeMismatch);
}

TEST_CASE("coordinate-form convolution: identity kernel and error paths") {
  GSpace z4 = regular_gspace(z4_table());
  const int e = identity_of(z4.table);
  ConvKernel delta = ConvKernel::zeros(4, 1, 1);
  delta.at(e, 0, 0) = 1.0;
  Mat op = conv_operator(delta, z4, z4);
  CHECK((op - Mat::Identity(4, 4) / 4.0).norm() < 1e-12);

  // A generic kernel lands in the equivariant space.
  lin::NormalSampler rng(8);
  ConvKernel ell = ConvKernel::zeros(4, 1, 1);
  for (int g = 0; g < 4; ++g) ell.at(g, 0, 0) = rng.complex_normal();
  Mat generic = conv_operator(ell, z4, z4);
  CHECK(equivariant_operator_basis(z4, z4).contains(generic, 1e-9));

  // Non-free orbits and non-groups are refused.
  GSpace a4 = a4_natural();
  ConvKernel e12 = ConvKernel::zeros(12, 1, 1);
  CHECK_THROWS_AS(conv_operator(e12, a4, a4), eqmap::NonFreeOrbit);

  GSpace pt = make_gspace(max3_table(), {{0}, {0}, {0}});
  ConvKernel e3 = ConvKernel::zeros(3, 1, 1);
  CHECK_THROWS_AS(conv_operator(e3, pt, pt), eqmap::NotAGroup);

  ConvKernel wrong = ConvKernel::zeros(4, 2, 1);
  CHECK_THROWS_AS(conv_operator(wrong, z4, z4), eqmap::ShapeMismatch);
}

TEST_CASE("convolution kernels reach the whole equivariant space") {
  GSpace z4 = regular_gspace(z4_table());
  CompletenessReport a = conv_completeness_check(z4, z4);
  CHECK(a.complete);
  CHECK(a.basis_dim == 4);
  CHECK(a.kernel_params == 4);
  CHECK(a.residual < 1e-9);

  GSpace s3 = regular_gspace(s3_table());
  CompletenessReport b = conv_completeness_check(s3, s3);
  CHECK(b.complete);
  CHECK(b.basis_dim == 6);
  CHECK(b.residual < 1e-9);

  GSpace two = free_orbit_sum(z2_table(), 2);
  GSpace reg2 = regular_gspace(z2_table());
  CompletenessReport c = conv_completeness_check(two, reg2);
  CHECK(c.complete);
  CHECK(c.basis_dim == 4);
  CHECK(c.kernel_params == 4);

  CompletenessReport d = conv_completeness_check(two, two);
  CHECK(d.complete);
  CHECK(d.basis_dim == 8);
  CHECK(d.kernel_params == 8);
}

TEST_CASE("symmetry enumeration recovers exactly the group image on "
          "free spaces") {
  GSpace z4 = regular_gspace(z4_table());
  EnumerationReport ez4 = symmetry_enumeration(z4, z4);
  CHECK(ez4.matches_g_image);
  CHECK(ez4.closed_under_composition);
  CHECK(ez4.pairs.size() == 4);
  CHECK(ez4.g_image.size() == 4);

  GSpace s3 = regular_gspace(s3_table());
  EnumerationReport es3 = symmetry_enumeration(s3, s3);
  CHECK(es3.matches_g_image);
  CHECK(es3.pairs.size() == 6);

  GSpace two = free_orbit_sum(z2_table(), 2);
  GSpace reg2 = regular_gspace(z2_table());
  EnumerationReport etwo = symmetry_enumeration(two, reg2);
  CHECK(etwo.matches_g_image);
  REQUIRE(etwo.pairs.size() == 2);
  std::set<std::pair<alg::Perm, alg::Perm>> got(etwo.pairs.begin(),
                                                etwo.pairs.end());
  std::set<std::pair<alg::Perm, alg::Perm>> want = {
      {{0, 1, 2, 3}, {0, 1}}, {{1, 0, 3, 2}, {1, 0}}};
  CHECK(got == want);
}

TEST_CASE("symmetry enumeration: a non-free orbit lets extra pairs "
          "survive") {
  GSpace a4 = a4_natural();
  EnumerationReport rep = symmetry_enumeration(a4, a4);
  CHECK(rep.g_image.size() == 12);
  CHECK(rep.pairs.size() == 24);  // every permutation pairs with itself
  CHECK(!rep.matches_g_image);
  CHECK(rep.closed_under_composition);
  CHECK(rep.candidates_tried == 24);
  // The group image still sits inside the survivors.
  std::set<std::pair<alg::Perm, alg::Perm>> got(rep.pairs.begin(),
                                                rep.pairs.end());
  for (const auto& p : rep.g_image) CHECK(got.count(p) == 1);
}

TEST_CASE("symmetry enumeration refuses oversized candidate sets") {
  alg::SemigroupTable z9 =
      alg::close_perm_generators({{1, 2, 3, 4, 5, 6, 7, 8, 0}}).table;
  GSpace reg = regular_gspace(z9);
  CHECK_THROWS_AS(symmetry_enumeration(reg, reg), eqmap::SearchTooLarge);
}

TEST_CASE("signal convolutions: goldens, the classical form, "
          "commutative collapse") {
  alg::SemigroupTable z4 = z4_table();
  lin::NormalSampler rng(13);
  std::vector<cplx> ell(4);
  for (auto& x : ell) x = rng();
  CVec f(4);
  for (int i = 0; i < 4; ++i) f(i) = rng();

  CVec gl = group_like_conv(z4, ell, f);
  CVec sl = semigroup_like_conv(z4, ell, f);
  CVec cl = classical_group_conv(z4, ell, f);
  for (int h = 0; h < 4; ++h) {
    cplx want_g = 0.0, want_s = 0.0;
    for (int g = 0; g < 4; ++g) {
      want_g += ell[g] * f(z4.mul[h][g]) / 4.0;
      want_s += ell[g] * f(z4.mul[g][h]) / 4.0;
    }
    CHECK(std::abs(gl(h) - want_g) < 1e-12);
    CHECK(std::abs(sl(h) - want_s) < 1e-12);
  }
  // On a group the classical substitution g -> h g turns the classical form
  // into the group-like one; on an abelian table all three coincide.
  CHECK((cl - gl).norm() < 1e-12);
  CHECK((gl - sl).norm() < 1e-12);

  alg::SemigroupTable m3 = max3_table();
  std::vector<cplx> ell3 = {0.5, -1.5, 2.0};
  CVec f3(3);
  f3 << 1.0, -2.0, 0.5;
  CHECK((group_like_conv(m3, ell3, f3) - semigroup_like_conv(m3, ell3, f3))
            .norm() < 1e-15);
  CHECK_THROWS_AS(classical_group_conv(m3, ell3, f3), eqmap::NotAGroup);

  CHECK_THROWS_AS(group_like_conv(z4, {1.0}, f), eqmap::ShapeMismatch);
}

TEST_CASE("right multiplications split the two convolutions on a "
          "noncommutative monoid") {
  alg::SemigroupTable t2 = t2_table();
  std::vector<Mat> rm = right_mult_actions(t2);
  REQUIRE(rm.size() == 4);
  // (M_t f)(s) = f(st): column of the matrix follows the table.
  for (int t = 0; t < 4; ++t)
    for (int s = 0; s < 4; ++s) CHECK(rm[t](s, t2.mul[s][t]) == cplx(1));
  // Right multiplication by a constant map is not a permutation.
  CHECK(rm[2].colwise().sum().real().maxCoeff() == doctest::Approx(2.0));

  // Operators assembled column by column from the two convolutions.
  std::vector<cplx> ell = {0.3, -1.2, 2.2, 0.7};
  Mat glop = Mat::Zero(4, 4), slop = Mat::Zero(4, 4);
  for (int j = 0; j < 4; ++j) {
    CVec e = CVec::Zero(4);
    e(j) = 1.0;
    glop.col(j) = group_like_conv(t2, ell, e);
    slop.col(j) = semigroup_like_conv(t2, ell, e);
  }
  std::vector<std::pair<Mat, Mat>> cands;
  for (const Mat& m : rm) cands.push_back({m, m});

  EquivSetReport sl = operator_equivariance_set(slop, cands, 1e-12);
  CHECK(sl.survivors.size() == 4);
  for (double r : sl.residuals) CHECK(r < 1e-12);

  EquivSetReport gl = operator_equivariance_set(glop, cands, 1e-12);
  CHECK(gl.survivors == std::vector<int>{0});
  const double frozen[] = {0.0, 0.75000000000000011, 0.25, 0.5};
  REQUIRE(gl.residuals.size() == 4);
  for (int i = 0; i < 4; ++i)
    CHECK(std::abs(gl.residuals[i] - frozen[i]) < 1e-12);

  Mat tiny = Mat::Zero(2, 2);
  CHECK_THROWS_AS(operator_equivariance_set(tiny, cands),
                  eqmap::ShapeMismatch);
}

TEST_CASE("homogeneous audit certifies abelian commuting families only") {
  GSpace z4 = regular_gspace(z4_table());
  lin::NormalSampler rng(19);
  std::vector<cplx> ell(4);
  for (auto& x : ell) x = rng();

  // The full translation family: certified equal.
  HomogeneousReport full = homogeneous_conv_audit(z4, 0, ell, z4.action);
  CHECK(full.g_abelian);
  CHECK(full.t_commutes_with_g);
  CHECK(full.t_inside_g_image);
  CHECK(full.images_equal);
  CHECK(full.status == "equal-certified");
  for (double r : full.residuals) CHECK(r < 1e-9);

  // A strict commuting subfamily: certified contained.
  std::vector<alg::Perm> sub = {z4.action[1], z4.action[3]};
  HomogeneousReport part = homogeneous_conv_audit(z4, 0, ell, sub);
  CHECK(part.status == "contained-certified");
  CHECK(!part.images_equal);

  // A transposition neither commutes nor survives the residual check.
  std::vector<alg::Perm> alien = {alg::Perm{1, 0, 2, 3}};
  HomogeneousReport off = homogeneous_conv_audit(z4, 0, ell, alien);
  CHECK(off.status == "differ");
  CHECK(!off.t_commutes_with_g);
  CHECK(off.witness == 0);
  CHECK(off.residuals[0] > 1e-3);

  // Nonabelian: the same family is only observed, not certified.
  GSpace s3 = regular_gspace(s3_table());
  std::vector<cplx> ell6(6);
  for (auto& x : ell6) x = rng();
  HomogeneousReport obs = homogeneous_conv_audit(s3, 0, ell6, s3.action);
  CHECK(!obs.g_abelian);
  CHECK(obs.images_equal);
  CHECK(obs.status == "equal-observed-unproven");
  for (double r : obs.residuals) CHECK(r < 1e-9);

  // The base point must reach every point.
  GSpace two = free_orbit_sum(z2_table(), 2);
  CHECK_THROWS_AS(homogeneous_conv_audit(two, 0, {1.0, 0.0}, two.action),
                  eqmap::SectionUndefined);
}
