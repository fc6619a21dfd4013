#include "eqmap/algebra.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <set>

namespace eqmap::algebra {

Perm compose(const Perm& a, const Perm& b) {
  if (a.size() != b.size())
    throw ShapeMismatch("compose: maps act on sets of different size");
  Perm out(b.size());
  for (std::size_t x = 0; x < b.size(); ++x) {
    if (b[x] < 0 || static_cast<std::size_t>(b[x]) >= a.size())
      throw ShapeMismatch("compose: image out of range");
    out[x] = a[b[x]];
  }
  return out;
}

bool is_bijection(const Perm& p) {
  std::vector<bool> seen(p.size(), false);
  for (int v : p) {
    if (v < 0 || static_cast<std::size_t>(v) >= p.size() || seen[v])
      return false;
    seen[v] = true;
  }
  return true;
}

Perm inverse_perm(const Perm& p) {
  if (!is_bijection(p)) throw ShapeMismatch("inverse_perm: not a bijection");
  Perm inv(p.size());
  for (std::size_t x = 0; x < p.size(); ++x) inv[p[x]] = static_cast<int>(x);
  return inv;
}

Mat perm_matrix(const Perm& p) {
  Mat m = Mat::Zero(static_cast<Eigen::Index>(p.size()),
                    static_cast<Eigen::Index>(p.size()));
  for (std::size_t j = 0; j < p.size(); ++j) m(p[j], j) = 1.0;
  return m;
}

namespace {

// Shared breadth-first closure. Element identity is abstracted behind
// `locate` (returns index or -1) and `append`.
template <typename Elem, typename Product, typename Locate>
SemigroupTable close_generic(std::vector<Elem>& elems, std::size_t n_gens,
                             std::size_t cap, Product product, Locate locate) {
  SemigroupTable t;
  t.gens.resize(n_gens);
  for (std::size_t g = 0; g < n_gens; ++g) {
    t.gens[g] = static_cast<int>(g);
    t.provenance.emplace_back(-1, static_cast<int>(g));
    t.words.push_back("g" + std::to_string(g));
  }
  // Phase 1: enumerate elements, breadth-first in word length. Every product
  // of length L+1 is (length-L product) * generator, so right-multiplying the
  // frontier by generators reaches everything.
  for (std::size_t i = 0; i < elems.size(); ++i) {
    for (std::size_t g = 0; g < n_gens; ++g) {
      Elem p = product(elems[i], elems[g]);
      if (locate(elems, p) >= 0) continue;
      if (elems.size() >= cap)
        throw CapExceeded("closure exceeded cap of " + std::to_string(cap) +
                          " elements");
      elems.push_back(std::move(p));
      t.provenance.emplace_back(static_cast<int>(i), static_cast<int>(g));
      t.words.push_back(t.words[i] + "*g" + std::to_string(g));
    }
  }
  // Phase 2: full Cayley table. Closure guarantees every product resolves.
  t.n = static_cast<int>(elems.size());
  t.mul.assign(t.n, std::vector<int>(t.n, -1));
  for (int i = 0; i < t.n; ++i)
    for (int j = 0; j < t.n; ++j) {
      Elem p = product(elems[i], elems[j]);
      const int k = locate(elems, p);
      if (k < 0)
        throw InternalInconsistency(
            "closed set lost product of elements " + std::to_string(i) +
            " and " + std::to_string(j));
      t.mul[i][j] = k;
    }
  return t;
}

}  // namespace

PermClosure close_perm_generators(const std::vector<Perm>& gens,
                                  std::size_t cap) {
  if (gens.empty()) throw ShapeMismatch("closure needs at least one generator");
  const std::size_t npts = gens[0].size();
  for (const Perm& g : gens)
    if (g.size() != npts)
      throw ShapeMismatch("generators act on sets of different size");

  PermClosure out;
  std::map<Perm, int> index;
  for (const Perm& g : gens) {
    if (!index.count(g)) {
      index[g] = static_cast<int>(out.elems.size());
      out.elems.push_back(g);
    }
  }
  if (out.elems.size() != gens.size())
    throw AmbiguousMatch("duplicate permutation generators");
  auto locate = [&index](const std::vector<Perm>&, const Perm& p) {
    auto it = index.find(p);
    return it == index.end() ? -1 : it->second;
  };
  auto product = [](const Perm& a, const Perm& b) { return compose(a, b); };
  // locate must see the elements appended by close_generic: wrap append via
  // mutation hook -- simplest is to rebuild the index inside locate on miss.
  std::size_t indexed = out.elems.size();
  auto locate_sync = [&](const std::vector<Perm>& es, const Perm& p) {
    while (indexed < es.size()) {
      index.emplace(es[indexed], static_cast<int>(indexed));
      ++indexed;
    }
    return locate(es, p);
  };
  out.table = close_generic(out.elems, gens.size(), cap, product, locate_sync);
  return out;
}

MatClosure close_matrix_generators(const std::vector<Mat>& gens, double tol,
                                   std::size_t cap) {
  if (gens.empty()) throw ShapeMismatch("closure needs at least one generator");
  const Eigen::Index d = gens[0].rows();
  for (const Mat& g : gens)
    if (g.rows() != d || g.cols() != d)
      throw ShapeMismatch("matrix generators must be square and equally sized");

  MatClosure out;
  out.elems = gens;
  // Nearest-match identity: distance is max-abs entry difference.
  auto locate = [tol](const std::vector<Mat>& es, const Mat& p) {
    int found = -1;
    for (std::size_t k = 0; k < es.size(); ++k) {
      if ((es[k] - p).cwiseAbs().maxCoeff() <= tol) {
        if (found >= 0)
          throw AmbiguousMatch(
              "two closure elements within tol of the same product; "
              "tol is too large for this generating set");
        found = static_cast<int>(k);
      }
    }
    return found;
  };
  for (std::size_t i = 0; i < gens.size(); ++i)
    for (std::size_t j = i + 1; j < gens.size(); ++j)
      if ((gens[i] - gens[j]).cwiseAbs().maxCoeff() <= tol)
        throw AmbiguousMatch("matrix generators " + std::to_string(i) +
                             " and " + std::to_string(j) + " coincide at tol");
  auto product = [](const Mat& a, const Mat& b) -> Mat { return a * b; };
  out.table = close_generic(out.elems, gens.size(), cap, product, locate);
  return out;
}

StructureReport classify(const SemigroupTable& t) {
  StructureReport r;
  r.inverse.assign(t.n, -1);

  r.associative = true;
  for (int i = 0; i < t.n && r.associative; ++i)
    for (int j = 0; j < t.n && r.associative; ++j)
      for (int k = 0; k < t.n; ++k)
        if (t.mul[t.mul[i][j]][k] != t.mul[i][t.mul[j][k]]) {
          r.associative = false;
          break;
        }

  for (int e = 0; e < t.n; ++e) {
    bool ok = true;
    for (int i = 0; i < t.n; ++i)
      if (t.mul[e][i] != i || t.mul[i][e] != i) {
        ok = false;
        break;
      }
    if (ok) {
      r.identity = e;
      break;
    }
  }
  r.is_monoid = r.identity >= 0;

  r.is_abelian = true;
  for (int i = 0; i < t.n && r.is_abelian; ++i)
    for (int j = 0; j < i; ++j)
      if (t.mul[i][j] != t.mul[j][i]) {
        r.is_abelian = false;
        break;
      }

  if (r.is_monoid) {
    bool all = true;
    for (int i = 0; i < t.n; ++i) {
      for (int j = 0; j < t.n; ++j)
        if (t.mul[i][j] == r.identity && t.mul[j][i] == r.identity) {
          r.inverse[i] = j;
          break;
        }
      if (r.inverse[i] < 0) all = false;
    }
    r.is_group = all && r.associative;
  }
  return r;
}

namespace {

bool transitive_from_some_base(const std::vector<Perm>& action,
                               std::size_t npts) {
  for (std::size_t x0 = 0; x0 < npts; ++x0) {
    std::set<int> hit;
    for (const Perm& a : action) hit.insert(a[x0]);
    if (hit.size() == npts) return true;
  }
  return false;
}

}  // namespace

ImageEqualityReport transitive_image_equality(
    const SemigroupTable& s_table, const SemigroupTable& t_table,
    const std::vector<int>& phi, const std::vector<Perm>& alpha,
    const std::vector<Perm>& beta, ActionMode mode) {
  ImageEqualityReport rep;
  auto fail = [&rep](const std::string& why) -> ImageEqualityReport& {
    rep.hypotheses_ok = false;
    rep.violated = why;
    return rep;
  };

  if (static_cast<int>(alpha.size()) != s_table.n ||
      static_cast<int>(beta.size()) != t_table.n ||
      static_cast<int>(phi.size()) != s_table.n)
    throw ShapeMismatch("transitive_image_equality: sizes disagree with tables");
  const std::size_t npts = alpha.empty() ? 0 : alpha[0].size();
  for (const Perm& m : alpha)
    if (m.size() != npts) throw ShapeMismatch("alpha acts on mixed sets");
  for (const Perm& m : beta)
    if (m.size() != npts) throw ShapeMismatch("beta acts on mixed sets");

  for (int s = 0; s < s_table.n; ++s) {
    if (phi[s] < 0 || phi[s] >= t_table.n)
      throw ShapeMismatch("phi maps outside T");
    if (alpha[s] != beta[phi[s]])
      return fail("alpha != beta o phi at element " + std::to_string(s));
  }

  const bool right = mode == ActionMode::right_transitive;
  for (int i = 0; i < s_table.n; ++i)
    for (int j = 0; j < s_table.n; ++j) {
      const Perm want = right ? compose(alpha[j], alpha[i])
                              : compose(alpha[i], alpha[j]);
      if (alpha[s_table.mul[i][j]] != want)
        return fail(std::string("alpha is not a ") +
                    (right ? "right" : "left") + " action");
    }
  for (int i = 0; i < t_table.n; ++i)
    for (int j = 0; j < t_table.n; ++j) {
      const Perm want =
          right ? compose(beta[j], beta[i]) : compose(beta[i], beta[j]);
      if (beta[t_table.mul[i][j]] != want)
        return fail(std::string("beta is not a ") +
                    (right ? "right" : "left") + " action");
    }

  if (!transitive_from_some_base(alpha, npts))
    return fail("alpha is not transitive");

  if (mode == ActionMode::left_abelian_central) {
    for (int i = 0; i < s_table.n; ++i)
      for (int j = 0; j < i; ++j)
        if (s_table.mul[i][j] != s_table.mul[j][i])
          return fail("S is not abelian");
    for (int s = 0; s < s_table.n; ++s)
      for (int t = 0; t < t_table.n; ++t)
        if (t_table.mul[phi[s]][t] != t_table.mul[t][phi[s]])
          return fail("phi(S) does not centralize T");
  }

  rep.hypotheses_ok = true;
  std::set<Perm> alpha_set(alpha.begin(), alpha.end());
  std::set<Perm> beta_set(beta.begin(), beta.end());
  rep.equal = alpha_set == beta_set;
  if (!rep.equal) {
    for (int t = 0; t < t_table.n; ++t)
      if (!alpha_set.count(beta[t])) {
        rep.witness = t;
        break;
      }
    // beta(T) could also be a strict subset; then the witness stays -1 and
    // equality still fails because alpha has maps beta lacks.
  }
  return rep;
}

}  // namespace eqmap::algebra
