#pragma once

// Finite semigroups presented by generators: closure into a Cayley table,
// structural classification, and the transitive-action image-equality audit.

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "eqmap/linalg.hpp"

namespace eqmap::algebra {

// A total map [n] -> [n]; bijective when used as a permutation.
using Perm = std::vector<int>;

// (a after b): compose(a, b)[x] = a[b[x]].
Perm compose(const Perm& a, const Perm& b);
bool is_bijection(const Perm& p);
Perm inverse_perm(const Perm& p);
Mat perm_matrix(const Perm& p);  // column j carries e_j -> e_{p[j]}

struct SemigroupTable {
  int n = 0;
  std::vector<std::vector<int>> mul;  // mul[i][j] = i * j
  std::vector<int> gens;              // element indices of the generators
  // Element k (non-generator) was first reached as parent * generator:
  // provenance[k] = {parent element, generator position}; generators get
  // {-1, own position}.
  std::vector<std::pair<int, int>> provenance;
  std::vector<std::string> words;  // e.g. "g0*g1*g0"

  int at(int i, int j) const { return mul[i][j]; }
};

struct PermClosure {
  SemigroupTable table;
  std::vector<Perm> elems;
};

struct MatClosure {
  SemigroupTable table;
  std::vector<Mat> elems;
};

// Breadth-first closure (shorter words first, then generator order). Exact
// element identity for permutations; for matrices the nearest element within
// tol in the max-abs metric, with AmbiguousMatch if two established elements
// both sit within tol of a product. CapExceeded past `cap` elements.
PermClosure close_perm_generators(const std::vector<Perm>& gens,
                                  std::size_t cap = 10000);
MatClosure close_matrix_generators(const std::vector<Mat>& gens,
                                   double tol = 1e-9, std::size_t cap = 10000);

struct StructureReport {
  bool associative = false;
  bool is_monoid = false;
  bool is_group = false;
  bool is_abelian = false;
  int identity = -1;               // element index, -1 if none
  std::vector<int> inverse;        // per element, -1 where undefined
};

StructureReport classify(const SemigroupTable& t);

// Hypothesis-checked audit of image equality for a transitive action factored
// through a semigroup map phi : S -> T (alpha = beta o phi).
//
// In right_transitive mode the actions must reverse multiplication
// (alpha[s*t] = alpha[t] o alpha[s]) and alpha must be transitive. In
// left_abelian_central mode the actions must preserve multiplication, S must
// be abelian, phi(S) must centralize T, and alpha must be transitive; under
// those hypotheses equality of the image sets is guaranteed.
enum class ActionMode { right_transitive, left_abelian_central };

struct ImageEqualityReport {
  bool hypotheses_ok = false;
  std::string violated;  // empty when hypotheses_ok
  bool equal = false;
  int witness = -1;  // index t in T with beta[t] outside alpha(S)
};

ImageEqualityReport transitive_image_equality(
    const SemigroupTable& s_table, const SemigroupTable& t_table,
    const std::vector<int>& phi, const std::vector<Perm>& alpha,
    const std::vector<Perm>& beta, ActionMode mode);

}  // namespace eqmap::algebra
