#pragma once

// JSON plumbing for the CLI and its spec files: matrix/permutation
// (de)serialization, spec-file loaders keyed on "kind", and a deterministic
// dumper (insertion order preserved, every number printed via %.17g) so
// identical inputs produce byte-identical reports.

#include <string>
#include <vector>

#include <json.hpp>

#include "eqmap/algebra.hpp"
#include "eqmap/conv.hpp"
#include "eqmap/nonuniq.hpp"
#include "eqmap/rep.hpp"

namespace eqmap::json_io {

using ojson = nlohmann::ordered_json;

// Matrices travel as row-major nested arrays of [re, im] pairs.
Mat mat_from_json(const ojson& j);
ojson mat_to_json(const Mat& m);
std::vector<cplx> coeffs_from_json(const ojson& j);  // list of [re, im]
ojson coeffs_to_json(const std::vector<cplx>& v);
algebra::Perm perm_from_json(const ojson& j);

// ParseError with the byte offset on malformed input.
ojson parse(const std::string& text);
ojson load_file(const std::string& path);

// %.17g rendering of every number, keys in insertion order.
std::string dump_deterministic(const ojson& j, int indent = 2);

// FNV-1a over the raw bytes, as fixed-width hex.
std::string digest(const std::string& bytes);

// A semigroup/group payload: an explicit "table", "perm_generators", or
// "matrix_generators" (exactly one).
struct SemigroupSpec {
  algebra::SemigroupTable table;
  std::vector<algebra::Perm> perms;  // full realization when perm-generated
  std::vector<Mat> mats;             // full images when matrix-generated
};
SemigroupSpec load_semigroup(const ojson& j, double tol = 1e-9,
                             std::size_t cap = 10000);

rep::CoupledRep load_coupled_rep(const ojson& j, double tol = 1e-9,
                                 std::size_t cap = 10000);

// One side of a gspace_pair: "action" is "regular", {"copies": k}, or
// {"generator_images": [perm per generator]}; optional "mu".
conv::GSpace load_gspace(const SemigroupSpec& sg, const ojson& action,
                         const ojson* mu);

nonuniq::LinearNetwork load_network(const ojson& j);
nonuniq::GatedLayer load_gated_layer(const ojson& j);
nonuniq::FiniteLearnabilityInstance load_learnability(const ojson& j);

}  // namespace eqmap::json_io
