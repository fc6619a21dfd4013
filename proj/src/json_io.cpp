#include "eqmap/json_io.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "eqmap/errors.hpp"

namespace eqmap::json_io {

Mat mat_from_json(const ojson& j) {
  if (!j.is_array() || j.empty())
    throw ParseError("matrix must be a nonempty array of rows");
  const std::size_t rows = j.size();
  const std::size_t cols = j[0].is_array() ? j[0].size() : 0;
  if (cols == 0) throw ParseError("matrix rows must be nonempty arrays");
  Mat m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    if (!j[r].is_array() || j[r].size() != cols)
      throw ParseError("matrix is not rectangular");
    for (std::size_t c = 0; c < cols; ++c) {
      const auto& e = j[r][c];
      if (e.is_number()) {
        m(r, c) = e.get<double>();  // bare reals allowed for convenience
      } else if (e.is_array() && e.size() == 2 && e[0].is_number() &&
                 e[1].is_number()) {
        m(r, c) = cplx(e[0].get<double>(), e[1].get<double>());
      } else {
        throw ParseError("matrix entries must be numbers or [re, im] pairs");
      }
    }
  }
  return m;
}

ojson mat_to_json(const Mat& m) {
  ojson rows = ojson::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    ojson row = ojson::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      row.push_back(ojson::array({m(r, c).real(), m(r, c).imag()}));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<cplx> coeffs_from_json(const ojson& j) {
  if (!j.is_array()) throw ParseError("coefficients must be an array");
  std::vector<cplx> out;
  for (const auto& e : j) {
    if (e.is_number()) {
      out.emplace_back(e.get<double>(), 0.0);
    } else if (e.is_array() && e.size() == 2) {
      out.emplace_back(e[0].get<double>(), e[1].get<double>());
    } else {
      throw ParseError("coefficients must be numbers or [re, im] pairs");
    }
  }
  return out;
}

ojson coeffs_to_json(const std::vector<cplx>& v) {
  ojson out = ojson::array();
  for (const cplx& z : v) out.push_back(ojson::array({z.real(), z.imag()}));
  return out;
}

algebra::Perm perm_from_json(const ojson& j) {
  if (!j.is_array()) throw ParseError("permutation must be an array");
  algebra::Perm p;
  for (const auto& e : j) {
    if (!e.is_number_integer()) throw ParseError("permutation entries must be integers");
    p.push_back(e.get<int>());
  }
  if (!algebra::is_bijection(p)) throw ParseError("permutation is not a bijection");
  return p;
}

ojson parse(const std::string& text) {
  try {
    return ojson::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError("at byte " + std::to_string(e.byte) + ": " + e.what());
  }
}

ojson load_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

namespace {

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void dump_rec(const ojson& j, std::string& out, int indent, int depth) {
  const std::string pad(static_cast<std::size_t>(indent) * depth, ' ');
  const std::string pad_in(static_cast<std::size_t>(indent) * (depth + 1), ' ');
  switch (j.type()) {
    case ojson::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ",\n";
        first = false;
        out += pad_in + ojson(it.key()).dump() + ": ";
        dump_rec(it.value(), out, indent, depth + 1);
      }
      out += "\n" + pad + "}";
      return;
    }
    case ojson::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      // Arrays of scalars stay on one line; nested structures get split.
      bool flat = true;
      for (const auto& e : j)
        if (e.is_object() || (e.is_array() && !e.empty() && e[0].is_structured()))
          flat = false;
      if (flat && j.size() <= 64) {
        out += "[";
        bool first = true;
        for (const auto& e : j) {
          if (!first) out += ", ";
          first = false;
          dump_rec(e, out, indent, depth);
        }
        out += "]";
        return;
      }
      out += "[\n";
      bool first = true;
      for (const auto& e : j) {
        if (!first) out += ",\n";
        first = false;
        out += pad_in;
        dump_rec(e, out, indent, depth + 1);
      }
      out += "\n" + pad + "]";
      return;
    }
    case ojson::value_t::number_float:
      out += format_number(j.get<double>());
      return;
    default:
      out += j.dump();
      return;
  }
}

}  // namespace

std::string dump_deterministic(const ojson& j, int indent) {
  std::string out;
  dump_rec(j, out, indent, 0);
  out += "\n";
  return out;
}

std::string digest(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016" PRIx64, h);
  return buf;
}

SemigroupSpec load_semigroup(const ojson& j, double tol, std::size_t cap) {
  const int given = j.contains("table") + j.contains("perm_generators") +
                    j.contains("matrix_generators");
  if (given != 1)
    throw ParseError(
        "need exactly one of table / perm_generators / matrix_generators");

  SemigroupSpec out;
  if (j.contains("table")) {
    const auto& t = j["table"];
    if (!t.is_array() || t.empty()) throw ParseError("table must be a square array");
    const int n = static_cast<int>(t.size());
    out.table.n = n;
    for (const auto& row : t) {
      if (!row.is_array() || static_cast<int>(row.size()) != n)
        throw ParseError("table must be square");
      std::vector<int> r;
      for (const auto& e : row) {
        const int v = e.get<int>();
        if (v < 0 || v >= n) throw ParseError("table entry out of range");
        r.push_back(v);
      }
      out.table.mul.push_back(std::move(r));
    }
    // A bare table gets every element as its own generator; words and
    // provenance are the elements themselves.
    for (int i = 0; i < n; ++i) {
      out.table.gens.push_back(i);
      out.table.provenance.push_back({-1, i});
      out.table.words.push_back("e" + std::to_string(i));
    }
    if (!algebra::classify(out.table).associative)
      throw ParseError("table is not associative");
  } else if (j.contains("perm_generators")) {
    std::vector<algebra::Perm> gens;
    for (const auto& p : j["perm_generators"]) gens.push_back(perm_from_json(p));
    auto closed = algebra::close_perm_generators(gens, cap);
    out.table = std::move(closed.table);
    out.perms = std::move(closed.elems);
  } else {
    std::vector<Mat> gens;
    for (const auto& m : j["matrix_generators"]) gens.push_back(mat_from_json(m));
    auto closed = algebra::close_matrix_generators(gens, tol, cap);
    out.table = std::move(closed.table);
    out.mats = std::move(closed.elems);
  }
  return out;
}

rep::CoupledRep load_coupled_rep(const ojson& j, double tol, std::size_t cap) {
  if (!j.contains("u_generators") || !j.contains("v_generators"))
    throw ParseError("coupled_rep needs u_generators and v_generators");
  std::vector<Mat> gu, gv;
  for (const auto& m : j["u_generators"]) gu.push_back(mat_from_json(m));
  for (const auto& m : j["v_generators"]) gv.push_back(mat_from_json(m));
  return rep::coupled_from_generators(gu, gv, tol, cap);
}

conv::GSpace load_gspace(const SemigroupSpec& sg, const ojson& action,
                         const ojson* mu) {
  std::vector<double> weights;
  if (mu != nullptr)
    for (const auto& w : *mu) weights.push_back(w.get<double>());

  if (action.is_string() && action.get<std::string>() == "regular")
    return mu == nullptr ? conv::regular_gspace(sg.table)
                         : conv::make_gspace(
                               sg.table,
                               conv::regular_gspace(sg.table).action, weights);
  if (action.is_object() && action.contains("copies")) {
    const int copies = action["copies"].get<int>();
    conv::GSpace base = conv::free_orbit_sum(sg.table, copies);
    return mu == nullptr ? base
                         : conv::make_gspace(sg.table, base.action, weights);
  }
  if (action.is_object() && action.contains("generator_images")) {
    std::vector<algebra::Perm> imgs;
    for (const auto& p : action["generator_images"])
      imgs.push_back(perm_from_json(p));
    if (imgs.size() != sg.table.gens.size())
      throw ParseError("one permutation image per generator required");
    // Fill images along the closure provenance.
    std::vector<algebra::Perm> full(sg.table.n);
    for (int k = 0; k < sg.table.n; ++k) {
      const auto [parent, gpos] = sg.table.provenance[k];
      full[k] = parent < 0 ? imgs[gpos]
                           : algebra::compose(full[parent], imgs[gpos]);
    }
    return conv::make_gspace(sg.table, full, weights);
  }
  throw ParseError(
      "action must be \"regular\", {\"copies\": k}, or {\"generator_images\": "
      "[...]}");
}

nonuniq::LinearNetwork load_network(const ojson& j) {
  if (!j.contains("layers")) throw ParseError("network needs layers");
  nonuniq::LinearNetwork net;
  for (const auto& m : j["layers"]) net.layers.push_back(mat_from_json(m));
  return net;
}

nonuniq::GatedLayer load_gated_layer(const ojson& j) {
  nonuniq::GatedLayer layer;
  layer.L = mat_from_json(j.at("L"));
  for (const auto& g : j.at("gates")) {
    Mat row = mat_from_json(g);
    if (row.rows() != 1) throw ParseError("gates must be single-row matrices");
    layer.gates.push_back(std::move(row));
  }
  for (const auto& b : j.at("blocks"))
    layer.block_sizes.push_back(b.get<Eigen::Index>());
  layer.sigma = nonuniq::sigma_from_name(j.value("sigma", "identity"));
  return layer;
}

nonuniq::FiniteLearnabilityInstance load_learnability(const ojson& j) {
  nonuniq::FiniteLearnabilityInstance inst;
  for (const auto& s : j.at("f_names")) inst.f_names.push_back(s.get<std::string>());
  for (const auto& s : j.at("gamma_names"))
    inst.gamma_names.push_back(s.get<std::string>());
  for (const auto& row : j.at("R")) {
    std::vector<bool> r;
    for (const auto& e : row) r.push_back(e.get<int>() != 0);
    inst.R.push_back(std::move(r));
  }
  for (const auto& p : j.at("A")) {
    if (!p.is_array() || p.size() != 2)
      throw ParseError("ansatz entries must be [f, gamma] index pairs");
    inst.A.push_back({p[0].get<int>(), p[1].get<int>()});
  }
  for (const auto& h : j.at("H")) inst.H.push_back(h.get<int>());
  return inst;
}

}  // namespace eqmap::json_io
