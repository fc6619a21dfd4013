// Batch front-end: parse a spec file, dispatch the requested audit, emit a
// deterministic report (JSON, or CSV for series), and signal findings via
// the exit code: 0 = done, 2 = non-uniqueness found, 1 = error.

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "eqmap/convergence.hpp"
#include "eqmap/errors.hpp"
#include "eqmap/json_io.hpp"
#include "eqmap/kernels.hpp"

namespace {

using eqmap::CVec;
using eqmap::cplx;
using eqmap::Mat;
using eqmap::json_io::ojson;
namespace algebra = eqmap::algebra;
namespace conv = eqmap::conv;
namespace convergence = eqmap::convergence;
namespace json_io = eqmap::json_io;
namespace linalg = eqmap::linalg;
namespace nonuniq = eqmap::nonuniq;
namespace rep = eqmap::rep;

struct Flags {
  double tol = 1e-9;
  std::uint64_t seed = 0xDECAF;
  std::size_t cap = 10000;
  std::string out;
  std::string format = "json";
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw eqmap::ParseError("cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void emit(const Flags& flags, const std::string& text) {
  if (flags.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(flags.out, std::ios::binary);
  if (!out) throw eqmap::ParseError("cannot write '" + flags.out + "'");
  out << text;
}

std::string csv_num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

ojson perm_json(const algebra::Perm& p) {
  ojson out = ojson::array();
  for (int v : p) out.push_back(v);
  return out;
}

// Signal operator of the group-like form sum_g ell(g) f(hg) / n.
Mat group_like_operator(const algebra::SemigroupTable& t,
                        const std::vector<cplx>& ell) {
  Mat op = Mat::Zero(t.n, t.n);
  for (int h = 0; h < t.n; ++h)
    for (int g = 0; g < t.n; ++g)
      op(h, t.at(h, g)) += ell[g] / static_cast<double>(t.n);
  return op;
}

// Signal operator of the semigroup-like form sum_g ell(g) f(gh) / n.
Mat semigroup_like_operator(const algebra::SemigroupTable& t,
                            const std::vector<cplx>& ell) {
  Mat op = Mat::Zero(t.n, t.n);
  for (int h = 0; h < t.n; ++h)
    for (int g = 0; g < t.n; ++g)
      op(h, t.at(g, h)) += ell[g] / static_cast<double>(t.n);
  return op;
}

int run_close(const Flags& flags, const ojson& spec, ojson& results) {
  const auto sg = json_io::load_semigroup(spec, flags.tol, flags.cap);
  const auto cls = algebra::classify(sg.table);
  results["order"] = sg.table.n;
  results["generators"] = static_cast<int>(sg.table.gens.size());
  results["associative"] = cls.associative;
  results["is_monoid"] = cls.is_monoid;
  results["is_group"] = cls.is_group;
  results["is_abelian"] = cls.is_abelian;
  results["identity"] = cls.identity;
  ojson words = ojson::array();
  for (const auto& w : sg.table.words) words.push_back(w);
  results["words"] = std::move(words);
  return 0;
}

int run_decompose(const Flags& flags, const ojson& spec, ojson& results) {
  const auto sg = json_io::load_semigroup(spec, flags.tol, flags.cap);
  if (sg.mats.empty())
    throw eqmap::ParseError("decompose needs matrix_generators");
  rep::Rep r{sg.table, sg.mats};
  const auto dec = rep::decompose(r, flags.tol, flags.seed);
  ojson blocks = ojson::array();
  for (const auto& b : dec.blocks)
    blocks.push_back(ojson{{"irrep_dim", b.w}, {"multiplicity", b.m}});
  results["blocks"] = std::move(blocks);
  results["dimension"] = static_cast<int>(r.dim());
  results["Q"] = json_io::mat_to_json(dec.Q);
  return 0;
}

int run_intertwiners(const Flags& flags, const ojson& spec, ojson& results) {
  const auto c = json_io::load_coupled_rep(spec, flags.tol, flags.cap);
  const auto basis = rep::intertwiner_basis(c.U, c.V, flags.tol);
  results["dim"] = static_cast<int>(basis.dim());
  ojson mats = ojson::array();
  for (const Mat& b : basis.basis) mats.push_back(json_io::mat_to_json(b));
  results["basis"] = std::move(mats);
  return 0;
}

int run_pair_space(const Flags& flags, const ojson& spec, ojson& results) {
  const auto c = json_io::load_coupled_rep(spec, flags.tol, flags.cap);
  const auto direct = rep::pair_symmetry_space(c, flags.tol);
  const auto predicted = rep::predicted_pair_space(c, flags.tol, flags.seed);
  results["dim"] = static_cast<int>(direct.dim());
  results["predicted_dim"] = static_cast<int>(predicted.space.dim());
  results["principal_angle"] =
      linalg::principal_angle(direct, predicted.space);
  return 0;
}

int run_nonuniq(const Flags& flags, const ojson& spec, ojson& results) {
  const auto c = json_io::load_coupled_rep(spec, flags.tol, flags.cap);
  const auto pair = rep::pair_symmetry_space(c, flags.tol);
  const auto algebra_span =
      linalg::subspace_from_span(rep::coupled_images(c), flags.tol);
  const auto predicted = rep::predicted_pair_space(c, flags.tol, flags.seed);

  results["pair_dim"] = static_cast<int>(pair.dim());
  results["algebra_span_dim"] = static_cast<int>(algebra_span.dim());
  results["principal_angle_vs_predicted"] =
      linalg::principal_angle(pair, predicted.space);

  ojson degen;
  auto block_json = [&](const rep::IsotypicDecomposition& dec, int idx) {
    return ojson{{"irrep_dim", dec.blocks[idx].w},
                 {"multiplicity", dec.blocks[idx].m}};
  };
  ojson u_only = ojson::array(), v_only = ojson::array(),
        matched = ojson::array();
  for (int i : predicted.degeneracy.u_only)
    u_only.push_back(block_json(predicted.dec_u, i));
  for (int j : predicted.degeneracy.v_only)
    v_only.push_back(block_json(predicted.dec_v, j));
  for (const auto& m : predicted.degeneracy.matched)
    matched.push_back(ojson{{"u_block", m.u_block}, {"v_block", m.v_block}});
  degen["only_in_u"] = std::move(u_only);
  degen["only_in_v"] = std::move(v_only);
  degen["matched"] = std::move(matched);
  results["degeneracy"] = std::move(degen);

  const bool found = pair.dim() > algebra_span.dim();
  results["nonuniqueness_found"] = found;
  if (found) {
    // Witness: the pair-space direction sticking furthest out of the span
    // of the coupled images and their algebra.
    double best = -1.0;
    Mat witness;
    for (const Mat& b : pair.basis) {
      const double d = algebra_span.distance(b);
      if (d > best) {
        best = d;
        witness = b;
      }
    }
    const Eigen::Index du = c.U.dim();
    results["witness"] = ojson{
        {"distance_from_algebra_span", best},
        {"t_u", json_io::mat_to_json(witness.topLeftCorner(du, du))},
        {"t_v", json_io::mat_to_json(witness.bottomRightCorner(
                    witness.rows() - du, witness.cols() - du))}};
  }
  return found ? 2 : 0;
}

int run_conv_audit(const Flags& flags, const ojson& spec, ojson& results) {
  const auto sg = json_io::load_semigroup(spec.at("group"), flags.tol, flags.cap);
  const ojson mu_x = spec.contains("mu_x") ? spec["mu_x"] : ojson();
  const ojson mu_y = spec.contains("mu_y") ? spec["mu_y"] : ojson();
  const auto gx = json_io::load_gspace(sg, spec.at("x"),
                                       mu_x.is_null() ? nullptr : &mu_x);
  const auto gy = json_io::load_gspace(sg, spec.at("y"),
                                       mu_y.is_null() ? nullptr : &mu_y);

  bool free_coords = true;
  for (std::size_t o = 0; o < gx.orbits.size(); ++o)
    free_coords = free_coords && gx.orbit_free(static_cast<int>(o));
  for (std::size_t p = 0; p < gy.orbits.size(); ++p)
    free_coords = free_coords && gy.orbit_free(static_cast<int>(p));
  results["free_orbits"] = free_coords;
  if (free_coords) {
    const auto comp = conv::conv_completeness_check(gx, gy, flags.tol);
    results["equivariant_basis_dim"] = static_cast<int>(comp.basis_dim);
    results["kernel_params"] = static_cast<int>(comp.kernel_params);
    results["complete"] = comp.complete;
    results["completeness_residual"] = comp.residual;
  } else {
    // Kernel coordinates need free orbits; the enumeration below does not.
    results["equivariant_basis_dim"] = static_cast<int>(
        conv::equivariant_operator_basis(gx, gy, flags.tol).dim());
  }

  const auto enumr = conv::symmetry_enumeration(gx, gy, flags.seed, flags.tol);
  results["survivors"] = static_cast<int>(enumr.pairs.size());
  results["g_image_size"] = static_cast<int>(enumr.g_image.size());
  results["matches_g_image"] = enumr.matches_g_image;
  results["closed_under_composition"] = enumr.closed_under_composition;
  ojson pairs = ojson::array();
  for (const auto& [tx, ty] : enumr.pairs)
    pairs.push_back(ojson{{"t_x", perm_json(tx)}, {"t_y", perm_json(ty)}});
  results["pairs"] = std::move(pairs);
  return enumr.matches_g_image ? 0 : 2;
}

int run_semiconv_audit(const Flags& flags, const ojson& spec, ojson& results) {
  const auto sg = json_io::load_semigroup(spec, flags.tol, flags.cap);
  const int n = sg.table.n;
  linalg::NormalSampler rng(flags.seed);
  std::vector<cplx> ell;
  CVec f(n);
  for (int i = 0; i < n; ++i) ell.push_back(cplx(rng(), 0.0));
  for (int i = 0; i < n; ++i) f(i) = cplx(rng(), 0.0);

  const Mat gl = group_like_operator(sg.table, ell);
  const Mat sl = semigroup_like_operator(sg.table, ell);
  std::vector<std::pair<Mat, Mat>> candidates;
  for (const Mat& m : conv::right_mult_actions(sg.table))
    candidates.push_back({m, m});

  const auto gl_set = conv::operator_equivariance_set(gl, candidates, 1e-12);
  const auto sl_set = conv::operator_equivariance_set(sl, candidates, 1e-12);

  auto residuals_json = [](const conv::EquivSetReport& r) {
    ojson out = ojson::array();
    for (double v : r.residuals) out.push_back(v);
    return out;
  };
  results["right_mult_count"] = static_cast<int>(candidates.size());
  results["semigroup_like_survivors"] = static_cast<int>(sl_set.survivors.size());
  results["group_like_survivors"] = static_cast<int>(gl_set.survivors.size());
  results["semigroup_like_residuals"] = residuals_json(sl_set);
  results["group_like_residuals"] = residuals_json(gl_set);
  ojson sample = ojson::array();
  for (int i = 0; i < n; ++i) sample.push_back(ell[i].real());
  results["ell"] = std::move(sample);

  const bool split = sl_set.survivors.size() == candidates.size() &&
                     gl_set.survivors.size() < candidates.size();
  results["split_found"] = split;
  return split ? 2 : 0;
}

int run_net_audit(const Flags& flags, const ojson& spec, ojson& results) {
  const auto net = json_io::load_network(spec);
  const auto space = nonuniq::network_symmetry_tuple_space(net, flags.tol);
  ojson dims = ojson::array();
  for (Eigen::Index d : space.dims) dims.push_back(static_cast<int>(d));
  results["layer_dims"] = std::move(dims);
  results["tuple_space_dim"] = static_cast<int>(space.dim());
  double worst = 0.0;
  for (const auto& tuple : space.basis)
    worst = std::max(worst, nonuniq::end_to_end_residual(net, tuple));
  results["end_to_end_residual"] = worst;
  const bool beyond_scalars = space.dim() > 1;
  results["nonuniqueness_found"] = beyond_scalars;
  return beyond_scalars ? 2 : 0;
}

int run_tradeoff(const Flags&, const ojson& spec, ojson& results) {
  const auto inst = json_io::load_learnability(spec);
  const auto report = nonuniq::unlearnability_audit(inst);
  results["subset_hypothesis"] = report.subset_hypothesis;
  results["ansatz_closed_under_h"] = report.ansatz_closed_under_h;
  results["symmetry_reflects"] = report.symmetry_reflects;
  ojson flagged = ojson::array();
  for (auto [f, g] : report.unlearnable)
    flagged.push_back(ojson{{"f", inst.f_names[f]}, {"gamma", inst.gamma_names[g]}});
  results["unlearnable"] = std::move(flagged);
  ojson tr = ojson::array();
  for (int g : report.tradeoff) tr.push_back(inst.gamma_names[g]);
  results["tradeoff"] = std::move(tr);
  const bool found = !report.unlearnable.empty() || !report.tradeoff.empty();
  return found ? 2 : 0;
}

int run_converge(const Flags& flags, const ojson& spec, ojson& results,
                 std::string& csv) {
  const std::string experiment = spec.at("experiment").get<std::string>();
  auto load_tuple = [](const ojson& j) {
    std::vector<Mat> out;
    for (const auto& m : j) out.push_back(json_io::mat_from_json(m));
    return out;
  };

  if (experiment == "generators") {
    const auto limit = load_tuple(spec.at("limit_generators"));
    std::vector<std::vector<Mat>> steps;
    for (const auto& s : spec.at("steps")) steps.push_back(load_tuple(s));
    const int wordlen = spec.value("max_wordlen", 6);
    const auto audit =
        convergence::generator_convergence_audit(steps, limit, wordlen);
    results["experiment"] = experiment;
    results["word_count"] = static_cast<int>(audit.words.size());
    results["generators_converging"] = audit.generators_converging;
    ojson sup = ojson::array();
    for (double v : audit.sup_deviation) sup.push_back(v);
    results["sup_deviation"] = std::move(sup);
    csv = "step,sup_deviation\n";
    for (std::size_t i = 0; i < audit.sup_deviation.size(); ++i)
      csv += std::to_string(i) + "," + csv_num(audit.sup_deviation[i]) + "\n";
    return 0;
  }
  if (experiment == "geometric") {
    const double window = spec.value("window", 10.0);
    const int wordlen = spec.value("max_wordlen", 8);
    const auto limit_cloud = convergence::truncated_semigroup_cloud(
        load_tuple(spec.at("limit_generators")), window, wordlen);
    std::vector<convergence::MatCloud> clouds;
    for (const auto& s : spec.at("steps"))
      clouds.push_back(convergence::truncated_semigroup_cloud(
          load_tuple(s), window, wordlen));
    const auto audit =
        convergence::geometric_convergence_audit(clouds, limit_cloud);
    results["experiment"] = experiment;
    results["limit_cloud_size"] = static_cast<int>(limit_cloud.points.size());
    results["limit_closure_residual"] =
        convergence::closure_residual(limit_cloud);
    ojson c1 = ojson::array(), c2 = ojson::array();
    for (double v : audit.cond1_sup) c1.push_back(v);
    for (double v : audit.cond2_residual) c2.push_back(v);
    results["cond1_sup"] = std::move(c1);
    results["cond2_residual"] = std::move(c2);
    csv = "step,limit_to_step,step_to_limit\n";
    for (std::size_t i = 0; i < audit.cond1_sup.size(); ++i)
      csv += std::to_string(i) + "," + csv_num(audit.cond1_sup[i]) + "," +
             csv_num(audit.cond2_residual[i]) + "\n";
    return 0;
  }
  throw eqmap::ParseError("unknown experiment '" + experiment + "'");
}

struct SpiralArgs {
  double eps = 0.02;
  double t_min = -200.0, t_max = 200.0;
  int samples = 200000;
  std::string grid_kind = "annulus";
  double r0 = 0.5, r1 = 2.0;
  int n_radial = 7, n_angular = 16, n_circle = 1000;
};

int run_spiral(const SpiralArgs& args, ojson& results, std::string& csv) {
  std::vector<Eigen::Vector2d> grid;
  if (args.grid_kind == "annulus") {
    grid = convergence::annulus_grid(args.r0, args.r1, args.n_radial,
                                     args.n_angular);
  } else if (args.grid_kind == "circle") {
    grid = convergence::circle_grid(args.r0, args.n_circle);
  } else {
    throw eqmap::ParseError("grid must be annulus or circle");
  }
  const auto report = convergence::spiral_orbit_demo(
      args.eps, args.t_min, args.t_max, args.samples, grid);
  results["eps"] = args.eps;
  results["t_min"] = args.t_min;
  results["t_max"] = args.t_max;
  results["samples"] = args.samples;
  results["grid_points"] = static_cast<int>(grid.size());
  results["coverage"] = report.coverage;
  results["collapse"] = report.collapse;
  csv = "eps,t_min,t_max,samples,coverage,collapse\n" + csv_num(args.eps) +
        "," + csv_num(args.t_min) + "," + csv_num(args.t_max) + "," +
        std::to_string(args.samples) + "," + csv_num(report.coverage) + "," +
        csv_num(report.collapse) + "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"equivariant-map space and symmetry non-uniqueness audits"};
  app.require_subcommand(1);

  Flags flags;
  app.add_option("--tol", flags.tol, "numeric tolerance");
  app.add_option("--seed", flags.seed, "random seed");
  app.add_option("--cap", flags.cap, "closure cap");
  app.add_option("--out", flags.out, "output path (stdout when absent)");
  app.add_option("--format", flags.format, "json|csv")
      ->check(CLI::IsMember({"json", "csv"}));

  std::string spec_path;
  SpiralArgs spiral;
  std::vector<std::string> file_commands = {
      "close",      "decompose",      "intertwiners", "pair-space", "nonuniq",
      "conv-audit", "semiconv-audit", "net-audit",    "tradeoff",   "converge"};
  for (const auto& name : file_commands) {
    auto* sub = app.add_subcommand(name);
    sub->fallthrough();  // so --tol etc. also parse after the subcommand
    sub->add_option("spec", spec_path, "spec file")->required();
  }
  auto* sp = app.add_subcommand("spiral");
  sp->fallthrough();
  sp->add_option("--eps", spiral.eps);
  sp->add_option("--tmin", spiral.t_min);
  sp->add_option("--tmax", spiral.t_max);
  sp->add_option("--samples", spiral.samples);
  sp->add_option("--grid", spiral.grid_kind)
      ->check(CLI::IsMember({"annulus", "circle"}));
  sp->add_option("--r0", spiral.r0);
  sp->add_option("--r1", spiral.r1);
  sp->add_option("--nr", spiral.n_radial);
  sp->add_option("--na", spiral.n_angular);
  sp->add_option("--nc", spiral.n_circle);

  CLI11_PARSE(app, argc, argv);
  const std::string command = app.get_subcommands().front()->get_name();

  const auto started = std::chrono::steady_clock::now();
  try {
    ojson report;
    report["command"] = command;
    std::string raw;
    ojson spec;
    if (command != "spiral") {
      raw = slurp(spec_path);
      spec = json_io::parse(raw);
      report["inputs_digest"] = json_io::digest(raw);
    }
    report["tol"] = flags.tol;
    report["seed"] = flags.seed;
    report["cap"] = flags.cap;

    ojson results;
    std::string csv;
    int code = 0;
    if (command == "close") code = run_close(flags, spec, results);
    else if (command == "decompose") code = run_decompose(flags, spec, results);
    else if (command == "intertwiners") code = run_intertwiners(flags, spec, results);
    else if (command == "pair-space") code = run_pair_space(flags, spec, results);
    else if (command == "nonuniq") code = run_nonuniq(flags, spec, results);
    else if (command == "conv-audit") code = run_conv_audit(flags, spec, results);
    else if (command == "semiconv-audit") code = run_semiconv_audit(flags, spec, results);
    else if (command == "net-audit") code = run_net_audit(flags, spec, results);
    else if (command == "tradeoff") code = run_tradeoff(flags, spec, results);
    else if (command == "converge") code = run_converge(flags, spec, results, csv);
    else if (command == "spiral") code = run_spiral(spiral, results, csv);

    if (flags.format == "csv") {
      if (csv.empty())
        throw eqmap::ParseError("csv output only exists for series commands");
      emit(flags, csv);
      return code;
    }
    report["results"] = std::move(results);
    report["exit_code"] = code;
    report["wall_ms"] = std::chrono::duration_cast<std::chrono::milliseconds>(
                            std::chrono::steady_clock::now() - started)
                            .count();
    emit(flags, json_io::dump_deterministic(report));
    return code;
  } catch (const eqmap::Error& e) {
    std::cerr << command << ": " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << command << ": " << e.what() << "\n";
    return 1;
  }
}
