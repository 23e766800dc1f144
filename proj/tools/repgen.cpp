// repgen: build, check and compare explicit generator matrices.

#include "repgen/assembler.hpp"
#include "repgen/error.hpp"
#include "repgen/oracle.hpp"
#include "repgen/repfile.hpp"
#include "repgen/root_data.hpp"
#include "repgen/weight_system.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

using nlohmann::json;
using namespace repgen;

constexpr int kExitOk = 0;
constexpr int kExitCheck = 1;
constexpr int kExitInput = 2;
constexpr int kExitInconsistent = 3;

struct AlgebraFlags {
  std::string algebra;
  std::string cartan;
  std::string highest;
  double t = 0.0;
  bool classical = false;
};

struct Flags {
  AlgebraFlags alg;
  std::string out;
  std::string tau;
  std::string layout = "auto";
  std::string roots;
  std::vector<std::string> files;
  double tol = 1e-9;
};

std::optional<long> dimension_cap_override() {
  const char* env = std::getenv("REPGEN_DIM_CAP");
  if (!env || !*env) return std::nullopt;
  std::size_t pos = 0;
  long v = 0;
  try {
    v = std::stol(env, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != std::string(env).size() || v <= 0)
    throw Error(ErrorCode::InvalidArgument, "REPGEN_DIM_CAP must be a positive integer");
  return v;
}

CartanData algebra_from(const AlgebraFlags& f) {
  if (f.algebra.empty() == f.cartan.empty()) throw Error(ErrorCode::InvalidArgument, "give exactly one of --algebra or --cartan");
  return f.algebra.empty() ? build_cartan_data(parse_cartan_matrix(f.cartan)) : build_cartan_data(f.algebra);
}

HighestWeight highest_from(const AlgebraFlags& f, const CartanData& cd) {
  if (f.highest.empty()) throw Error(ErrorCode::InvalidArgument, "--highest is required");
  HighestWeight hw = parse_highest_weight(f.highest);
  if (hw.size() != cd.rank) throw Error(ErrorCode::InvalidArgument, "--highest needs one label per simple root");
  return hw;
}

QContext context_from(const AlgebraFlags& f, bool t_given) {
  if (f.classical == t_given) throw Error(ErrorCode::InvalidArgument, "give exactly one of --t or --classical");
  return f.classical ? QContext::classical_limit() : QContext::deformed(f.t);
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::istringstream in(text);
  in.imbue(std::locale::classic());
  std::string tok;
  while (std::getline(in, tok, ',')) {
    std::istringstream ts(tok);
    ts.imbue(std::locale::classic());
    double v = 0.0;
    ts >> v;
    if (ts.fail() || !(ts >> std::ws).eof()) throw Error(ErrorCode::InvalidArgument, "cannot parse number '" + tok + "'");
    out.push_back(v);
  }
  return out;
}

json residual_json(const ResidualReport& r) {
  return {{"residuals", r.residuals}, {"max_residual", r.max_residual()}, {"tolerance", r.tolerance}, {"passed", r.passed()}};
}

WriteOptions write_options(const Flags& f) {
  WriteOptions o;
  if (f.layout == "dense")
    o.layout = MatrixLayout::Dense;
  else if (f.layout == "sparse")
    o.layout = MatrixLayout::Sparse;
  else if (f.layout == "auto")
    o.layout = MatrixLayout::Auto;
  else
    throw Error(ErrorCode::InvalidArgument, "--layout must be dense, sparse or auto");
  return o;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

int finish_build(const Flags& f, const Representation& rep, const Provenance& prov, json out,
                 std::chrono::steady_clock::time_point start) {
  const ResidualReport r = verify_defining_relations(rep, f.tol);
  out["dimension"] = rep.dimension();
  out.update(residual_json(r));
  if (!f.out.empty()) {
    save_representation(f.out, rep, prov, write_options(f));
    out["out"] = f.out;
    std::cerr << "wrote " << f.out << "\n";
  }
  std::cerr << "built dimension " << rep.dimension() << " in " << seconds_since(start) << " s\n";
  std::cout << out.dump() << "\n";
  return r.passed() ? kExitOk : kExitCheck;
}

int cmd_build(const Flags& f, bool t_given) {
  const auto start = std::chrono::steady_clock::now();
  const CartanData cd = algebra_from(f.alg);
  const HighestWeight hw = highest_from(f.alg, cd);
  const QContext ctx = context_from(f.alg, t_given);
  AssembleOptions opts;
  if (auto cap = dimension_cap_override()) opts.dimension_cap = *cap;
  const Representation rep = assemble(cd, hw, ctx, opts);
  Provenance prov;
  prov.builder = "scheme";
  prov.tolerances = {{"residual", opts.tolerances.residual},
                     {"orthogonality", opts.tolerances.orthogonality},
                     {"degeneration", opts.tolerances.degeneration},
                     {"rank", opts.tolerances.rank},
                     {"verify", f.tol}};
  json out = {{"command", "build"}, {"builder", "scheme"}};
  json mixing = json::array();
  for (const auto& m : rep.mixing)
    mixing.push_back({{"root", m.root + 1},
                      {"observables", m.observables},
                      {"orthogonality_residual", m.orthogonality_residual},
                      {"reconstruction_residual", m.reconstruction_residual}});
  out["mixing"] = mixing;
  return finish_build(f, rep, prov, out, start);
}

int cmd_oracle_build(const Flags& f, bool t_given) {
  const auto start = std::chrono::steady_clock::now();
  const CartanData cd = algebra_from(f.alg);
  const HighestWeight hw = highest_from(f.alg, cd);
  const QContext ctx = context_from(f.alg, t_given);
  OracleOptions opts;
  if (auto cap = dimension_cap_override()) opts.dimension_cap = *cap;
  const OracleResult res = oracle_build_detailed(cd, hw, ctx, opts);
  Provenance prov;
  prov.builder = "oracle";
  prov.tolerances = {{"rank_threshold", opts.rank_threshold}, {"verify", f.tol}};
  json out = {{"command", "oracle-build"}, {"builder", "oracle"}};
  bool ranks_ok = true;
  json grams = json::array();
  for (const auto& g : res.gram_blocks) {
    ranks_ok = ranks_ok && g.rank == g.multiplicity;
    grams.push_back({{"weight", g.weight}, {"level", g.level}, {"candidates", g.words.size()}, {"rank", g.rank},
                     {"multiplicity", g.multiplicity}});
  }
  out["gram_blocks"] = grams;
  out["ranks_match"] = ranks_ok;
  const int code = finish_build(f, res.rep, prov, out, start);
  return ranks_ok ? code : kExitCheck;
}

int cmd_verify(const Flags& f) {
  if (f.files.size() != 1) throw Error(ErrorCode::InvalidArgument, "verify takes one file");
  const RepFile file = load_representation(f.files[0]);
  const ResidualReport r = verify_defining_relations(file.rep, f.tol);
  json out = {{"command", "verify"}, {"file", f.files[0]}, {"builder", file.provenance.builder},
              {"dimension", file.rep.dimension()}};
  out.update(residual_json(r));
  std::cout << out.dump() << "\n";
  return r.passed() ? kExitOk : kExitCheck;
}

int cmd_compare(const Flags& f) {
  if (f.files.size() != 2) throw Error(ErrorCode::InvalidArgument, "compare takes two files");
  const RepFile a = load_representation(f.files[0]);
  const RepFile b = load_representation(f.files[1]);
  const GaugeComparison g = gauge_equivalent(a.rep, b.rep, f.tol);
  json evidence = json::array();
  for (const auto& e : g.evidence) evidence.push_back({{"word", e.word}, {"a", e.a}, {"b", e.b}});
  json out = {{"command", "compare"}, {"files", f.files}, {"equivalent", g.equivalent},
              {"max_deviation", g.max_deviation}, {"tolerance", f.tol}, {"evidence", evidence}};
  if (!g.reason.empty()) out["reason"] = g.reason;
  std::cout << out.dump() << "\n";
  return g.equivalent ? kExitOk : kExitCheck;
}

int cmd_character(const Flags& f) {
  const CartanData cd = algebra_from(f.alg);
  const HighestWeight hw = highest_from(f.alg, cd);
  if (f.tau.empty()) throw Error(ErrorCode::InvalidArgument, "--tau is required");
  const std::vector<double> tau = parse_list(f.tau);
  if (static_cast<int>(tau.size()) != cd.rank) throw Error(ErrorCode::InvalidArgument, "--tau needs one value per simple root");
  WeightSystemOptions wopts;
  if (auto cap = dimension_cap_override()) wopts.dimension_cap = *cap;
  const WeightSystem ws = weight_multiplicities(cd, hw, wopts);
  const double weyl = character_value_regular(cd, hw, tau, weyl_group(cd));
  const double sum = character_from_weights(ws, tau);
  double worst = std::fabs(sum - weyl) / std::fabs(weyl);
  json out = {{"command", "character"}, {"tau", tau}, {"dimension", ws.dimension}, {"weyl", weyl}, {"weights_sum", sum}};
  if (cd.label == "B2") {
    const double closed = b2_character_closed_form_regular(hw.labels[0], hw.labels[1], tau[0], tau[1]);
    out["closed_form"] = closed;
    worst = std::max(worst, std::fabs(closed - weyl) / std::fabs(weyl));
  }
  out["max_relative_deviation"] = worst;
  out["tolerance"] = f.tol;
  out["passed"] = worst < f.tol;
  std::cout << out.dump() << "\n";
  return worst < f.tol ? kExitOk : kExitCheck;
}

int cmd_branch(const Flags& f) {
  const CartanData cd = algebra_from(f.alg);
  const HighestWeight hw = highest_from(f.alg, cd);
  WeightSystemOptions wopts;
  if (auto cap = dimension_cap_override()) wopts.dimension_cap = *cap;
  const WeightSystem ws = weight_multiplicities(cd, hw, wopts);
  std::vector<std::pair<int, int>> pairs;
  if (!f.roots.empty()) {
    const auto r = parse_list(f.roots);
    if (r.size() != 2) throw Error(ErrorCode::InvalidArgument, "--roots takes two indices");
    pairs.emplace_back(static_cast<int>(r[0]) - 1, static_cast<int>(r[1]) - 1);
  } else {
    for (int i = 0; i < cd.rank; ++i)
      for (int j = i + 1; j < cd.rank; ++j)
        if (cd.cartan[i][j] != 0) pairs.emplace_back(i, j);
  }
  if (pairs.empty()) throw Error(ErrorCode::InvalidArgument, "algebra has no adjacent pair of roots");
  bool ok = true;
  json tables = json::array();
  for (auto [i, j] : pairs) {
    const auto comps = branch_to_rank2(ws, i, j);
    long total = 0;
    json rows = json::array();
    for (const auto& c : comps) {
      total += c.multiplicity * c.dimension;
      rows.push_back({{"highest", c.highest}, {"multiplicity", c.multiplicity}, {"dimension", c.dimension}});
    }
    ok = ok && total == ws.dimension;
    tables.push_back({{"roots", {i + 1, j + 1}}, {"components", rows}, {"total_dimension", total}});
  }
  json out = {{"command", "branch"}, {"dimension", ws.dimension}, {"tables", tables}, {"passed", ok}};
  std::cout << out.dump() << "\n";
  return ok ? kExitOk : kExitCheck;
}

int exit_code_for(ErrorCode c) {
  switch (c) {
    case ErrorCode::InconsistentSystem:
      return kExitInconsistent;
    case ErrorCode::DegenerateMultiplicity:
    case ErrorCode::RankMismatch:
    case ErrorCode::NumericallySingularGram:
      return kExitCheck;
    default:
      return kExitInput;
  }
}

void add_algebra_flags(CLI::App* sub, Flags& f) {
  sub->add_option("--algebra", f.alg.algebra, "named algebra, e.g. B2");
  sub->add_option("--cartan", f.alg.cartan, "Cartan matrix rows, e.g. \"2,-1;-1,2\"");
  sub->add_option("--highest", f.alg.highest, "Dynkin labels of the highest weight, e.g. 2,1");
}

void add_deformation_flags(CLI::App* sub, Flags& f) {
  sub->add_option("--t", f.alg.t, "deformation parameter, q = exp(t)");
  sub->add_flag("--classical", f.alg.classical, "undeformed algebra");
}

}  // namespace

int main(int argc, char** argv) {
  std::locale::global(std::locale::classic());
  Flags f;
  CLI::App app{"repgen: explicit generator matrices of irreducible representations"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kToolVersion));

  auto* build = app.add_subcommand("build", "build with the string scheme");
  auto* oracle = app.add_subcommand("oracle-build", "build with the independent Shapovalov construction");
  for (auto* sub : {build, oracle}) {
    add_algebra_flags(sub, f);
    add_deformation_flags(sub, f);
    sub->add_option("--out", f.out, "output file");
    sub->add_option("--layout", f.layout, "matrix layout: auto, dense or sparse");
    sub->add_option("--tol", f.tol, "tolerance for the relation check");
  }
  auto* verify = app.add_subcommand("verify", "check the defining relations of a file");
  verify->add_option("file", f.files, "representation file")->required();
  verify->add_option("--tol", f.tol, "tolerance");
  auto* compare = app.add_subcommand("compare", "test two files for gauge equivalence");
  compare->add_option("files", f.files, "two representation files")->required()->expected(2);
  compare->add_option("--tol", f.tol, "tolerance");
  auto* character = app.add_subcommand("character", "evaluate the character at tau");
  add_algebra_flags(character, f);
  character->add_option("--tau", f.tau, "comma-separated tau values");
  character->add_option("--tol", f.tol, "tolerance");
  auto* branch = app.add_subcommand("branch", "branching to rank-2 subalgebras");
  add_algebra_flags(branch, f);
  branch->add_option("--roots", f.roots, "1-based pair of root indices, e.g. 1,2");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::cout << json{{"error", "InvalidArgument"}, {"message", e.what()}}.dump() << "\n";
    return kExitInput;
  }

  try {
    if (*build) return cmd_build(f, build->count("--t") > 0);
    if (*oracle) return cmd_oracle_build(f, oracle->count("--t") > 0);
    if (*verify) return cmd_verify(f);
    if (*compare) return cmd_compare(f);
    if (*character) return cmd_character(f);
    if (*branch) return cmd_branch(f);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    std::cout << json{{"error", to_string(e.code())}, {"message", e.what()}}.dump() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    std::cout << json{{"error", "InvalidArgument"}, {"message", e.what()}}.dump() << "\n";
    return kExitInput;
  }
  return kExitInput;
}
