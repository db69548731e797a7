#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "symreeb/advect.hpp"
#include "symreeb/circulation.hpp"
#include "symreeb/equivalence.hpp"
#include "symreeb/error.hpp"
#include "symreeb/freezing.hpp"
#include "symreeb/invariants.hpp"
#include "symreeb/mesh.hpp"
#include "symreeb/reeb.hpp"

#ifdef SYMREEB_WITH_SELFTEST
#include "acceptance.hpp"
#endif

using namespace symreeb;

namespace {

constexpr int kUsageExit = 64;

struct RunConfig {
  std::string command;
  std::vector<std::string> inputs;
  std::string format;  // input format override: json or off
  Tolerances tol;
  int levels = 64;
  double perturb = 0.0;
  std::string jsonOut;
  std::string dotOut;
  std::string csvOut;
  std::string output;  // advect result
  std::string group = "sdiff";
  bool cosets = false;
  int lmax = 4;
  std::uint64_t seed = 20240601;
  std::vector<int> criteria;
  bool verbose = false;
};

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write '" + path + "'");
  out << text;
  if (!out) throw Error(ErrorCode::Io, "write failed for '" + path + "'");
}

TriMeshField load(const RunConfig& cfg, const std::string& path) {
  TriMeshField m;
  if (cfg.format.empty()) {
    m = load_mesh_file(path);
  } else {
    m = load_mesh(read_file(path), cfg.format == "off" ? InputFormat::Off : InputFormat::Json);
  }
  if (cfg.perturb > 0.0) m = ensure_simple(m, SimplePolicy::perturb(cfg.perturb));
  return m;
}

ReebResult reeb_of(const RunConfig& cfg, const TriMeshField& m) {
  ReebOptions opts;
  opts.interiorLevels = cfg.levels;
  opts.saddleLevels = cfg.levels;
  return build_reeb(m, opts);
}

int count_kind(const SurfaceReport& r, CriticalKind k) {
  int n = 0;
  for (const auto& c : r.criticalPoints) n += c.kind == k;
  return n;
}

int cmd_validate(const RunConfig& cfg) {
  const TriMeshField m = load(cfg, cfg.inputs[0]);
  const SurfaceReport r = validate(m);
  ensure_simple(m, SimplePolicy::reject());
  if (!cfg.jsonOut.empty()) {
    nlohmann::json j;
    j["genus"] = r.genus;
    j["euler_characteristic"] = r.eulerCharacteristic;
    j["total_area"] = r.totalArea;
    j["critical_points"] = nlohmann::json::array();
    for (const auto& c : r.criticalPoints) j["critical_points"].push_back({{"vertex", c.vertex}, {"kind", to_string(c.kind)}});
    write_file(cfg.jsonOut, j.dump(2) + "\n");
  }
  std::cout << "valid: genus " << r.genus << ", area " << fmt(r.totalArea) << ", "
            << count_kind(r, CriticalKind::Minimum) << " minima, " << count_kind(r, CriticalKind::Saddle)
            << " saddles, " << count_kind(r, CriticalKind::Maximum) << " maxima\n";
  return 0;
}

int cmd_reeb(const RunConfig& cfg) {
  const TriMeshField m = load(cfg, cfg.inputs[0]);
  const auto g = reeb_of(cfg, m).graph;
  if (!cfg.jsonOut.empty()) write_file(cfg.jsonOut, graph_to_json(g));
  if (!cfg.dotOut.empty()) write_file(cfg.dotOut, graph_to_dot(g));
  std::cout << "reeb graph: " << g.vertices.size() << " vertices, " << g.edges.size() << " edges, b1 "
            << g.betti1() << ", total mass " << fmt(g.totalMass) << "\n";
  return 0;
}

int cmd_invariants(const RunConfig& cfg) {
  const TriMeshField m = load(cfg, cfg.inputs[0]);
  const auto g = reeb_of(cfg, m).graph;
  std::vector<SaddleFit> fits;
  int saddles = 0;
  for (const auto& v : g.vertices) {
    if (v.kind != CriticalKind::Saddle) continue;
    ++saddles;
    try {
      fits.push_back(fit_saddle(g, v.id));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::InsufficientSamples && e.code() != ErrorCode::IllConditionedFit) throw;
      std::cerr << "saddle " << v.id << ": " << e.what() << "\n";
    }
  }
  if (!cfg.csvOut.empty()) write_file(cfg.csvOut, invariants_csv(g, cfg.lmax, fits));
  if (!cfg.jsonOut.empty()) {
    nlohmann::json j;
    j["global_moments"] = nlohmann::json::array();
    for (int l = 0; l <= cfg.lmax; ++l) j["global_moments"].push_back(global_moment(g, l));
    j["edges"] = nlohmann::json::array();
    for (const auto& e : g.edges) j["edges"].push_back({{"id", e.id}, {"moments", edge_moments(g, e.id, cfg.lmax)}});
    j["saddles"] = nlohmann::json::array();
    for (const auto& f : fits) {
      j["saddles"].push_back({{"vertex", f.vertexId},
                              {"edges", f.edges},
                              {"log_coefficients", f.logCoefficients},
                              {"eta", f.etaValues},
                              {"eta_slopes", f.etaSlopes},
                              {"psi_prime0", f.psiPrime0},
                              {"condition", f.conditionNumber}});
    }
    write_file(cfg.jsonOut, j.dump(2) + "\n");
  }
  std::cout << "invariants: " << g.edges.size() << " edges, moments to order " << cfg.lmax << ", " << fits.size()
            << "/" << saddles << " saddles fitted\n";
  return 0;
}

int cmd_circulation(const RunConfig& cfg) {
  const TriMeshField m = load(cfg, cfg.inputs[0]);
  if (!m.cochain) throw Error(ErrorCode::MissingCochain, "input has no cochain");
  const ReebResult r = reeb_of(cfg, m);
  const CirculationSpace space = solve_circulations(r.graph);
  const CirculationGraph cg = circulation_function(m, r.graph, r.projection);
  const AxiomReport rep = check_circulation_axioms(cg, cfg.tol.circ);
  if (!cfg.jsonOut.empty()) {
    nlohmann::json j;
    j["edge_limits"] = cg.cMinus;
    j["vertex_residuals"] = rep.vertexResiduals;
    j["stokes_residuals"] = cg.stokesResiduals;
    j["vorticity_residual"] = vorticity_residual(m);
    j["solution_dimension"] = space.dimension;
    j["axioms_pass"] = rep.pass;
    write_file(cfg.jsonOut, j.dump(2) + "\n");
  }
  std::cout << "circulation: " << cg.cMinus.size() << " edges, solution space dimension " << space.dimension
            << ", axioms " << (rep.pass ? "hold" : "violated") << "\n";
  return rep.pass ? 0 : 1;
}

int cmd_freezing(const RunConfig& cfg) {
  const TriMeshField m = load(cfg, cfg.inputs[0]);
  const Topology topo = build_topology(m);
  const ReebResult r = reeb_of(cfg, m);
  const FrozenData fd = freeze(m, topo, r);
  if (!cfg.jsonOut.empty()) write_file(cfg.jsonOut, frozen_to_json(fd));
  std::cout << "freezing: genus " << fd.genus << ", reduced graph " << fd.reduced.vertices.size() << " vertices, "
            << fd.reduced.edges.size() << " edges, " << fd.halfTwists.size() << " loops\n";
  return 0;
}

int cmd_compare(const RunConfig& cfg) {
  const Group group = parse_group(cfg.group);
  const TriMeshField f = load(cfg, cfg.inputs[0]);
  const TriMeshField g = load(cfg, cfg.inputs[1]);
  const Verdict v = cfg.cosets ? compare_cosets(f, g, group, cfg.tol) : compare_functions(f, g, group, cfg.tol);
  if (!cfg.jsonOut.empty()) write_file(cfg.jsonOut, verdict_to_json(v));
  std::cout << to_string(v.outcome) << " under " << to_string(v.group) << ": " << v.reason << "\n";
  return exit_code(v.outcome);
}

int cmd_advect(const RunConfig& cfg) {
  const TriMeshField m = load(cfg, cfg.inputs[0]);
  const AreaPreservingMap map = map_from_json(read_file(cfg.inputs[1]));
  const TriMeshField out = apply_map(m, map);
  const bool off = cfg.output.size() >= 4 && cfg.output.substr(cfg.output.size() - 4) == ".off";
  write_file(cfg.output, off ? mesh_to_off(out) : mesh_to_json(out));
  std::cout << "advected by " << map.describe() << " -> " << cfg.output << "\n";
  return 0;
}

int cmd_selftest(const RunConfig& cfg) {
#ifdef SYMREEB_WITH_SELFTEST
  std::vector<int> ids = cfg.criteria;
  if (ids.empty())
    for (int i = 1; i <= testing::kCriterionCount; ++i) ids.push_back(i);
  int passed = 0;
  for (int id : ids) {
    if (id < 1 || id > testing::kCriterionCount) throw Error(ErrorCode::Usage, "no criterion " + std::to_string(id));
    const auto res = testing::run_criterion(id, cfg.seed);
    passed += res.pass;
    std::cout << testing::format_result(res) << "\n" << std::flush;
  }
  std::cout << passed << "/" << ids.size() << " criteria passed\n";
  return passed == static_cast<int>(ids.size()) ? 0 : 1;
#else
  (void)cfg;
  throw Error(ErrorCode::Usage, "selftest is not available in this build");
#endif
}

void add_mesh_options(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--format", cfg.format, "Input format, overriding the file extension")
      ->check(CLI::IsMember({"json", "off"}));
  sub->add_option("--levels", cfg.levels, "Profile samples per edge interior and per saddle end")
      ->check(CLI::Range(2, 1 << 20));
  sub->add_option("--perturb", cfg.perturb, "Break ties in the field by rank offsets of this size")
      ->check(CLI::PositiveNumber);
  sub->add_option("--json", cfg.jsonOut, "Write the JSON export here");
}

void add_tolerance_options(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--tol-f", cfg.tol.f, "Relative tolerance on critical values")->check(CLI::PositiveNumber);
  sub->add_option("--tol-mass", cfg.tol.mass, "Relative tolerance on edge masses")->check(CLI::PositiveNumber);
  sub->add_option("--tol-profile", cfg.tol.profile, "Relative tolerance on measure profiles")
      ->check(CLI::PositiveNumber);
  sub->add_option("--tol-area", cfg.tol.area, "Relative tolerance on flux areas")->check(CLI::PositiveNumber);
  sub->add_option("--tol-circ", cfg.tol.circ, "Relative tolerance on circulations")->check(CLI::PositiveNumber);
}

int run(int argc, char** argv) {
  RunConfig cfg;
  CLI::App app{"Invariants and equivalence of simple Morse functions on triangulated surfaces", "symreeb"};
  app.require_subcommand(1);
  app.add_flag("-v,--verbose", cfg.verbose, "Print error details");

  auto* validate_cmd = app.add_subcommand("validate", "Check the surface and report critical points");
  validate_cmd->add_option("input", cfg.inputs, "Mesh file")->required()->expected(1);
  add_mesh_options(validate_cmd, cfg);

  auto* reeb_cmd = app.add_subcommand("reeb", "Build the measured Reeb graph");
  reeb_cmd->add_option("input", cfg.inputs, "Mesh file")->required()->expected(1);
  reeb_cmd->add_option("--dot", cfg.dotOut, "Write a Graphviz file here");
  add_mesh_options(reeb_cmd, cfg);

  auto* inv_cmd = app.add_subcommand("invariants", "Edge moments and saddle asymptotics");
  inv_cmd->add_option("input", cfg.inputs, "Mesh file")->required()->expected(1);
  inv_cmd->add_option("--csv", cfg.csvOut, "Write the invariants table here");
  inv_cmd->add_option("--lmax", cfg.lmax, "Highest moment order")->check(CLI::Range(0, 16));
  add_mesh_options(inv_cmd, cfg);

  auto* circ_cmd = app.add_subcommand("circulation", "Circulation function of a field with a cochain");
  circ_cmd->add_option("input", cfg.inputs, "Mesh file with a cochain")->required()->expected(1);
  circ_cmd->add_option("--tol-circ", cfg.tol.circ, "Relative residual tolerance for the axioms")
      ->check(CLI::PositiveNumber);
  add_mesh_options(circ_cmd, cfg);

  auto* freeze_cmd = app.add_subcommand("freezing", "Reduced graph, homology classes and pants data");
  freeze_cmd->add_option("input", cfg.inputs, "Mesh file")->required()->expected(1);
  add_mesh_options(freeze_cmd, cfg);

  auto* cmp_cmd = app.add_subcommand("compare", "Decide equivalence of two inputs under a group");
  cmp_cmd->add_option("inputs", cfg.inputs, "Two mesh files")->required()->expected(2);
  cmp_cmd->add_option("--group", cfg.group, "sdiff, sdiff0 or ham");
  cmp_cmd->add_flag("--cosets", cfg.cosets, "Compare (field, cochain) pairs through circulations");
  add_tolerance_options(cmp_cmd, cfg);
  add_mesh_options(cmp_cmd, cfg);

  auto* adv_cmd = app.add_subcommand("advect", "Pull a field back through an area-preserving map");
  adv_cmd->add_option("inputs", cfg.inputs, "Mesh file and map description")->required()->expected(2);
  adv_cmd->add_option("-o,--output", cfg.output, "Output mesh (.json or .off)")->required();
  adv_cmd->add_option("--format", cfg.format, "Input format, overriding the file extension")
      ->check(CLI::IsMember({"json", "off"}));

  auto* self_cmd = app.add_subcommand("selftest", "Run the acceptance suite on bundled meshes");
  self_cmd->add_option("criteria", cfg.criteria, "Criterion numbers (default: all)");
  self_cmd->add_option("--seed", cfg.seed, "Seed for the randomized suites");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsageExit;
  }

  const CLI::App* sub = app.get_subcommands().front();
  cfg.command = sub->get_name();
  try {
    if (cfg.command == "validate") return cmd_validate(cfg);
    if (cfg.command == "reeb") return cmd_reeb(cfg);
    if (cfg.command == "invariants") return cmd_invariants(cfg);
    if (cfg.command == "circulation") return cmd_circulation(cfg);
    if (cfg.command == "freezing") return cmd_freezing(cfg);
    if (cfg.command == "compare") return cmd_compare(cfg);
    if (cfg.command == "advect") return cmd_advect(cfg);
    return cmd_selftest(cfg);
  } catch (const Error& e) {
    std::cerr << "symreeb " << cfg.command << ": " << e.what() << "\n";
    return exit_code(e.code());
  } catch (const std::exception& e) {
    std::cerr << "symreeb " << cfg.command << ": " << e.what() << "\n";
    if (cfg.verbose) std::cerr << "(unexpected exception)\n";
    return 70;
  }
}

}  // namespace

int main(int argc, char** argv) { return run(argc, argv); }
