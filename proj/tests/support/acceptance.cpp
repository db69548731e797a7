#include "acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <sstream>

#include "oracles.hpp"
#include "random_graphs.hpp"
#include "symreeb/advect.hpp"
#include "symreeb/circulation.hpp"
#include "symreeb/equivalence.hpp"
#include "symreeb/error.hpp"
#include "symreeb/fixtures.hpp"
#include "symreeb/freezing.hpp"
#include "symreeb/homology.hpp"
#include "symreeb/invariants.hpp"

namespace symreeb::testing {

namespace {

using fixtures::GridPattern;

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", x);
  return buf;
}

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

struct Check {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << "FAILED " << what << "; ";
    }
  }
};

StreamFunction test_stream() {
  StreamFunction H;
  H.modes.push_back({1, 0, 0.0, 0.02});
  H.modes.push_back({0, 1, 0.015, 0.0});
  H.modes.push_back({1, 1, 0.0, 0.01});
  return H;
}

// ---------------------------------------------------------------------------

void betti_genus(Check& out, std::uint64_t) {
  struct Case {
    const char* name;
    TriMeshField mesh;
    int genus;
  };
  std::vector<Case> cases;
  cases.push_back({"sphere", fixtures::sphere(12), 0});
  cases.push_back({"torus", fixtures::torus(48, 24), 1});
  cases.push_back({"flat", fixtures::flat_torus(48, GridPattern::Diagonal, fixtures::wave_field), 1});
  cases.push_back({"dumbbell", fixtures::pretzel_dumbbell(), 2});
  cases.push_back({"theta", fixtures::pretzel_theta(), 2});
  for (const auto& c : cases) {
    const int genus = (2 - euler_characteristic(c.mesh)) / 2;
    const int b1 = build_reeb(c.mesh).graph.betti1();
    out.detail << c.name << " g=" << genus << " b1=" << b1 << "; ";
    out.require(genus == c.genus, std::string(c.name) + " genus");
    out.require(b1 == genus, std::string(c.name) + " b1 == genus");
  }
}

struct Shape {
  int oneValent = 0, threeValent = 0, minima = 0, maxima = 0, parallelPairs = 0;
};

Shape shape_of(const MeasuredReebGraph& g) {
  Shape s;
  std::vector<int> degree(g.vertices.size(), 0);
  std::map<std::pair<int, int>, int> bundles;
  for (const auto& e : g.edges) {
    ++degree[e.src];
    ++degree[e.dst];
    ++bundles[{e.src, e.dst}];
  }
  for (const auto& v : g.vertices) {
    if (degree[v.id] == 1) ++s.oneValent;
    if (degree[v.id] == 3) ++s.threeValent;
    if (v.kind == CriticalKind::Minimum) ++s.minima;
    if (v.kind == CriticalKind::Maximum) ++s.maxima;
  }
  for (const auto& [k, n] : bundles)
    if (n == 2) ++s.parallelPairs;
  return s;
}

void figures(Check& out, std::uint64_t) {
  const auto torus = build_reeb(fixtures::torus(64, 32)).graph;
  const Shape a = shape_of(torus);
  out.detail << "height torus V=" << torus.vertices.size() << " E=" << torus.edges.size() << " pairs=" << a.parallelPairs
             << "; ";
  out.require(torus.vertices.size() == 4 && torus.edges.size() == 4, "height torus size");
  out.require(a.oneValent == 2 && a.threeValent == 2 && a.parallelPairs == 1, "height torus shape");

  const auto two = build_reeb(fixtures::flat_torus(64, GridPattern::Diagonal, fixtures::two_maxima_field)).graph;
  const Shape b = shape_of(two);
  out.detail << "two-maxima torus V=" << two.vertices.size() << " E=" << two.edges.size() << " max=" << b.maxima
             << " min=" << b.minima << "; ";
  out.require(two.vertices.size() == 6 && two.edges.size() == 6, "two-maxima size");
  out.require(b.maxima == 2 && b.minima == 1 && b.threeValent == 3, "two-maxima kinds");
}

double sphere_error(int n) {
  const auto g = build_reeb(fixtures::sphere(n)).graph;
  double worst = 0.0;
  for (int i = 1; i < 400; ++i) {
    const double z = -1.0 + 2.0 * i / 400.0;
    const double exact = sphere_cap_area(z);
    worst = std::max(worst, std::abs(measure_at(g, 0, z) - exact) / exact);
  }
  return worst;
}

void sphere_law(Check& out, std::uint64_t) {
  const double coarse = sphere_error(52);  // 21632 triangles
  const double fine = sphere_error(104);
  out.detail << "max rel err " << num(coarse) << " -> " << num(fine) << "; ";
  out.require(coarse <= 0.01, "coarse error <= 1%");
  out.require(fine <= 0.5 * coarse, "error halves under refinement");
}

void saddle_asymptotics(Check& out, std::uint64_t) {
  const auto g = build_reeb(fixtures::flat_torus(256, GridPattern::Diagonal, fixtures::wave_field)).graph;
  int saddles = 0;
  for (const auto& v : g.vertices) {
    if (v.kind != CriticalKind::Saddle) continue;
    ++saddles;
    const SaddleFit fit = fit_saddle(g, v.id);
    const auto& c = fit.logCoefficients;
    const double r1 = c[0] / c[1], r2 = c[0] / c[2];
    const auto& s = fit.etaSlopes;
    const double slopeSum = std::abs(s[0] + s[1] + s[2]);
    const double slopeMax = std::max({std::abs(s[0]), std::abs(s[1]), std::abs(s[2])});
    const auto& e = fit.etaValues;
    out.detail << "v" << v.id << " ratios " << num(r1) << "," << num(r2) << " eta-sum/max " << num(slopeSum / slopeMax)
               << " (constant terms " << num(std::abs(e[0] + e[1] + e[2])) << "); ";
    out.require(std::abs(r1 + 2.0) <= 0.1 && std::abs(r2 + 2.0) <= 0.1, "log ratio -2 within 5%");
    out.require(slopeSum <= 0.05 * slopeMax, "eta sum within 5% of max");
  }
  out.require(saddles == 2, "two saddles");
}

double casimir_deviation(int n, Check& out) {
  const auto F = fixtures::flat_torus(n, GridPattern::Diagonal, fixtures::wave_field);
  FourierProfile g;
  g.modes.push_back({1, 0.0, 0.25});
  const auto G = apply_map(F, shear_x(g), fixtures::wave_field);
  const auto rF = build_reeb(F).graph, rG = build_reeb(G).graph;
  const double fs = max_abs(F.field);
  const auto cert = graphs_isomorphic(rF, rG, 0.01 * fs, 0.01 * rF.totalMass, 0.1 * rF.totalMass);
  if (!cert) {
    out.require(false, "graphs match after shear at " + std::to_string(n));
    return 1.0;
  }
  double worst = std::abs(rF.totalMass - rG.totalMass) / rF.totalMass;
  for (const auto& v : rF.vertices) {
    worst = std::max(worst, std::abs(v.f - rG.vertices[cert->vertexMap[v.id]].f) / fs);
  }
  for (const auto& e : rF.edges) {
    const auto a = edge_moments(rF, e.id, 4);
    const auto b = edge_moments(rG, cert->edgeMap[e.id], 4);
    for (int l = 0; l <= 4; ++l) {
      const double scale = std::max(std::abs(a[l]), a[0] * std::pow(fs, l));
      worst = std::max(worst, std::abs(a[l] - b[l]) / scale);
    }
  }
  return worst;
}

void casimir(Check& out, std::uint64_t) {
  const double coarse = casimir_deviation(256, out);
  const double fine = casimir_deviation(512, out);
  out.detail << "max rel deviation " << num(coarse) << " -> " << num(fine) << "; ";
  out.require(coarse <= 0.01, "deviation <= 1% at 256");
  out.require(fine < coarse, "deviation shrinks at 512");
}

void circulation_solver(Check& out, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  RandomGraphOptions opts;
  opts.maxEdges = 30;
  opts.withFirstMoments = true;
  int raised = 0, dims = 0;
  for (int trial = 0; trial < 20; ++trial) {
    const auto g = random_reeb_graph(rng, opts);
    std::vector<double> i1;
    for (const auto& e : g.edges) i1.push_back(e.moments[1]);
    const auto space = solve_circulations(g);
    const int b1 = cycle_rank(g);
    bool ok = space.dimension == b1 && static_cast<int>(space.basis.size()) == b1 &&
              vector_rank(space.basis, 1e-9) == b1;
    ok = ok && max_abs(circulation_conditions(g, space.particular.cMinus, i1)) <= 1e-9;
    const std::vector<double> zeros(g.edges.size(), 0.0);
    for (const auto& b : space.basis) ok = ok && max_abs(circulation_conditions(g, b, zeros)) <= 1e-9;
    if (ok) ++dims;
    out.require(ok, "trial " + std::to_string(trial) + " (E=" + std::to_string(g.edges.size()) + ", b1=" +
                        std::to_string(b1) + ", dim=" + std::to_string(space.dimension) + ")");

    auto h = g;
    double fs = 0.0;
    for (const auto& v : g.vertices) fs = std::max(fs, std::abs(v.f));
    h.edges[trial % h.edges.size()].moments[1] += 1e-6 * std::max(fs, 1.0) * g.totalMass;
    try {
      solve_circulations(h);
    } catch (const Error& err) {
      if (err.code() == ErrorCode::NoCirculation) ++raised;
    }
  }
  out.detail << dims << "/20 dimensions match; " << raised << "/20 perturbed graphs raise NoCirculation; ";
  out.require(raised == 20, "NoCirculation on every perturbed graph");
}

void circulation_axioms(Check& out, std::uint64_t) {
  auto m = zero_mean(fixtures::flat_torus(64, GridPattern::Diagonal, fixtures::wave_field));
  const Topology topo = build_topology(m);
  const auto alpha = exact_primitive(m, topo);
  m.cochain = make_cochain(topo, alpha);
  const auto reeb = build_reeb(m);
  const auto base = circulation_function(m, reeb.graph, reeb.projection);
  const auto report = check_circulation_axioms(base, 1e-6);
  out.detail << "residuals stokes " << num(report.worstStokes) << " 1-valent " << num(report.worstOneValent)
             << " 3-valent " << num(report.worstThreeValent) << "; ";
  out.require(report.pass, "axioms at 1e-6");

  const double p = 0.37;
  auto shifted = alpha;
  for (int e = 0; e < topo.nE; ++e) {
    double dx = m.vertices[topo.edges[e][1]][0] - m.vertices[topo.edges[e][0]][0];
    shifted[e] += p * (dx - std::round(dx));
  }
  auto m2 = m;
  m2.cochain = make_cochain(topo, shifted);
  const auto moved = circulation_function(m2, reeb.graph, reeb.projection);
  int winding = 0;
  for (const auto& e : reeb.graph.edges) {
    const double z = 0.5 * (reeb.graph.vertices[e.src].f + reeb.graph.vertices[e.dst].f);
    const auto cycle = level_cycle_near(m, topo, reeb.graph, reeb.projection, e.id, z);
    const double w = std::round(winding_x(m, topo, cycle));
    if (w != 0.0) ++winding;
    const double delta = moved.cMinus[e.id] - base.cMinus[e.id];
    out.detail << "e" << e.id << " shift " << num(delta) << " (period " << num(p * w) << "); ";
    out.require(std::abs(delta - p * w) <= 1e-6 * p, "edge " + std::to_string(e.id) + " shift");
  }
  out.require(winding > 0, "some level cycle carries the period");
}

void flux_law(Check& out, std::uint64_t) {
  const auto F = fixtures::flat_torus(250, GridPattern::Diagonal, fixtures::wave_field);
  const Topology topo = build_topology(F);
  const auto rF = build_reeb(F);
  const double fs = max_abs(F.field);
  auto areas = [&](const TriMeshField& G, const std::function<void(int, double, double)>& check) {
    const auto rG = build_reeb(G);
    const auto cert = graphs_isomorphic(rF.graph, rG.graph, 0.01 * fs, 0.01 * rF.graph.totalMass,
                                        0.1 * rF.graph.totalMass);
    if (!cert) {
      out.require(false, "graphs match");
      return;
    }
    for (const auto& e : rF.graph.edges) {
      const int e2 = cert->edgeMap[e.id];
      const auto& E2 = rG.graph.edges[e2];
      const double zF = 0.5 * (rF.graph.vertices[e.src].f + rF.graph.vertices[e.dst].f);
      const double zG = 0.5 * (rG.graph.vertices[E2.src].f + rG.graph.vertices[E2.dst].f);
      const auto cF = level_cycle_near(F, topo, rF.graph, rF.projection, e.id, zF);
      const auto cG = level_cycle_near(G, topo, rG.graph, rG.projection, e2, zG);
      const double w = std::round(winding_x(F, topo, cF));
      if (w == 0.0) continue;
      check(e.id, w, level_area_between(topo, F, cF, G, cG));
    }
  };
  const double t = 0.3;
  FourierProfile shift;
  shift.offset = t;
  int translated = 0;
  areas(apply_map(F, shear_y(shift), fixtures::wave_field), [&](int e, double w, double a) {
    const double expected = w * t - std::floor(w * t);
    out.detail << "translation e" << e << " area " << num(a) << " (expected " << num(expected) << "); ";
    out.require(circular_distance(a, expected, 1.0) <= 0.003, "translation area");
    ++translated;
  });
  out.require(translated > 0, "translation measured");
  int flowed = 0;
  areas(apply_map(F, hamiltonian_flow_map(test_stream(), 1.0, 64), fixtures::wave_field),
        [&](int e, double, double a) {
          out.detail << "flow e" << e << " area " << num(a) << "; ";
          out.require(circular_distance(a, 0.0, 1.0) <= 0.005, "flow area = 0 mod 1");
          ++flowed;
        });
  out.require(flowed > 0, "flow measured");
}

void verdicts(Check& out, std::uint64_t) {
  auto expect = [&](const std::string& what, const TriMeshField& a, const TriMeshField& b, Group g,
                    Outcome want) {
    const Verdict v = compare_functions(a, b, g);
    out.detail << what << " " << to_string(g) << "=" << to_string(v.outcome) << "; ";
    out.require(v.outcome == want, what + " under " + to_string(g) + " (" + v.reason + ")");
  };
  const int n = 32;
  const auto Q = fixtures::flat_torus(n, GridPattern::Crossed, fixtures::two_maxima_field);
  const auto Qr = apply_map(Q, simplicial_automorphism(fixtures::flat_torus_quarter_turn(n)));
  expect("quarter turn", Q, Qr, Group::SDiff, Outcome::Equivalent);
  expect("quarter turn", Q, Qr, Group::SDiff0, Outcome::NotEquivalent);

  const auto T = fixtures::flat_torus(250, GridPattern::Diagonal, fixtures::wave_field);
  FourierProfile shift;
  shift.offset = 0.3;
  const auto Tt = apply_map(T, shear_y(shift), fixtures::wave_field);
  expect("translation", T, Tt, Group::SDiff0, Outcome::Equivalent);
  expect("translation", T, Tt, Group::Ham, Outcome::NotEquivalent);

  const std::vector<std::pair<std::string, TriMeshField>> selves = {
      {"sphere", fixtures::sphere(8)},
      {"torus", fixtures::flat_torus(32, GridPattern::Diagonal, fixtures::wave_field)},
      {"genus-2", fixtures::pretzel_dumbbell()}};
  for (const auto& [name, mesh] : selves) {
    for (Group g : {Group::SDiff, Group::SDiff0, Group::Ham}) {
      const TriMeshField m = g == Group::Ham ? zero_mean(mesh) : mesh;
      expect(name + " self", m, m, g, Outcome::Equivalent);
    }
  }
}

// Mutated copy of g; a mix of isomorphic and non-isomorphic variants.
MeasuredReebGraph mutate(const MeasuredReebGraph& g, int kind, std::mt19937_64& rng) {
  auto h = relabel(g, rng);
  auto pick = [&](std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); };
  auto set_mass = [](ReebEdge& e, double mass, double frac) {
    e.profile.mass = mass;
    e.profile.mu = {0.0, frac * mass, mass};
  };
  auto frac_of = [](const ReebEdge& e) { return e.profile.mu[1] / e.profile.mass; };
  std::map<std::pair<int, int>, std::vector<int>> bundles;
  for (const auto& e : h.edges) bundles[{e.src, e.dst}].push_back(e.id);
  std::vector<int> pair;
  for (const auto& [k, ids] : bundles)
    if (ids.size() >= 2) pair = {ids[0], ids[1]};
  switch (kind) {
    case 0: break;
    case 1: {
      auto& e = h.edges[pick(h.edges.size())];
      set_mass(e, e.profile.mass + 0.25, frac_of(e));
      h.totalMass += 0.25;
      break;
    }
    case 2: {
      if (pair.empty()) pair = {static_cast<int>(pick(h.edges.size())), static_cast<int>(pick(h.edges.size()))};
      auto& a = h.edges[pair[0]];
      auto& b = h.edges[pair[1]];
      const double fa = frac_of(a), fb = frac_of(b);
      set_mass(a, a.profile.mass, fb);
      set_mass(b, b.profile.mass, fa);
      break;
    }
    case 3: {
      if (pair.empty()) break;
      auto& a = h.edges[pair[0]];
      auto& b = h.edges[pair[1]];
      const double ma = a.profile.mass, mb = b.profile.mass, fa = frac_of(a), fb = frac_of(b);
      set_mass(a, mb, fa);
      set_mass(b, ma, fb);
      break;
    }
    default: {
      RandomGraphOptions opts;
      opts.maxEdges = 8;
      h = random_reeb_graph(rng, opts);
      break;
    }
  }
  return h;
}

void isomorphism_oracle(Check& out, std::uint64_t seed) {
  std::mt19937_64 rng(seed + 1);
  RandomGraphOptions opts;
  opts.maxEdges = 8;
  int agree = 0, iso = 0, withBundles = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto g = random_reeb_graph(rng, opts);
    const auto h = mutate(g, trial % 5, rng);
    const bool expected = brute_force_isomorphic(g, h);
    const bool got = graphs_isomorphic(g, h, 0.0, 0.0, 0.0).has_value();
    if (expected == got) ++agree;
    if (expected) ++iso;
    for (const auto& a : g.edges) {
      bool parallel = false;
      for (const auto& b : g.edges) parallel = parallel || (a.id != b.id && a.src == b.src && a.dst == b.dst);
      if (parallel) {
        ++withBundles;
        break;
      }
    }
    out.require(expected == got, "trial " + std::to_string(trial) + " brute force " + std::to_string(expected));
  }
  out.detail << agree << "/100 agree (" << iso << " isomorphic, " << withBundles << " with parallel bundles); ";
  out.require(iso > 0 && iso < 100, "both outcomes exercised");
  out.require(withBundles > 0, "parallel bundles exercised");
}

void period_consistency(Check& out, std::uint64_t) {
  const std::vector<std::pair<std::string, TriMeshField>> meshes = {
      {"sphere", fixtures::sphere(52)},
      {"flat", fixtures::flat_torus(128, GridPattern::Diagonal, fixtures::wave_field)},
      {"torus", fixtures::torus(96, 48)}};
  for (const auto& [name, mesh] : meshes) {
    const auto g = build_reeb(mesh).graph;
    double worst = 0.0;
    for (const auto& e : g.edges) {
      worst = std::max(worst, std::abs(period_integral(g, e.id, 400) - e.profile.mass) / e.profile.mass);
    }
    out.detail << name << " worst edge " << num(worst) << "; ";
    out.require(worst <= 0.01, name + " period integral within 1%");
    if (name == "sphere") {
      double pw = 0.0;
      for (double z : {-0.5, -0.25, 0.0, 0.25, 0.5}) {
        pw = std::max(pw, std::abs(period_function(g, 0, z) - 2.0 * std::numbers::pi) / (2.0 * std::numbers::pi));
      }
      out.detail << "sphere period " << num(pw) << "; ";
      out.require(pw <= 0.01, "sphere period 2 pi within 1%");
    }
  }
}

struct Entry {
  const char* name;
  void (*run)(Check&, std::uint64_t);
};

const Entry kEntries[kCriterionCount] = {
    {"Betti-genus law", betti_genus},
    {"figure graphs", figures},
    {"sphere measure law", sphere_law},
    {"saddle asymptotics", saddle_asymptotics},
    {"Casimir invariance under shear", casimir},
    {"circulation solver", circulation_solver},
    {"circulation axioms", circulation_axioms},
    {"flux law", flux_law},
    {"group-hierarchy verdicts", verdicts},
    {"isomorphism oracle", isomorphism_oracle},
    {"period consistency", period_consistency},
};

}  // namespace

CriterionResult run_criterion(int id, std::uint64_t seed) {
  if (id < 1 || id > kCriterionCount) throw Error(ErrorCode::Usage, "criterion ids run from 1 to 11");
  const Entry& entry = kEntries[id - 1];
  CriterionResult r;
  r.id = id;
  r.name = entry.name;
  const auto t0 = std::chrono::steady_clock::now();
  Check out;
  try {
    entry.run(out, seed);
  } catch (const std::exception& e) {
    out.pass = false;
    out.detail << "exception: " << e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  r.pass = out.pass;
  r.detail = out.detail.str();
  while (!r.detail.empty() && (r.detail.back() == ' ' || r.detail.back() == ';')) r.detail.pop_back();
  return r;
}

std::vector<CriterionResult> run_acceptance(std::uint64_t seed) {
  std::vector<CriterionResult> all;
  for (int id = 1; id <= kCriterionCount; ++id) all.push_back(run_criterion(id, seed));
  return all;
}

std::string format_result(const CriterionResult& r) {
  std::ostringstream os;
  os << (r.pass ? "[PASS] " : "[FAIL] ") << r.id << ' ' << r.name << " (" << num(r.seconds) << " s): " << r.detail;
  return os.str();
}

}  // namespace symreeb::testing
