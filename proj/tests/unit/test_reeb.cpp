#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <iterator>
#include <map>
#include <numbers>
#include <set>

#include "oracles.hpp"
#include "symreeb/error.hpp"
#include "symreeb/fixtures.hpp"
#include "symreeb/reeb.hpp"

using namespace symreeb;
using fixtures::GridPattern;

namespace {

std::map<std::pair<int, int>, int> bundles(const MeasuredReebGraph& g) {
  std::map<std::pair<int, int>, int> b;
  for (const auto& e : g.edges) ++b[{e.src, e.dst}];
  return b;
}

double polyline_length(const LevelCycle& c) {
  double len = 0.0;
  for (std::size_t i = 0; i < c.points.size(); ++i) {
    const auto& p = c.points[i];
    const auto& q = c.points[(i + 1) % c.points.size()];
    len += std::hypot(q[0] - p[0], q[1] - p[1], q[2] - p[2]);
  }
  return len;
}

// Midpoint quadrature of the area of {lo <= F < z, 0 < y < 1/2} on the unit square.
double strip_quadrature(double lo, double z, int n) {
  double area = 0.0;
  const double h = 1.0 / n;
  for (int j = 0; j < n / 2; ++j) {
    for (int i = 0; i < n; ++i) {
      const double v = fixtures::wave_field((i + 0.5) * h, (j + 0.5) * h);
      if (v >= lo && v < z) area += h * h;
    }
  }
  return area;
}

}  // namespace

TEST_CASE("torus height graph") {
  const auto g = build_reeb(fixtures::torus(48, 24)).graph;
  REQUIRE(g.vertices.size() == 4);
  REQUIRE(g.edges.size() == 4);
  CHECK(g.betti1() == 1);
  int saddles = 0;
  for (const auto& v : g.vertices) saddles += v.kind == CriticalKind::Saddle;
  CHECK(saddles == 2);
  int pairs = 0;
  for (const auto& [key, n] : bundles(g)) {
    if (n == 2) {
      ++pairs;
      CHECK(g.vertices[key.first].kind == CriticalKind::Saddle);
      CHECK(g.vertices[key.second].kind == CriticalKind::Saddle);
    }
  }
  CHECK(pairs == 1);
}

TEST_CASE("two-maxima torus graph") {
  const auto g = build_reeb(fixtures::flat_torus(48, GridPattern::Diagonal, fixtures::two_maxima_field)).graph;
  CHECK(g.vertices.size() == 6);
  CHECK(g.edges.size() == 6);
  CHECK(g.betti1() == 1);
}

TEST_CASE("octahedron graph is a single edge") {
  const auto g = build_reeb(fixtures::octahedron()).graph;
  CHECK(g.vertices.size() == 2);
  CHECK(g.edges.size() == 1);
  CHECK(g.betti1() == 0);
}

TEST_CASE("sphere measure at the equator") {
  const auto g = build_reeb(fixtures::sphere(40)).graph;
  CHECK(measure_at(g, 0, 0.0) == doctest::Approx(2 * std::numbers::pi).epsilon(0.01));
  CHECK(measure_at(g, 0, g.vertices[g.edges[0].src].f) == 0.0);
  CHECK(measure_at(g, 0, g.vertices[g.edges[0].dst].f) == doctest::Approx(g.totalMass));
}

TEST_CASE("flat torus measure matches fine-grid quadrature") {
  const auto g = build_reeb(fixtures::flat_torus(128, GridPattern::Diagonal, fixtures::wave_field)).graph;
  int checked = 0;
  for (const auto& e : g.edges) {
    const auto& s = g.vertices[e.src];
    const auto& d = g.vertices[e.dst];
    if (s.kind != CriticalKind::Saddle || d.kind != CriticalKind::Saddle) continue;
    // the two parallel edges are mirror images under y -> 1 - y
    const double z = 0.5 * (s.f + d.f);
    CHECK(std::abs(measure_at(g, e.id, z) - strip_quadrature(s.f, z, 1024)) <= 1e-3);
    ++checked;
  }
  CHECK(checked == 2);
}

TEST_CASE("property: measures are monotone and sum to the total area") {
  for (const TriMeshField& m : {fixtures::sphere(10), fixtures::torus(32, 16), fixtures::pretzel_theta()}) {
    const auto g = build_reeb(m).graph;
    double sum = 0.0;
    for (const auto& e : g.edges) {
      sum += e.profile.mass;
      for (std::size_t i = 1; i < e.profile.size(); ++i) {
        CHECK(e.profile.z[i] > e.profile.z[i - 1]);
        CHECK(e.profile.mu[i] >= e.profile.mu[i - 1]);
      }
    }
    const Topology topo = build_topology(m);
    double area = 0.0;
    for (double a : topo.area) area += a;
    CHECK(sum == doctest::Approx(area).epsilon(1e-12));
    CHECK(g.totalMass == doctest::Approx(area).epsilon(1e-12));
  }
}

TEST_CASE("measure_at rejects levels outside the edge") {
  const auto g = build_reeb(fixtures::octahedron()).graph;
  CHECK_THROWS_AS(measure_at(g, 0, 5.0), Error);
  CHECK_THROWS_AS(measure_at(g, 3, 0.0), Error);
}

TEST_CASE("sphere equator level cycle") {
  double previous = 0.0;
  for (int n : {8, 16, 32}) {
    const TriMeshField m = fixtures::sphere(n);
    const Topology topo = build_topology(m);
    const auto r = build_reeb(m);
    CHECK_THROWS_AS(level_cycle(m, topo, r.graph, r.projection, 0, 0.0), Error);
    const auto c = level_cycle(m, topo, r.graph, r.projection, 0, 1e-9);
    const double err = std::abs(polyline_length(c) - 2 * std::numbers::pi);
    if (previous > 0.0) CHECK(err < previous);
    previous = err;
  }
  CHECK(previous < 0.01);
}

TEST_CASE("torus level cycles") {
  const TriMeshField m = fixtures::torus(48, 24);
  const Topology topo = build_topology(m);
  const auto r = build_reeb(m);
  const auto& g = r.graph;
  for (const auto& e : g.edges) {
    const auto& s = g.vertices[e.src];
    const auto& d = g.vertices[e.dst];
    if (s.kind == CriticalKind::Minimum) {
      const auto c = level_cycle(m, topo, g, r.projection, e.id, s.f + 1e-3 * (d.f - s.f));
      double radius = 0.0;
      for (const auto& p : c.points) {
        radius = std::max(radius, std::hypot(p[0] - m.vertices[s.meshVertex][0], p[1] - m.vertices[s.meshVertex][1],
                                             p[2] - m.vertices[s.meshVertex][2]));
      }
      CHECK(radius < 0.5);
    }
  }
  std::vector<std::vector<std::pair<int, double>>> middle;
  for (const auto& [key, n] : bundles(g)) {
    if (n != 2) continue;
    const double z = 0.5 * (g.vertices[key.first].f + g.vertices[key.second].f);
    for (const auto& e : g.edges)
      if (e.src == key.first && e.dst == key.second) middle.push_back(level_cycle(m, topo, g, r.projection, e.id, z).crossings);
  }
  REQUIRE(middle.size() == 2);
  std::set<int> a, b;
  for (const auto& [e, t] : middle[0]) a.insert(e);
  for (const auto& [e, t] : middle[1]) b.insert(e);
  std::vector<int> common;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(common));
  CHECK(common.empty());
  for (const auto& cyc : {middle[0], middle[1]}) CHECK(cyc.size() >= 24);
}

TEST_CASE("graph json round trip and dot output") {
  const auto g = build_reeb(fixtures::torus(32, 16)).graph;
  const auto back = graph_from_json(graph_to_json(g));
  REQUIRE(back.edges.size() == g.edges.size());
  CHECK(testing::brute_force_isomorphic(g, back));
  const std::string dot = graph_to_dot(g);
  CHECK(dot.find("digraph") != std::string::npos);
  CHECK(std::count(dot.begin(), dot.end(), '>') >= 4);
}

TEST_CASE("safe_level skips vertex values") {
  const std::vector<double> v{0.0, 1.0, 2.0};
  CHECK(safe_level(v, 0.5) == 0.5);
  CHECK(safe_level(v, 1.0) == 1.5);
}
