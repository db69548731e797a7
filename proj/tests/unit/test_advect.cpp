#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "symreeb/advect.hpp"
#include "symreeb/error.hpp"
#include "symreeb/fixtures.hpp"
#include "symreeb/invariants.hpp"

using namespace symreeb;
using fixtures::GridPattern;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return ErrorCode::Usage;
}

double torus_gap(Point2 a, Point2 b) {
  double d = 0.0;
  for (int k = 0; k < 2; ++k) {
    const double x = a[k] - b[k];
    d = std::max(d, std::abs(x - std::round(x)));
  }
  return d;
}

StreamFunction sample_stream() {
  StreamFunction h;
  h.modes.push_back({1, 0, 0.0, 0.02});
  h.modes.push_back({0, 1, 0.015, 0.0});
  h.modes.push_back({1, 1, 0.0, 0.01});
  return h;
}

// Central-difference Jacobian determinant of the forward map.
double jacobian(const AreaPreservingMap& m, Point2 p) {
  const double h = 1e-6;
  const Point2 xp = m.forward({p[0] + h, p[1]}), xm = m.forward({p[0] - h, p[1]});
  const Point2 yp = m.forward({p[0], p[1] + h}), ym = m.forward({p[0], p[1] - h});
  const double a = (xp[0] - xm[0]) / (2 * h), c = (xp[1] - xm[1]) / (2 * h);
  const double b = (yp[0] - ym[0]) / (2 * h), d = (yp[1] - ym[1]) / (2 * h);
  return a * d - b * c;
}

}  // namespace

TEST_CASE("zero shear leaves the field unchanged") {
  const TriMeshField m = fixtures::flat_torus(16, GridPattern::Diagonal, fixtures::wave_field);
  const TriMeshField out = apply_map(m, shear_x(FourierProfile{}));
  REQUIRE(out.field.size() == m.field.size());
  for (std::size_t v = 0; v < m.field.size(); ++v) CHECK(out.field[v] == m.field[v]);
  CHECK(out.triangles == m.triangles);
}

TEST_CASE("a simplicial automorphism permutes values exactly") {
  const int n = 16;
  const TriMeshField m = fixtures::flat_torus(n, GridPattern::Crossed, fixtures::two_maxima_field);
  const auto perm = fixtures::flat_torus_quarter_turn(n);
  const TriMeshField out = apply_map(m, simplicial_automorphism(perm));
  for (std::size_t v = 0; v < perm.size(); ++v) CHECK(out.field[perm[v]] == m.field[v]);

  auto bad = perm;
  std::swap(bad[0], bad[1]);
  CHECK(code_of([&] { apply_map(m, simplicial_automorphism(bad)); }) == ErrorCode::DomainMismatch);
  CHECK(code_of([&] { simplicial_automorphism(perm).forward({0.1, 0.2}); }) == ErrorCode::DomainMismatch);
}

TEST_CASE("a shear keeps the global moments") {
  const TriMeshField m = fixtures::flat_torus(256, GridPattern::Diagonal, fixtures::wave_field);
  FourierProfile g;
  g.modes.push_back({1, 0.0, 0.25});
  const TriMeshField out = apply_map(m, shear_x(g), fixtures::wave_field);
  const auto a = build_reeb(m).graph, b = build_reeb(out).graph;
  CHECK(b.totalMass == doctest::Approx(a.totalMass).epsilon(1e-12));
  for (int l = 1; l <= 4; ++l) CHECK(std::abs(global_moment(a, l) - global_moment(b, l)) <= 1e-2 * a.totalMass);
}

TEST_CASE("flow of a zero stream function is the identity") {
  const auto m = hamiltonian_flow_map(StreamFunction{}, 1.0, 8);
  for (Point2 p : {Point2{0.1, 0.2}, Point2{0.7, 0.95}}) {
    CHECK(m.forward(p) == p);
    CHECK(m.inverse(p) == p);
  }
}

TEST_CASE("a stream function of y alone gives an exact x-shear in one step") {
  StreamFunction h;
  h.modes.push_back({0, 1, 0.0, 0.05});  // H = 0.05 sin 2 pi y
  const double t = 0.8;
  const auto flow = hamiltonian_flow_map(h, t, 1);
  for (Point2 p : {Point2{0.1, 0.2}, Point2{0.4, 0.65}, Point2{0.9, 0.01}}) {
    const Point2 q = flow.forward(p);
    const double expected = p[0] + t * 0.05 * 2 * std::numbers::pi * std::cos(2 * std::numbers::pi * p[1]);
    CHECK(q[0] == doctest::Approx(expected).epsilon(1e-14));
    CHECK(q[1] == p[1]);
  }
}

TEST_CASE("step refinement converges") {
  const auto h = sample_stream();
  const auto ref = hamiltonian_flow_map(h, 1.0, 1024);
  const Point2 p{0.3, 0.6};
  const double e64 = torus_gap(hamiltonian_flow_map(h, 1.0, 64).forward(p), ref.forward(p));
  const double e128 = torus_gap(hamiltonian_flow_map(h, 1.0, 128).forward(p), ref.forward(p));
  CHECK(e128 < e64);
  CHECK(e128 < 1e-3);
}

TEST_CASE("property: maps are invertible and area preserving") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  FourierProfile g;
  g.offset = 0.1;
  g.modes.push_back({1, 0.05, 0.2});
  g.modes.push_back({3, -0.02, 0.01});
  const std::vector<AreaPreservingMap> maps{shear_x(g), shear_y(g), hamiltonian_flow_map(sample_stream(), 1.0, 32)};
  for (const auto& m : maps) {
    for (int i = 0; i < 50; ++i) {
      const Point2 p{u(rng), u(rng)};
      CHECK(torus_gap(m.inverse(m.forward(p)), p) < 1e-12);
      CHECK(torus_gap(m.forward(m.inverse(p)), p) < 1e-12);
      CHECK(jacobian(m, p) == doctest::Approx(1.0).epsilon(1e-6));
    }
  }
}

TEST_CASE("map descriptions") {
  const auto sx = map_from_json(R"({"kind": "shear_x", "offset": 0.25, "modes": [[1, 0.0, 0.1]]})");
  CHECK(sx.kind == MapKind::ShearX);
  CHECK(sx.profile.offset == 0.25);
  REQUIRE(sx.profile.modes.size() == 1);
  CHECK(sx.profile.modes[0].sinCoef == 0.1);
  CHECK(map_from_json(R"({"kind": "shear_y"})").kind == MapKind::ShearY);
  const auto fl = map_from_json(R"({"kind": "ham", "modes": [[1, 0, 0.0, 0.02]], "t": 0.5, "steps": 10})");
  CHECK(fl.kind == MapKind::HamiltonianFlow);
  CHECK(fl.steps == 10);
  CHECK(fl.describe().find("steps=10") != std::string::npos);
  CHECK(map_from_json(R"({"kind": "perm", "permutation": [1, 0]})").permutation == std::vector<int>{1, 0});
  CHECK(code_of([] { map_from_json(R"({"kind": "twist"})"); }) == ErrorCode::Parse);
  CHECK(code_of([] { map_from_json("[1"); }) == ErrorCode::Parse);
  CHECK(code_of([] { map_from_json(R"({"kind": "ham", "t": 1, "steps": 0})"); }) == ErrorCode::DomainMismatch);
}

TEST_CASE("point maps need a flat torus") {
  FourierProfile g;
  g.offset = 0.1;
  CHECK(code_of([&] { apply_map(fixtures::sphere(6), shear_x(g)); }) == ErrorCode::DomainMismatch);
  CHECK(code_of([&] { apply_map(fixtures::torus(16, 8), shear_x(g)); }) == ErrorCode::DomainMismatch);
  CHECK(code_of([] { hamiltonian_flow_map(StreamFunction{}, 1.0, 0); }) == ErrorCode::DomainMismatch);
}
