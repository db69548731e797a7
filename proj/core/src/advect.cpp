#include "symreeb/advect.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "symreeb/error.hpp"
#include "symreeb/topology.hpp"

namespace symreeb {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap_unit(double x) {
  double r = x - std::floor(x);
  if (r >= 1.0) r -= 1.0;
  return r;
}

double wrap_half(double d) { return d - std::round(d); }

Point2 wrap_point(Point2 p) { return {wrap_unit(p[0]), wrap_unit(p[1])}; }

// Point location on a flat-torus mesh through a uniform bucket grid.
class TorusLocator {
 public:
  TorusLocator(const TriMeshField& mesh) : mesh_(mesh) {
    const int nT = static_cast<int>(mesh.triangles.size());
    B_ = std::max(1, static_cast<int>(std::sqrt(nT / 2.0)));
    buckets_.assign(static_cast<std::size_t>(B_) * B_, {});
    for (int t = 0; t < nT; ++t) {
      const auto P = unwrapped(t);
      double x0 = P[0][0], x1 = x0, y0 = P[0][1], y1 = y0;
      for (const auto& p : P) {
        x0 = std::min(x0, p[0]);
        x1 = std::max(x1, p[0]);
        y0 = std::min(y0, p[1]);
        y1 = std::max(y1, p[1]);
      }
      const int i0 = static_cast<int>(std::floor(x0 * B_ - 1e-9)), i1 = static_cast<int>(std::floor(x1 * B_ + 1e-9));
      const int j0 = static_cast<int>(std::floor(y0 * B_ - 1e-9)), j1 = static_cast<int>(std::floor(y1 * B_ + 1e-9));
      for (int j = j0; j <= j1; ++j)
        for (int i = i0; i <= i1; ++i) buckets_[index(i, j)].push_back(t);
    }
  }

  // Triangle containing p (wrapped) and barycentric coordinates.
  int locate(Point2 p, std::array<double, 3>& bary) const {
    p = wrap_point(p);
    const int i = std::min(B_ - 1, static_cast<int>(p[0] * B_));
    const int j = std::min(B_ - 1, static_cast<int>(p[1] * B_));
    int best = -1;
    double bestMin = -1e300;
    for (int t : buckets_[index(i, j)]) {
      std::array<double, 3> b;
      barycentric(t, p, b);
      const double m = std::min({b[0], b[1], b[2]});
      if (m > bestMin) {
        bestMin = m;
        best = t;
        bary = b;
      }
    }
    if (best < 0 || bestMin < -1e-9) {
      throw Error(ErrorCode::DomainMismatch, "point outside the flat torus mesh");
    }
    return best;
  }

  std::array<Point2, 3> unwrapped(int t) const {
    const Tri& tri = mesh_.triangles[t];
    const Vec3& a = mesh_.vertices[tri[0]];
    std::array<Point2, 3> P;
    P[0] = {a[0], a[1]};
    for (int k = 1; k < 3; ++k) {
      const Vec3& v = mesh_.vertices[tri[k]];
      P[k] = {a[0] + wrap_half(v[0] - a[0]), a[1] + wrap_half(v[1] - a[1])};
    }
    return P;
  }

  // p relative to the triangle's first vertex, shifted into its unwrapped frame.
  Point2 local(int t, Point2 p) const {
    const Vec3& a = mesh_.vertices[mesh_.triangles[t][0]];
    return {a[0] + wrap_half(p[0] - a[0]), a[1] + wrap_half(p[1] - a[1])};
  }

  void barycentric(int t, Point2 p, std::array<double, 3>& b) const {
    const auto P = unwrapped(t);
    const Point2 q = local(t, p);
    const double d = (P[1][0] - P[0][0]) * (P[2][1] - P[0][1]) - (P[2][0] - P[0][0]) * (P[1][1] - P[0][1]);
    b[1] = ((q[0] - P[0][0]) * (P[2][1] - P[0][1]) - (P[2][0] - P[0][0]) * (q[1] - P[0][1])) / d;
    b[2] = ((P[1][0] - P[0][0]) * (q[1] - P[0][1]) - (q[0] - P[0][0]) * (P[1][1] - P[0][1])) / d;
    b[0] = 1.0 - b[1] - b[2];
  }

 private:
  std::size_t index(int i, int j) const {
    const int a = ((i % B_) + B_) % B_, b = ((j % B_) + B_) % B_;
    return static_cast<std::size_t>(b) * B_ + a;
  }

  const TriMeshField& mesh_;
  int B_ = 1;
  std::vector<std::vector<int>> buckets_;
};

void check_flat_torus(const TriMeshField& mesh) {
  for (const auto& v : mesh.vertices) {
    if (v[2] != 0.0 || v[0] < 0.0 || v[0] >= 1.0 || v[1] < 0.0 || v[1] >= 1.0) {
      throw Error(ErrorCode::DomainMismatch, "vertices must lie in [0,1)^2 x {0}");
    }
  }
  if (!mesh.areaOverride) {
    throw Error(ErrorCode::DomainMismatch, "flat torus meshes carry per-triangle areas");
  }
  double total = 0.0;
  for (double a : *mesh.areaOverride) total += a;
  if (std::abs(total - 1.0) > 1e-9) {
    throw Error(ErrorCode::DomainMismatch, "flat torus area must be 1, got " + std::to_string(total));
  }
  const Topology topo = build_topology(mesh);
  if (topo.genus() != 1) throw Error(ErrorCode::DomainMismatch, "mesh is not a torus");
}

TriMeshField apply_permutation(const TriMeshField& mesh, const std::vector<int>& perm) {
  const std::size_t nV = mesh.vertices.size();
  if (perm.size() != nV) throw Error(ErrorCode::DomainMismatch, "permutation size differs from vertex count");
  std::vector<char> hit(nV, 0);
  for (int p : perm) {
    if (p < 0 || static_cast<std::size_t>(p) >= nV || hit[p]) {
      throw Error(ErrorCode::DomainMismatch, "not a permutation of the vertices");
    }
    hit[p] = 1;
  }
  std::map<std::array<int, 3>, int> tris;
  auto canon = [](Tri t) {
    while (t[0] > t[1] || t[0] > t[2]) t = {t[1], t[2], t[0]};
    return t;
  };
  for (const auto& t : mesh.triangles) tris[canon(t)] = 1;
  for (const auto& t : mesh.triangles) {
    if (!tris.count(canon({perm[t[0]], perm[t[1]], perm[t[2]]}))) {
      throw Error(ErrorCode::DomainMismatch, "permutation does not map triangles to triangles with orientation");
    }
  }
  TriMeshField out = mesh;
  for (std::size_t v = 0; v < nV; ++v) out.field[perm[v]] = mesh.field[v];
  if (mesh.cochain) {
    Cochain c;
    for (std::size_t i = 0; i < mesh.cochain->edges.size(); ++i) {
      const auto& e = mesh.cochain->edges[i];
      c.edges.push_back({perm[e[0]], perm[e[1]]});
      c.values.push_back(mesh.cochain->values[i]);
    }
    out.cochain = c;
  }
  return out;
}

}  // namespace

double FourierProfile::value(double s) const {
  double r = offset;
  for (const auto& m : modes) r += m.cosCoef * std::cos(kTwoPi * m.k * s) + m.sinCoef * std::sin(kTwoPi * m.k * s);
  return r;
}

double FourierProfile::derivative(double s) const {
  double r = 0.0;
  for (const auto& m : modes) {
    const double w = kTwoPi * m.k;
    r += w * (-m.cosCoef * std::sin(w * s) + m.sinCoef * std::cos(w * s));
  }
  return r;
}

double StreamFunction::value(double x, double y) const {
  double r = 0.0;
  for (const auto& m : modes) {
    const double ph = kTwoPi * (m.kx * x + m.ky * y);
    r += m.cosCoef * std::cos(ph) + m.sinCoef * std::sin(ph);
  }
  return r;
}

namespace {
// derivative of c cos + s sin along the phase, order n
double phase_derivative(const StreamFunction::Mode& m, double ph, int n) {
  const double c = std::cos(ph), s = std::sin(ph);
  switch (n % 4) {
    case 0: return m.cosCoef * c + m.sinCoef * s;
    case 1: return -m.cosCoef * s + m.sinCoef * c;
    case 2: return -m.cosCoef * c - m.sinCoef * s;
    default: return m.cosCoef * s - m.sinCoef * c;
  }
}
}  // namespace

double StreamFunction::dx(double x, double y) const {
  double r = 0.0;
  for (const auto& m : modes) r += kTwoPi * m.kx * phase_derivative(m, kTwoPi * (m.kx * x + m.ky * y), 1);
  return r;
}

double StreamFunction::dy(double x, double y) const {
  double r = 0.0;
  for (const auto& m : modes) r += kTwoPi * m.ky * phase_derivative(m, kTwoPi * (m.kx * x + m.ky * y), 1);
  return r;
}

double StreamFunction::dxx(double x, double y) const {
  double r = 0.0;
  for (const auto& m : modes)
    r += kTwoPi * kTwoPi * m.kx * m.kx * phase_derivative(m, kTwoPi * (m.kx * x + m.ky * y), 2);
  return r;
}

double StreamFunction::dxy(double x, double y) const {
  double r = 0.0;
  for (const auto& m : modes)
    r += kTwoPi * kTwoPi * m.kx * m.ky * phase_derivative(m, kTwoPi * (m.kx * x + m.ky * y), 2);
  return r;
}

double StreamFunction::dyy(double x, double y) const {
  double r = 0.0;
  for (const auto& m : modes)
    r += kTwoPi * kTwoPi * m.ky * m.ky * phase_derivative(m, kTwoPi * (m.kx * x + m.ky * y), 2);
  return r;
}

AreaPreservingMap shear_x(FourierProfile g) {
  AreaPreservingMap m;
  m.kind = MapKind::ShearX;
  m.profile = std::move(g);
  return m;
}

AreaPreservingMap shear_y(FourierProfile h) {
  AreaPreservingMap m;
  m.kind = MapKind::ShearY;
  m.profile = std::move(h);
  return m;
}

AreaPreservingMap hamiltonian_flow_map(StreamFunction H, double t, int steps) {
  if (steps < 1) throw Error(ErrorCode::DomainMismatch, "flow needs at least one step");
  AreaPreservingMap m;
  m.kind = MapKind::HamiltonianFlow;
  m.stream = std::move(H);
  m.time = t;
  m.steps = steps;
  return m;
}

AreaPreservingMap simplicial_automorphism(std::vector<int> perm) {
  AreaPreservingMap m;
  m.kind = MapKind::SimplicialAutomorphism;
  m.permutation = std::move(perm);
  return m;
}

// One step: y1 = y0 - h Hx(x0, y1), x1 = x0 + h Hy(x0, y1). Inverse: solve
// x0 = x1 - h Hy(x0, y1), then y0 = y1 + h Hx(x0, y1).
Point2 AreaPreservingMap::forward(Point2 p) const {
  switch (kind) {
    case MapKind::ShearX: return {p[0] + profile.value(p[1]), p[1]};
    case MapKind::ShearY: return {p[0], p[1] + profile.value(p[0])};
    case MapKind::HamiltonianFlow: {
      const double h = time / steps;
      for (int s = 0; s < steps; ++s) {
        double y = p[1];
        for (int it = 0; it < 50; ++it) {
          const double r = y - p[1] + h * stream.dx(p[0], y);
          const double dy = r / (1.0 + h * stream.dxy(p[0], y));
          y -= dy;
          if (std::abs(dy) < 1e-15) break;
        }
        p = {p[0] + h * stream.dy(p[0], y), y};
      }
      return p;
    }
    case MapKind::SimplicialAutomorphism: break;
  }
  throw Error(ErrorCode::DomainMismatch, "simplicial automorphisms act on vertices only");
}

Point2 AreaPreservingMap::inverse(Point2 p) const {
  switch (kind) {
    case MapKind::ShearX: return {p[0] - profile.value(p[1]), p[1]};
    case MapKind::ShearY: return {p[0], p[1] - profile.value(p[0])};
    case MapKind::HamiltonianFlow: {
      const double h = time / steps;
      for (int s = 0; s < steps; ++s) {
        double x = p[0];
        for (int it = 0; it < 50; ++it) {
          const double r = x - p[0] + h * stream.dy(x, p[1]);
          const double dx = r / (1.0 + h * stream.dxy(x, p[1]));
          x -= dx;
          if (std::abs(dx) < 1e-15) break;
        }
        p = {x, p[1] + h * stream.dx(x, p[1])};
      }
      return p;
    }
    case MapKind::SimplicialAutomorphism: break;
  }
  throw Error(ErrorCode::DomainMismatch, "simplicial automorphisms act on vertices only");
}

std::string AreaPreservingMap::describe() const {
  std::ostringstream os;
  os.precision(17);
  switch (kind) {
    case MapKind::ShearX:
    case MapKind::ShearY:
      os << (kind == MapKind::ShearX ? "shear_x" : "shear_y") << " offset=" << profile.offset;
      for (const auto& m : profile.modes) os << " [" << m.k << "," << m.cosCoef << "," << m.sinCoef << "]";
      break;
    case MapKind::HamiltonianFlow:
      os << "ham t=" << time << " steps=" << steps << " step=" << time / steps << " scheme=symplectic-euler";
      for (const auto& m : stream.modes)
        os << " [" << m.kx << "," << m.ky << "," << m.cosCoef << "," << m.sinCoef << "]";
      break;
    case MapKind::SimplicialAutomorphism:
      os << "perm n=" << permutation.size();
      break;
  }
  return os.str();
}

namespace {

void pull_cochain(const TriMeshField& mesh, const AreaPreservingMap& map, const TorusLocator& loc,
                  TriMeshField& out) {
  {
    const Topology topo = build_topology(mesh);
    const auto values = cochain_on_edges(mesh, topo);
    // Whitney form of the cochain at a point, as a vector
    auto whitney = [&](Point2 q) {
      std::array<double, 3> b;
      const int t = loc.locate(q, b);
      const auto P = loc.unwrapped(t);
      const double d = (P[1][0] - P[0][0]) * (P[2][1] - P[0][1]) - (P[2][0] - P[0][0]) * (P[1][1] - P[0][1]);
      std::array<Point2, 3> grad;
      for (int i = 0; i < 3; ++i) {
        const Point2& a = P[(i + 1) % 3];
        const Point2& c = P[(i + 2) % 3];
        grad[i] = {-(c[1] - a[1]) / d, (c[0] - a[0]) / d};
      }
      Point2 w{0.0, 0.0};
      for (int k = 0; k < 3; ++k) {
        const int i = k, j = (k + 1) % 3;
        const double c = topo.triSign[t][k] * values[topo.triEdges[t][k]];
        for (int x = 0; x < 2; ++x) w[x] += c * (b[i] * grad[j][x] - b[j] * grad[i][x]);
      }
      return w;
    };
    constexpr int kSub = 16;
    std::vector<double> pulled(topo.nE, 0.0);
    for (int e = 0; e < topo.nE; ++e) {
      const Vec3& A = mesh.vertices[topo.edges[e][0]];
      const Vec3& B = mesh.vertices[topo.edges[e][1]];
      const Point2 d{wrap_half(B[0] - A[0]), wrap_half(B[1] - A[1])};
      Point2 prev = map.inverse({A[0], A[1]});
      double sum = 0.0;
      for (int s = 1; s <= kSub; ++s) {
        const double u = static_cast<double>(s) / kSub;
        const Point2 cur = map.inverse({A[0] + u * d[0], A[1] + u * d[1]});
        const Point2 mid{0.5 * (prev[0] + cur[0]), 0.5 * (prev[1] + cur[1])};
        const Point2 w = whitney(mid);
        sum += w[0] * (cur[0] - prev[0]) + w[1] * (cur[1] - prev[1]);
        prev = cur;
      }
      pulled[e] = sum;
    }
    out.cochain = make_cochain(topo, pulled);
  }
}

}  // namespace

TriMeshField apply_map(const TriMeshField& mesh, const AreaPreservingMap& map) {
  if (map.kind == MapKind::SimplicialAutomorphism) return apply_permutation(mesh, map.permutation);
  check_flat_torus(mesh);
  const TorusLocator loc(mesh);
  TriMeshField out = mesh;
  const std::size_t nV = mesh.vertices.size();
  for (std::size_t v = 0; v < nV; ++v) {
    const Point2 p{mesh.vertices[v][0], mesh.vertices[v][1]};
    const Point2 q = wrap_point(map.inverse(p));
    if (q == p) continue;
    std::array<double, 3> b;
    const int t = loc.locate(q, b);
    const Tri& tri = mesh.triangles[t];
    out.field[v] = b[0] * mesh.field[tri[0]] + b[1] * mesh.field[tri[1]] + b[2] * mesh.field[tri[2]];
  }
  if (mesh.cochain) pull_cochain(mesh, map, loc, out);
  return out;
}

TriMeshField apply_map(const TriMeshField& mesh, const AreaPreservingMap& map,
                       const std::function<double(double, double)>& field) {
  if (map.kind == MapKind::SimplicialAutomorphism) {
    throw Error(ErrorCode::DomainMismatch, "closed-form pullback needs a point map");
  }
  check_flat_torus(mesh);
  TriMeshField out = mesh;
  for (std::size_t v = 0; v < mesh.vertices.size(); ++v) {
    const Point2 q = wrap_point(map.inverse({mesh.vertices[v][0], mesh.vertices[v][1]}));
    out.field[v] = field(q[0], q[1]);
  }
  if (mesh.cochain) pull_cochain(mesh, map, TorusLocator(mesh), out);
  return out;
}

AreaPreservingMap map_from_json(const std::string& text) {
  using nlohmann::json;
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Parse, std::string("map description: ") + e.what());
  }
  try {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "shear_x" || kind == "shear_y") {
      FourierProfile p;
      p.offset = j.value("offset", 0.0);
      for (const auto& m : j.value("modes", json::array())) {
        p.modes.push_back({m.at(0).get<int>(), m.at(1).get<double>(), m.at(2).get<double>()});
      }
      return kind == "shear_x" ? shear_x(p) : shear_y(p);
    }
    if (kind == "ham") {
      StreamFunction H;
      for (const auto& m : j.value("modes", json::array())) {
        H.modes.push_back({m.at(0).get<int>(), m.at(1).get<int>(), m.at(2).get<double>(),
                           m.at(3).get<double>()});
      }
      return hamiltonian_flow_map(H, j.at("t").get<double>(), j.value("steps", 64));
    }
    if (kind == "perm") return simplicial_automorphism(j.at("permutation").get<std::vector<int>>());
    throw Error(ErrorCode::Parse, "unknown map kind '" + kind + "'");
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Parse, std::string("map description: ") + e.what());
  }
}

}  // namespace symreeb
