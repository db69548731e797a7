#include "symreeb/topology.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <queue>
#include <string>
#include <unordered_map>

#include "symreeb/error.hpp"

namespace symreeb {

namespace {

std::uint64_t edge_key(int a, int b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint32_t>(b);
}

}  // namespace

double triangle_area(const Vec3& a, const Vec3& b, const Vec3& c) {
  const double ux = b[0] - a[0], uy = b[1] - a[1], uz = b[2] - a[2];
  const double vx = c[0] - a[0], vy = c[1] - a[1], vz = c[2] - a[2];
  const double cx = uy * vz - uz * vy;
  const double cy = uz * vx - ux * vz;
  const double cz = ux * vy - uy * vx;
  return 0.5 * std::sqrt(cx * cx + cy * cy + cz * cz);
}

int Topology::edge_index(int a, int b) const {
  if (a > b) std::swap(a, b);
  for (int e : vertexEdges[a]) {
    if (edges[e][0] == a && edges[e][1] == b) return e;
  }
  return -1;
}

Topology build_topology(const TriMeshField& mesh) {
  Topology topo;
  topo.nV = static_cast<int>(mesh.vertices.size());
  topo.nT = static_cast<int>(mesh.triangles.size());
  if (static_cast<int>(mesh.field.size()) != topo.nV) {
    throw Error(ErrorCode::Parse, "field length " + std::to_string(mesh.field.size()) +
                                      " != vertex count " + std::to_string(topo.nV));
  }
  if (topo.nT == 0) throw Error(ErrorCode::NotClosed, "mesh has no triangles");
  if (mesh.areaOverride && static_cast<int>(mesh.areaOverride->size()) != topo.nT) {
    throw Error(ErrorCode::Parse, "area_override length mismatch");
  }

  topo.triEdges.resize(topo.nT);
  topo.triSign.resize(topo.nT);
  topo.vertexTris.assign(topo.nV, {});
  topo.vertexEdges.assign(topo.nV, {});

  std::unordered_map<std::uint64_t, int> index;
  index.reserve(static_cast<std::size_t>(topo.nT) * 2);
  // count of a->b and b->a traversals per edge, used for closedness checks
  std::vector<std::array<int, 2>> uses;

  for (int t = 0; t < topo.nT; ++t) {
    const Tri& tri = mesh.triangles[t];
    for (int k = 0; k < 3; ++k) {
      if (tri[k] < 0 || tri[k] >= topo.nV) {
        throw Error(ErrorCode::Index, "triangle " + std::to_string(t) + " references vertex " +
                                          std::to_string(tri[k]));
      }
    }
    if (tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2]) {
      throw Error(ErrorCode::ZeroArea, "triangle " + std::to_string(t) + " repeats a vertex");
    }
    for (int k = 0; k < 3; ++k) {
      const int a = tri[k], b = tri[(k + 1) % 3];
      auto [it, fresh] = index.try_emplace(edge_key(a, b), topo.nE);
      if (fresh) {
        topo.edges.push_back({std::min(a, b), std::max(a, b)});
        topo.edgeTris.push_back({-1, -1});
        uses.push_back({0, 0});
        topo.vertexEdges[std::min(a, b)].push_back(topo.nE);
        topo.vertexEdges[std::max(a, b)].push_back(topo.nE);
        ++topo.nE;
      }
      const int e = it->second;
      const int side = a < b ? 0 : 1;
      topo.triEdges[t][k] = e;
      topo.triSign[t][k] = side == 0 ? 1 : -1;
      if (++uses[e][side] > 1) {
        throw Error(ErrorCode::NotOrientable,
                    "edge (" + std::to_string(a) + "," + std::to_string(b) +
                        ") traversed twice in the same direction (triangle " + std::to_string(t) +
                        ")");
      }
      topo.edgeTris[e][side] = t;
    }
    for (int k = 0; k < 3; ++k) topo.vertexTris[tri[k]].push_back(t);
  }

  for (int e = 0; e < topo.nE; ++e) {
    if (uses[e][0] != 1 || uses[e][1] != 1) {
      throw Error(ErrorCode::NotClosed, "edge (" + std::to_string(topo.edges[e][0]) + "," +
                                            std::to_string(topo.edges[e][1]) +
                                            ") has a single incident triangle");
    }
  }
  for (int v = 0; v < topo.nV; ++v) {
    if (topo.vertexTris[v].empty()) {
      throw Error(ErrorCode::NotConnected, "vertex " + std::to_string(v) + " is isolated");
    }
  }

  // triangle adjacency connectivity
  {
    std::vector<char> seen(topo.nT, 0);
    std::queue<int> q;
    q.push(0);
    seen[0] = 1;
    int count = 1;
    while (!q.empty()) {
      const int t = q.front();
      q.pop();
      for (int k = 0; k < 3; ++k) {
        const int e = topo.triEdges[t][k];
        const int u = topo.edgeTris[e][0] == t ? topo.edgeTris[e][1] : topo.edgeTris[e][0];
        if (!seen[u]) {
          seen[u] = 1;
          ++count;
          q.push(u);
        }
      }
    }
    if (count != topo.nT) {
      for (int t = 0; t < topo.nT; ++t) {
        if (!seen[t]) {
          throw Error(ErrorCode::NotConnected,
                      "triangle " + std::to_string(t) + " is not reachable from triangle 0");
        }
      }
    }
  }

  // each vertex star must be a single disk
  for (int v = 0; v < topo.nV; ++v) {
    if (topo.vertexEdges[v].size() != topo.vertexTris[v].size()) {
      throw Error(ErrorCode::NotClosed, "vertex " + std::to_string(v) + " is not a manifold point");
    }
  }

  topo.area.resize(topo.nT);
  for (int t = 0; t < topo.nT; ++t) {
    const Tri& tri = mesh.triangles[t];
    const double a = mesh.areaOverride
                         ? (*mesh.areaOverride)[t]
                         : triangle_area(mesh.vertices[tri[0]], mesh.vertices[tri[1]],
                                         mesh.vertices[tri[2]]);
    if (!(a > 0.0) || !std::isfinite(a)) {
      throw Error(ErrorCode::ZeroArea, "triangle " + std::to_string(t) + " has area " +
                                           std::to_string(a));
    }
    topo.area[t] = a;
  }
  return topo;
}

std::vector<int> vertex_link(const TriMeshField& mesh, const Topology& topo, int v) {
  // Triangle (v, a, b) in ccw order means b follows a around v.
  const auto& star = topo.vertexTris[v];
  std::unordered_map<int, int> next;
  next.reserve(star.size() * 2);
  for (int t : star) {
    const Tri& tri = mesh.triangles[t];
    int k = 0;
    while (tri[k] != v) ++k;
    next[tri[(k + 1) % 3]] = tri[(k + 2) % 3];
  }
  std::vector<int> link;
  link.reserve(star.size());
  const int start = next.begin()->first;
  int cur = start;
  do {
    link.push_back(cur);
    auto it = next.find(cur);
    if (it == next.end() || link.size() > star.size()) {
      throw Error(ErrorCode::NotClosed, "vertex " + std::to_string(v) + " has a broken link");
    }
    cur = it->second;
  } while (cur != start);
  if (link.size() != star.size()) {
    throw Error(ErrorCode::NotClosed, "vertex " + std::to_string(v) + " is not a manifold point");
  }
  return link;
}

int lower_link_components(const TriMeshField& mesh, const Topology& topo, int v) {
  const auto link = vertex_link(mesh, topo, v);
  const int n = static_cast<int>(link.size());
  int lowerCount = 0;
  int runs = 0;
  for (int i = 0; i < n; ++i) {
    const bool lo = vertex_below(mesh.field, link[i], v);
    const bool prevLo = vertex_below(mesh.field, link[(i + n - 1) % n], v);
    lowerCount += lo;
    if (lo && !prevLo) ++runs;
  }
  if (lowerCount == n) return 1;
  return runs;
}

std::vector<double> cochain_on_edges(const TriMeshField& mesh, const Topology& topo) {
  std::vector<double> out(topo.nE, 0.0);
  if (!mesh.cochain) return out;
  const Cochain& c = *mesh.cochain;
  if (c.edges.size() != c.values.size()) {
    throw Error(ErrorCode::Parse, "cochain edges/values length mismatch");
  }
  for (std::size_t i = 0; i < c.edges.size(); ++i) {
    const int a = c.edges[i][0], b = c.edges[i][1];
    if (a < 0 || b < 0 || a >= topo.nV || b >= topo.nV) {
      throw Error(ErrorCode::Index, "cochain references vertex out of range");
    }
    const int e = topo.edge_index(a, b);
    if (e < 0) {
      throw Error(ErrorCode::Index, "cochain edge (" + std::to_string(a) + "," +
                                        std::to_string(b) + ") is not a mesh edge");
    }
    out[e] = a < b ? c.values[i] : -c.values[i];
  }
  return out;
}

Cochain make_cochain(const Topology& topo, const std::vector<double>& values) {
  Cochain c;
  c.edges = topo.edges;
  c.values = values;
  return c;
}

}  // namespace symreeb
