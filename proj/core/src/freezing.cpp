#include "symreeb/freezing.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <set>

#include <json.hpp>

#include "symreeb/error.hpp"

namespace symreeb {

namespace {

int other_end(const ReebEdge& e, int v) { return e.src == v ? e.dst : e.src; }

// Reduced vertex on the given side of the cut through a reduced edge.
int side_of_cut(const ReducedGraph& rg, const RetractTarget& t) {
  if (t.vertex >= 0) return t.vertex;
  if (t.edge < 0) return -1;
  const ReducedEdge& r = rg.edges[t.edge];
  const int k = r.regularSlot;
  const double cut = k + (r.forward[k] > 0 ? r.regularParam : 1.0 - r.regularParam);
  return t.position < cut ? r.a : r.b;
}

RetractTarget locate(const ReducedGraph& rg, int fullEdge, double param) {
  const int k = rg.edgeSlot[fullEdge];
  if (k < 0) return rg.edgeTarget[fullEdge];
  RetractTarget t = rg.edgeTarget[fullEdge];
  const int dir = rg.edges[t.edge].forward[k];
  t.position = k + (dir > 0 ? param : 1.0 - param);
  return t;
}

}  // namespace

ReducedGraph reduced_graph(const MeasuredReebGraph& g) {
  const int nv = static_cast<int>(g.vertices.size());
  const int ne = static_cast<int>(g.edges.size());
  ReducedGraph rg;
  rg.vertexTarget.assign(nv, {});
  rg.edgeTarget.assign(ne, {});
  rg.edgeSlot.assign(ne, -1);

  std::vector<std::vector<int>> inc(nv);
  for (const auto& e : g.edges) {
    inc[e.src].push_back(e.id);
    inc[e.dst].push_back(e.id);
  }
  std::vector<int> deg(nv);
  for (int v = 0; v < nv; ++v) deg[v] = static_cast<int>(inc[v].size());
  std::vector<char> edgeAlive(ne, 1), vertexAlive(nv, 1);
  std::queue<int> leaves;
  for (int v = 0; v < nv; ++v)
    if (deg[v] <= 1) leaves.push(v);
  while (!leaves.empty()) {
    const int v = leaves.front();
    leaves.pop();
    if (!vertexAlive[v] || deg[v] > 1) continue;
    vertexAlive[v] = 0;
    for (int e : inc[v]) {
      if (!edgeAlive[e]) continue;
      edgeAlive[e] = 0;
      const int w = other_end(g.edges[e], v);
      if (--deg[w] <= 1) leaves.push(w);
    }
  }
  std::vector<int> reducedId(nv, -1);
  for (int v = 0; v < nv; ++v) {
    if (vertexAlive[v] && deg[v] >= 3) {
      reducedId[v] = static_cast<int>(rg.vertices.size());
      rg.vertices.push_back(v);
    }
  }
  std::vector<char> used(ne, 0);
  auto trace = [&](int start, int e) {
    ReducedEdge r;
    r.id = static_cast<int>(rg.edges.size());
    r.a = start >= 0 ? reducedId[start] : -1;
    int cur = start >= 0 ? start : g.edges[e].src;
    const int origin = cur;
    while (true) {
      used[e] = 1;
      const ReebEdge& E = g.edges[e];
      const int slot = static_cast<int>(r.chain.size());
      r.chain.push_back(e);
      r.forward.push_back(E.src == cur ? 1 : -1);
      r.mass += E.profile.mass;
      rg.edgeSlot[e] = slot;
      rg.edgeTarget[e] = {-1, r.id, static_cast<double>(slot)};
      cur = other_end(E, cur);
      if (reducedId[cur] >= 0 || (start < 0 && cur == origin)) break;
      rg.vertexTarget[cur] = {-1, r.id, static_cast<double>(slot + 1)};
      int next = -1;
      for (int f : inc[cur])
        if (edgeAlive[f] && f != e) next = f;
      e = next;
    }
    r.b = start >= 0 ? reducedId[cur] : -1;
    if (start < 0) rg.vertexTarget[origin] = {-1, r.id, 0.0};
    int best = 0;
    for (int k = 1; k < static_cast<int>(r.chain.size()); ++k) {
      const double m = g.edges[r.chain[k]].profile.mass, mb = g.edges[r.chain[best]].profile.mass;
      if (m > mb || (m == mb && r.chain[k] < r.chain[best])) best = k;
    }
    r.regularSlot = best;
    rg.edges.push_back(std::move(r));
  };
  for (int rv = 0; rv < static_cast<int>(rg.vertices.size()); ++rv) {
    const int v = rg.vertices[rv];
    rg.vertexTarget[v] = {rv, -1, 0.0};
    std::vector<int> es;
    for (int e : inc[v])
      if (edgeAlive[e]) es.push_back(e);
    std::sort(es.begin(), es.end());
    for (int e : es)
      if (!used[e]) trace(v, e);
  }
  if (rg.vertices.empty()) {
    int first = -1;
    for (int e = 0; e < ne && first < 0; ++e)
      if (edgeAlive[e]) first = e;
    if (first >= 0) trace(-1, first);
  }

  // hanging trees retract onto their attaching core vertex
  std::queue<int> q;
  std::vector<char> reached(nv, 0);
  for (int v = 0; v < nv; ++v) {
    if (vertexAlive[v]) {
      reached[v] = 1;
      q.push(v);
    }
  }
  while (!q.empty()) {
    const int v = q.front();
    q.pop();
    for (int e : inc[v]) {
      if (edgeAlive[e]) continue;
      const int w = other_end(g.edges[e], v);
      if (reached[w]) continue;
      reached[w] = 1;
      rg.vertexTarget[w] = rg.vertexTarget[v];
      rg.edgeTarget[e] = rg.vertexTarget[v];
      q.push(w);
    }
  }
  return rg;
}

double regular_level(const MeasuredReebGraph& g, const ReducedEdge& e) {
  const ReebEdge& E = g.edges[e.regular_edge()];
  const double a = g.vertices[E.src].f, b = g.vertices[E.dst].f;
  return a + e.regularParam * (b - a);
}

LevelCycle level_cycle_near(const TriMeshField& mesh, const Topology& topo,
                            const MeasuredReebGraph& g, const ProjectionMap& proj, int edge,
                            double z) {
  const ReebEdge& E = g.edges[edge];
  const double span = g.vertices[E.dst].f - g.vertices[E.src].f;
  for (int k = 0; k < 16; ++k) {
    const double step = span * 1e-7 * ((k + 1) / 2) * (k % 2 ? 1.0 : -1.0);
    try {
      return level_cycle(mesh, topo, g, proj, edge, z + step);
    } catch (const Error& err) {
      if (err.code() != ErrorCode::HitsVertex) throw;
    }
  }
  throw Error(ErrorCode::HitsVertex, "no vertex-free level near " + std::to_string(z));
}

std::vector<std::vector<int>> edge_homology_classes(const TriMeshField& mesh, const Topology& topo,
                                                    const MeasuredReebGraph& g,
                                                    const ProjectionMap& proj,
                                                    const ReducedGraph& reduced,
                                                    const HomologyBasis& basis) {
  std::vector<std::vector<int>> out;
  for (const auto& r : reduced.edges) {
    const LevelCycle cyc = level_cycle_near(mesh, topo, g, proj, r.regular_edge(), regular_level(g, r));
    out.push_back(homology_class(basis, snap_level_cycle(mesh, topo, cyc).chain));
  }
  return out;
}

PantsColoring pants_coloring(const TriMeshField& mesh, const Topology& topo,
                             const MeasuredReebGraph& g, const ProjectionMap& proj,
                             const ReducedGraph& reduced) {
  if (topo.genus() < 2) {
    throw Error(ErrorCode::GenusTooSmall, "pants decompositions need genus at least 2, got " +
                                              std::to_string(topo.genus()));
  }
  const auto& f = mesh.field;
  const int nr = static_cast<int>(reduced.vertices.size());
  PantsColoring pc;
  pc.regions.assign(nr, {});
  pc.incidentEdges.assign(nr, {});
  for (const auto& r : reduced.edges) {
    pc.incidentEdges[r.a].push_back(r.id);
    pc.incidentEdges[r.b].push_back(r.id);
  }
  std::vector<int> owner(topo.nT, -1);
  std::vector<RetractTarget> where(topo.nT);
  for (int t = 0; t < topo.nT; ++t) {
    const Tri& tri = mesh.triangles[t];
    const double zc = (f[tri[0]] + f[tri[1]] + f[tri[2]]) / 3.0;
    const int e = proj.edge_at(t, zc);
    RetractTarget target;
    if (e >= 0) {
      const ReebEdge& E = g.edges[e];
      const double a = g.vertices[E.src].f, b = g.vertices[E.dst].f;
      target = locate(reduced, e, (zc - a) / (b - a));
    } else {
      // centroid on a critical level: fall back to the middle vertex
      std::array<int, 3> s = tri;
      std::sort(s.begin(), s.end(), [&](int x, int y) { return vertex_below(f, x, y); });
      const int v = s[1];
      if (proj.vertexNode[v] >= 0) target = reduced.vertexTarget[proj.vertexNode[v]];
      else target = locate(reduced, proj.vertexEdge[v], proj.vertexParam[v]);
    }
    where[t] = target;
    owner[t] = side_of_cut(reduced, target);
    if (owner[t] < 0) throw Error(ErrorCode::InternalSweep, "triangle outside every pants region");
    pc.regions[owner[t]].push_back(t);
  }
  // two triangles of one region still lie on opposite sides of a loop's cut
  auto cut_between = [&](int t, int u) {
    const RetractTarget &a = where[t], &b = where[u];
    if (a.vertex >= 0 || b.vertex >= 0 || a.edge < 0 || a.edge != b.edge) return false;
    const ReducedEdge& r = reduced.edges[a.edge];
    if (!r.loop()) return false;
    const int k = r.regularSlot;
    if (static_cast<int>(a.position) != k || static_cast<int>(b.position) != k) return false;
    const double cut = k + (r.forward[k] > 0 ? r.regularParam : 1.0 - r.regularParam);
    return (a.position < cut) != (b.position < cut);
  };
  auto across = [&](int t, int k) {
    const int e = topo.triEdges[t][k];
    return topo.edgeTris[e][0] == t ? topo.edgeTris[e][1] : topo.edgeTris[e][0];
  };
  auto is_boundary = [&](int t, int k) {
    const int u = across(t, k);
    return owner[u] != owner[t] || cut_between(t, u);
  };
  pc.euler.assign(nr, 0);
  pc.boundaryComponents.assign(nr, 0);
  for (int p = 0; p < nr; ++p) {
    std::set<int> verts, edges;
    for (int t : pc.regions[p]) {
      for (int k = 0; k < 3; ++k) {
        verts.insert(mesh.triangles[t][k]);
        edges.insert(topo.triEdges[t][k]);
      }
    }
    pc.euler[p] = static_cast<int>(verts.size()) - static_cast<int>(edges.size()) +
                  static_cast<int>(pc.regions[p].size());
    // walk the boundary sides: from side k of t, rotate about its head vertex
    // inside the region until the next boundary side
    std::set<std::pair<int, int>> pending;
    for (int t : pc.regions[p])
      for (int k = 0; k < 3; ++k)
        if (is_boundary(t, k)) pending.insert({t, k});
    while (!pending.empty()) {
      auto [t0, k0] = *pending.begin();
      int t = t0, k = k0;
      std::size_t guard = 0;
      do {
        pending.erase({t, k});
        const int head = mesh.triangles[t][(k + 1) % 3];
        int side = (k + 1) % 3;  // starts at head
        while (!is_boundary(t, side)) {
          const int u = across(t, side);
          int ku = 0;
          while (mesh.triangles[u][ku] != head) ++ku;
          t = u;
          side = ku;
          if (++guard > 4 * static_cast<std::size_t>(topo.nT)) {
            throw Error(ErrorCode::InternalSweep, "pants boundary walk did not close");
          }
        }
        k = side;
      } while (!(t == t0 && k == k0));
      ++pc.boundaryComponents[p];
    }
  }
  return pc;
}

std::vector<std::pair<int, int>> half_twists(const ReducedGraph& reduced,
                                             const std::vector<std::vector<int>>& edgeClasses) {
  std::vector<std::pair<int, int>> out;
  for (const auto& r : reduced.edges) {
    if (!r.loop() || r.a < 0) continue;
    // coorientation: the side reached by moving forward along the loop. With
    // that side on the left, the orientation agrees with the level cycle's own
    // (sublevel on the left) exactly when forward means decreasing f.
    const int flip = r.forward[r.regularSlot] > 0 ? -1 : 1;
    int lead = 0;
    for (int c : edgeClasses[r.id]) {
      if (c != 0) {
        lead = c;
        break;
      }
    }
    out.emplace_back(r.id, lead * flip >= 0 ? 1 : -1);
  }
  if (out.empty()) throw Error(ErrorCode::NoLoops, "reduced graph has no loops");
  return out;
}

FrozenData freeze(const TriMeshField& mesh, const Topology& topo, const ReebResult& reeb) {
  FrozenData fd;
  fd.genus = topo.genus();
  fd.reduced = reduced_graph(reeb.graph);
  fd.basis = homology_basis(mesh, topo);
  for (const auto& r : fd.reduced.edges) fd.regularLevels.push_back(regular_level(reeb.graph, r));
  fd.edgeClasses = edge_homology_classes(mesh, topo, reeb.graph, reeb.projection, fd.reduced, fd.basis);
  if (fd.genus >= 2) fd.pants = pants_coloring(mesh, topo, reeb.graph, reeb.projection, fd.reduced);
  const bool anyLoop = std::any_of(fd.reduced.edges.begin(), fd.reduced.edges.end(),
                                   [](const ReducedEdge& r) { return r.loop() && r.a >= 0; });
  if (anyLoop) fd.halfTwists = half_twists(fd.reduced, fd.edgeClasses);
  return fd;
}

std::string frozen_to_json(const FrozenData& fd) {
  using nlohmann::json;
  json j;
  j["genus"] = fd.genus;
  json verts = json::array();
  for (int v : fd.reduced.vertices) verts.push_back(v);
  json edges = json::array();
  for (const auto& r : fd.reduced.edges) {
    edges.push_back({{"id", r.id},
                     {"a", r.a},
                     {"b", r.b},
                     {"chain", r.chain},
                     {"regular_edge", r.regular_edge()},
                     {"regular_level", fd.regularLevels[r.id]},
                     {"class", fd.edgeClasses[r.id]}});
  }
  j["reduced"] = {{"vertices", verts}, {"edges", edges}};
  j["intersection"] = fd.basis.intersection;
  j["pants"] = {{"regions", fd.pants.regions},
                {"euler", fd.pants.euler},
                {"boundary_components", fd.pants.boundaryComponents}};
  json ht = json::object();
  for (const auto& [id, s] : fd.halfTwists) ht[std::to_string(id)] = s;
  j["half_twists"] = ht;
  return j.dump(2);
}

}  // namespace symreeb
