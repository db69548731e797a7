#include "symreeb/reeb.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <queue>
#include <string>

#include "symreeb/error.hpp"
#include "symreeb/pl_measure.hpp"

namespace symreeb {

namespace {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (a < b) std::swap(a, b);
    parent[a] = b;  // smaller index becomes root
  }
};

// Strips spanned by a rank interval (lo, hi): k with lo < C[k+1] and hi > C[k].
std::pair<int, int> strip_range(const std::vector<int>& C, int lo, int hi) {
  const int first = static_cast<int>(std::upper_bound(C.begin(), C.end(), lo) - C.begin()) - 1;
  const int last = static_cast<int>(std::lower_bound(C.begin(), C.end(), hi) - C.begin()) - 1;
  return {first, last};
}

std::vector<double> profile_levels(double a, double b, bool saddleAtA, bool saddleAtB,
                                   const std::vector<double>& crossed, const ReebOptions& opts) {
  std::vector<double> z;
  const double ext = b - a;
  z.push_back(a);
  z.push_back(b);
  for (double c : crossed) z.push_back(c);
  const int n = std::max(opts.interiorLevels, 1);
  for (int i = 1; i <= n; ++i) z.push_back(a + ext * static_cast<double>(i) / (n + 1));
  const double D = 0.25 * ext;
  double step = D;
  for (int j = 0; j < opts.saddleLevels; ++j) {
    if (saddleAtA) z.push_back(a + step);
    if (saddleAtB) z.push_back(b - step);
    step *= opts.saddleRatio;
  }
  std::sort(z.begin(), z.end());
  std::vector<double> out;
  const double eps = 1e-13 * ext;
  for (double v : z) {
    if (v < a || v > b) continue;
    if (!out.empty() && v - out.back() <= eps) {
      if (v == b) out.back() = b;
      continue;
    }
    out.push_back(v);
  }
  if (out.front() != a) out.insert(out.begin(), a);
  return out;
}

}  // namespace

std::vector<int> MeasuredReebGraph::out_edges(int v) const {
  std::vector<int> r;
  for (const auto& e : edges)
    if (e.src == v) r.push_back(e.id);
  return r;
}

std::vector<int> MeasuredReebGraph::in_edges(int v) const {
  std::vector<int> r;
  for (const auto& e : edges)
    if (e.dst == v) r.push_back(e.id);
  return r;
}

double MeasuredReebGraph::f_range() const {
  if (vertices.empty()) return 0.0;
  double lo = vertices[0].f, hi = vertices[0].f;
  for (const auto& v : vertices) {
    lo = std::min(lo, v.f);
    hi = std::max(hi, v.f);
  }
  return hi - lo;
}

int ProjectionMap::strip_of(double z) const {
  const auto it = std::upper_bound(critValues.begin(), critValues.end(), z);
  return static_cast<int>(it - critValues.begin()) - 1;
}

int ProjectionMap::edge_at(int t, double z) const {
  const int k = strip_of(z);
  const int rel = k - firstStrip[t];
  if (rel < 0 || rel >= pieceOffset[t + 1] - pieceOffset[t]) return -1;
  return pieceEdge[pieceOffset[t] + rel];
}

ReebResult build_reeb(const TriMeshField& mesh, const ReebOptions& opts) {
  const SurfaceReport rep = validate(mesh);
  const Topology topo = build_topology(mesh);
  const auto& f = mesh.field;
  const int nV = topo.nV, nT = topo.nT;

  std::vector<int> order(nV);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) { return vertex_below(f, a, b); });
  std::vector<int> rank(nV);
  for (int i = 0; i < nV; ++i) rank[order[i]] = i;

  std::vector<CriticalPoint> crit = rep.criticalPoints;
  std::sort(crit.begin(), crit.end(),
            [&](const CriticalPoint& a, const CriticalPoint& b) { return rank[a.vertex] < rank[b.vertex]; });
  const int m = static_cast<int>(crit.size());
  if (m < 2) throw Error(ErrorCode::InternalSweep, "fewer than two critical points");
  for (int k = 1; k < m; ++k) {
    if (f[crit[k].vertex] == f[crit[k - 1].vertex]) {
      throw Error(ErrorCode::NotSimple, "critical vertices " + std::to_string(crit[k - 1].vertex) +
                                            " and " + std::to_string(crit[k].vertex) +
                                            " share a value");
    }
  }
  std::vector<int> C(m);
  std::vector<double> c(m);
  for (int k = 0; k < m; ++k) {
    C[k] = rank[crit[k].vertex];
    c[k] = f[crit[k].vertex];
  }

  ProjectionMap proj;
  proj.critValues = c;
  proj.critVertices.resize(m);
  for (int k = 0; k < m; ++k) proj.critVertices[k] = crit[k].vertex;

  // pieces = (triangle, strip)
  proj.firstStrip.resize(nT);
  proj.pieceOffset.assign(nT + 1, 0);
  std::vector<std::array<int, 3>> triRanks(nT);
  for (int t = 0; t < nT; ++t) {
    const Tri& tri = mesh.triangles[t];
    std::array<int, 3> r{rank[tri[0]], rank[tri[1]], rank[tri[2]]};
    std::sort(r.begin(), r.end());
    triRanks[t] = r;
    const auto [k0, k1] = strip_range(C, r[0], r[2]);
    proj.firstStrip[t] = k0;
    proj.pieceOffset[t + 1] = proj.pieceOffset[t] + (k1 - k0 + 1);
  }
  const int nPieces = proj.pieceOffset[nT];
  auto piece = [&](int t, int k) { return proj.pieceOffset[t] + (k - proj.firstStrip[t]); };

  UnionFind uf(nPieces);
  for (int e = 0; e < topo.nE; ++e) {
    const int ra = rank[topo.edges[e][0]], rb = rank[topo.edges[e][1]];
    const auto [k0, k1] = strip_range(C, std::min(ra, rb), std::max(ra, rb));
    const int t1 = topo.edgeTris[e][0], t2 = topo.edgeTris[e][1];
    for (int k = k0; k <= k1; ++k) uf.unite(piece(t1, k), piece(t2, k));
  }

  // level components through each saddle
  proj.figureEight.assign(m, {});
  for (int k = 0; k < m; ++k) {
    if (crit[k].kind != CriticalKind::Saddle) continue;
    const int s = crit[k].vertex;
    std::vector<int>& fig = proj.figureEight[k];
    std::map<int, char> mark;
    std::queue<int> q;
    for (int t : topo.vertexTris[s]) {
      if (triRanks[t][1] == C[k]) {
        mark[t] = 1;
        q.push(t);
      }
    }
    while (!q.empty()) {
      const int t = q.front();
      q.pop();
      fig.push_back(t);
      for (int side = 0; side < 3; ++side) {
        const int e = topo.triEdges[t][side];
        const int ra = rank[topo.edges[e][0]], rb = rank[topo.edges[e][1]];
        if (std::min(ra, rb) < C[k] && std::max(ra, rb) > C[k]) {
          const int u = topo.edgeTris[e][0] == t ? topo.edgeTris[e][1] : topo.edgeTris[e][0];
          if (mark.emplace(u, 1).second) q.push(u);
        }
      }
    }
    std::sort(fig.begin(), fig.end());
  }

  for (int t = 0; t < nT; ++t) {
    const int k0 = proj.firstStrip[t];
    const int k1 = k0 + (proj.pieceOffset[t + 1] - proj.pieceOffset[t]) - 1;
    for (int k = k0 + 1; k <= k1; ++k) {
      const auto& fig = proj.figureEight[k];
      if (std::binary_search(fig.begin(), fig.end(), t)) continue;
      uf.unite(piece(t, k - 1), piece(t, k));
    }
  }

  // components -> edges
  struct Comp {
    int kmin = 1 << 30, kmax = -1;
    long firstKey = -1;  // smallest (strip, triangle) for deterministic ordering
  };
  std::map<int, int> rootIndex;
  std::vector<Comp> comps;
  std::vector<int> pieceComp(nPieces);
  for (int t = 0; t < nT; ++t) {
    for (int p = proj.pieceOffset[t]; p < proj.pieceOffset[t + 1]; ++p) {
      const int k = proj.firstStrip[t] + (p - proj.pieceOffset[t]);
      const int r = uf.find(p);
      auto [it, fresh] = rootIndex.try_emplace(r, static_cast<int>(comps.size()));
      if (fresh) comps.push_back({});
      Comp& cc = comps[it->second];
      pieceComp[p] = it->second;
      const long key = static_cast<long>(k) * nT + t;
      if (cc.firstKey < 0 || key < cc.firstKey) cc.firstKey = key;
      cc.kmin = std::min(cc.kmin, k);
      cc.kmax = std::max(cc.kmax, k);
    }
  }
  std::vector<int> compOrder(comps.size());
  std::iota(compOrder.begin(), compOrder.end(), 0);
  std::sort(compOrder.begin(), compOrder.end(), [&](int a, int b) {
    const Comp& x = comps[a];
    const Comp& y = comps[b];
    if (x.kmin != y.kmin) return x.kmin < y.kmin;
    if (x.kmax != y.kmax) return x.kmax < y.kmax;
    return x.firstKey < y.firstKey;
  });
  std::vector<int> compEdge(comps.size());
  for (std::size_t i = 0; i < compOrder.size(); ++i) compEdge[compOrder[i]] = static_cast<int>(i);

  MeasuredReebGraph g;
  g.vertices.resize(m);
  for (int k = 0; k < m; ++k) {
    ReebVertex& v = g.vertices[k];
    v.id = k;
    v.f = c[k];
    v.kind = crit[k].kind;
    v.meshVertex = crit[k].vertex;
    double spread = 0.0;
    for (int e : topo.vertexEdges[v.meshVertex]) {
      spread = std::max(spread, std::abs(f[topo.other_vertex(e, v.meshVertex)] - v.f));
    }
    v.ringSpread = spread;
  }
  const int nEdges = static_cast<int>(comps.size());
  g.edges.resize(nEdges);
  for (int ci = 0; ci < nEdges; ++ci) {
    ReebEdge& e = g.edges[compEdge[ci]];
    e.id = compEdge[ci];
    e.src = comps[ci].kmin;
    e.dst = comps[ci].kmax + 1;
  }
  proj.pieceEdge.resize(nPieces);
  for (int p = 0; p < nPieces; ++p) proj.pieceEdge[p] = compEdge[pieceComp[p]];

  // valence pattern
  {
    std::vector<int> nin(m, 0), nout(m, 0);
    for (const auto& e : g.edges) {
      ++nout[e.src];
      ++nin[e.dst];
    }
    for (int k = 0; k < m; ++k) {
      bool ok = false;
      switch (g.vertices[k].kind) {
        case CriticalKind::Minimum: ok = nin[k] == 0 && nout[k] == 1; break;
        case CriticalKind::Maximum: ok = nin[k] == 1 && nout[k] == 0; break;
        case CriticalKind::Saddle:
          ok = (nin[k] == 2 && nout[k] == 1) || (nin[k] == 1 && nout[k] == 2);
          break;
      }
      if (!ok) {
        throw Error(ErrorCode::InternalSweep,
                    "vertex " + std::to_string(g.vertices[k].meshVertex) + " has " +
                        std::to_string(nin[k]) + " incoming and " + std::to_string(nout[k]) +
                        " outgoing edges");
      }
    }
  }

  // projection of mesh vertices
  proj.vertexNode.assign(nV, -1);
  proj.vertexEdge.assign(nV, -1);
  proj.vertexParam.assign(nV, 0.0);
  for (int k = 0; k < m; ++k) proj.vertexNode[crit[k].vertex] = k;
  for (int v = 0; v < nV; ++v) {
    if (proj.vertexNode[v] >= 0) continue;
    const int k = static_cast<int>(std::upper_bound(C.begin(), C.end(), rank[v]) - C.begin()) - 1;
    const int t = topo.vertexTris[v][0];
    const int e = proj.pieceEdge[piece(t, k)];
    proj.vertexEdge[v] = e;
    const double a = g.vertices[g.edges[e].src].f, b = g.vertices[g.edges[e].dst].f;
    proj.vertexParam[v] = std::clamp((f[v] - a) / (b - a), 0.0, 1.0);
  }

  // profiles
  std::vector<std::vector<double>> levels(nEdges);
  for (auto& e : g.edges) {
    std::vector<double> crossed;
    for (int k = e.src + 1; k < e.dst; ++k) crossed.push_back(c[k]);
    levels[e.id] = profile_levels(c[e.src], c[e.dst], g.vertices[e.src].kind == CriticalKind::Saddle,
                                  g.vertices[e.dst].kind == CriticalKind::Saddle, crossed, opts);
    e.profile.z = levels[e.id];
    e.profile.mu.assign(levels[e.id].size(), 0.0);
    e.profile.fmu.assign(levels[e.id].size(), 0.0);
    e.moments.assign(kMaxMomentOrder + 1, 0.0);
  }
  std::vector<std::vector<double>> diffMu(nEdges), diffFmu(nEdges);
  for (int i = 0; i < nEdges; ++i) {
    diffMu[i].assign(levels[i].size() + 1, 0.0);
    diffFmu[i].assign(levels[i].size() + 1, 0.0);
  }
  double mom[kMaxMomentOrder + 1];
  for (int t = 0; t < nT; ++t) {
    const Tri& tri = mesh.triangles[t];
    const TriangleDensity d = TriangleDensity::make(f[tri[0]], f[tri[1]], f[tri[2]], topo.area[t]);
    for (int p = proj.pieceOffset[t]; p < proj.pieceOffset[t + 1]; ++p) {
      const int k = proj.firstStrip[t] + (p - proj.pieceOffset[t]);
      const int ei = proj.pieceEdge[p];
      const double lo = c[k], hi = c[k + 1];
      const double base = d.sublevel(lo);
      const double full = d.sublevel(hi) - base;
      d.moments(lo, hi, kMaxMomentOrder, mom);
      auto& em = g.edges[ei].moments;
      for (int l = 0; l <= kMaxMomentOrder; ++l) em[l] += mom[l];
      const double fullF = mom[1];
      const auto& Z = levels[ei];
      const double a = std::max(lo, d.lo), b = std::min(hi, d.hi);
      int i0 = static_cast<int>(std::upper_bound(Z.begin(), Z.end(), a) - Z.begin());
      int i1 = static_cast<int>(std::lower_bound(Z.begin(), Z.end(), b) - Z.begin());
      if (b < a) i1 = i0 = static_cast<int>(std::lower_bound(Z.begin(), Z.end(), hi) - Z.begin());
      auto& mu = g.edges[ei].profile.mu;
      auto& fmu = g.edges[ei].profile.fmu;
      for (int i = i0; i < i1; ++i) {
        mu[i] += d.sublevel(Z[i]) - base;
        fmu[i] += d.first_moment(lo, Z[i]);
      }
      diffMu[ei][i1] += full;
      diffFmu[ei][i1] += fullF;
    }
  }
  double total = 0.0;
  for (auto& e : g.edges) {
    auto& P = e.profile;
    double run = 0.0, runF = 0.0;
    for (std::size_t i = 0; i < P.z.size(); ++i) {
      run += diffMu[e.id][i];
      runF += diffFmu[e.id][i];
      P.mu[i] += run;
      P.fmu[i] += runF;
    }
    P.mu.front() = 0.0;
    P.fmu.front() = 0.0;
    // keep mu strictly increasing
    EdgeProfile clean;
    for (std::size_t i = 0; i < P.z.size(); ++i) {
      const bool last = i + 1 == P.z.size();
      if (!clean.z.empty() && P.mu[i] <= clean.mu.back()) {
        if (!last || clean.z.size() == 1) continue;
        clean.z.pop_back();
        clean.mu.pop_back();
        clean.fmu.pop_back();
      }
      clean.z.push_back(P.z[i]);
      clean.mu.push_back(P.mu[i]);
      clean.fmu.push_back(P.fmu[i]);
    }
    clean.mass = clean.mu.back();
    if (!(clean.mass > 0.0) || clean.z.size() < 2 || clean.z.back() != P.z.back()) {
      throw Error(ErrorCode::InternalSweep, "edge " + std::to_string(e.id) + " has no area");
    }
    P = std::move(clean);
    e.moments[0] = P.mass;
    total += P.mass;
  }
  g.totalMass = total;
  return {std::move(g), std::move(proj)};
}

namespace {

double interp(const std::vector<double>& z, const std::vector<double>& y, double x) {
  if (x <= z.front()) return y.front();
  if (x >= z.back()) return y.back();
  const auto it = std::upper_bound(z.begin(), z.end(), x);
  const std::size_t i = static_cast<std::size_t>(it - z.begin());
  const double t = (x - z[i - 1]) / (z[i] - z[i - 1]);
  return y[i - 1] + t * (y[i] - y[i - 1]);
}

void check_range(const MeasuredReebGraph& g, int edge, double z) {
  if (edge < 0 || edge >= static_cast<int>(g.edges.size())) {
    throw Error(ErrorCode::OutOfRange, "edge " + std::to_string(edge) + " does not exist");
  }
  const auto& P = g.edges[edge].profile;
  if (!(z >= P.z.front() && z <= P.z.back())) {
    throw Error(ErrorCode::OutOfRange, "level " + std::to_string(z) + " outside edge " +
                                           std::to_string(edge) + " range");
  }
}

}  // namespace

double measure_at(const MeasuredReebGraph& g, int edge, double z) {
  check_range(g, edge, z);
  const auto& P = g.edges[edge].profile;
  return interp(P.z, P.mu, z);
}

double first_moment_at(const MeasuredReebGraph& g, int edge, double z) {
  check_range(g, edge, z);
  const auto& P = g.edges[edge].profile;
  if (!P.fmu.empty()) return interp(P.z, P.fmu, z);
  // Stieltjes midpoint sum for abstract graphs
  double acc = 0.0;
  for (std::size_t i = 1; i < P.z.size(); ++i) {
    if (P.z[i - 1] >= z) break;
    const double hiZ = std::min(P.z[i], z);
    const double hiMu = interp(P.z, P.mu, hiZ);
    acc += 0.5 * (P.z[i - 1] + hiZ) * (hiMu - P.mu[i - 1]);
  }
  return acc;
}

double safe_level(const std::vector<double>& sortedValues, double z) {
  const auto& v = sortedValues;
  if (!std::binary_search(v.begin(), v.end(), z)) return z;
  const auto hi = std::upper_bound(v.begin(), v.end(), z);
  if (hi != v.end()) return 0.5 * (z + *hi);
  const auto lo = std::lower_bound(v.begin(), v.end(), z);
  return lo == v.begin() ? z : 0.5 * (z + *(lo - 1));
}

LevelCycle level_cycle(const TriMeshField& mesh, const Topology& topo, const MeasuredReebGraph& g,
                       const ProjectionMap& proj, int edge, double z) {
  if (edge < 0 || edge >= static_cast<int>(g.edges.size())) {
    throw Error(ErrorCode::OutOfRange, "edge " + std::to_string(edge) + " does not exist");
  }
  const auto& E = g.edges[edge];
  if (!(z > g.vertices[E.src].f && z < g.vertices[E.dst].f)) {
    throw Error(ErrorCode::OutOfRange, "level " + std::to_string(z) + " not strictly inside edge " +
                                           std::to_string(edge));
  }
  const auto& f = mesh.field;
  for (int v = 0; v < topo.nV; ++v) {
    if (f[v] == z) throw Error(ErrorCode::HitsVertex, "level " + std::to_string(z) +
                                                          " equals the value at vertex " +
                                                          std::to_string(v));
  }
  int start = -1;
  for (int t = 0; t < topo.nT && start < 0; ++t) {
    const Tri& tri = mesh.triangles[t];
    const double lo = std::min({f[tri[0]], f[tri[1]], f[tri[2]]});
    const double hi = std::max({f[tri[0]], f[tri[1]], f[tri[2]]});
    if (lo < z && z < hi && proj.edge_at(t, z) == edge) start = t;
  }
  if (start < 0) throw Error(ErrorCode::InternalSweep, "no triangle carries the level on this edge");

  LevelCycle cyc;
  cyc.z = z;
  // side of t traversed from below z to above z (entry) and the reverse (exit)
  auto sides = [&](int t, int& entry, int& exit) {
    const Tri& tri = mesh.triangles[t];
    entry = exit = -1;
    for (int k = 0; k < 3; ++k) {
      const bool aLow = f[tri[k]] < z, bLow = f[tri[(k + 1) % 3]] < z;
      if (aLow && !bLow) entry = k;
      if (!aLow && bLow) exit = k;
    }
  };
  int t = start;
  const std::size_t guard = static_cast<std::size_t>(topo.nT) + 1;
  do {
    int entry = 0, exit = 0;
    sides(t, entry, exit);
    if (entry < 0 || exit < 0) throw Error(ErrorCode::InternalSweep, "level walk lost the curve");
    const int me = topo.triEdges[t][exit];
    const int a = topo.edges[me][0], b = topo.edges[me][1];
    const double lambda = (z - f[a]) / (f[b] - f[a]);
    const Vec3& pa = mesh.vertices[a];
    const Vec3& pb = mesh.vertices[b];
    cyc.points.push_back({pa[0] + lambda * (pb[0] - pa[0]), pa[1] + lambda * (pb[1] - pa[1]),
                          pa[2] + lambda * (pb[2] - pa[2])});
    cyc.crossings.emplace_back(me, lambda);
    t = topo.edgeTris[me][0] == t ? topo.edgeTris[me][1] : topo.edgeTris[me][0];
    cyc.triangles.push_back(t);
    if (cyc.points.size() > guard) throw Error(ErrorCode::InternalSweep, "level walk did not close");
  } while (t != start);
  return cyc;
}

}  // namespace symreeb
