#include "symreeb/homology.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <string>

#include <Eigen/Dense>

#include "symreeb/error.hpp"
#include "symreeb/pl_measure.hpp"

namespace symreeb {

namespace {

void add_step(const Topology& topo, EdgeChain& chain, int from, int to) {
  const int e = topo.edge_index(from, to);
  if (e < 0) throw Error(ErrorCode::InternalSweep, "no mesh edge between consecutive path vertices");
  chain[e] += from < to ? 1 : -1;
}

}  // namespace

int pair(const EdgeChain& chain, const std::vector<int>& cochain) {
  long long s = 0;
  for (std::size_t e = 0; e < chain.size(); ++e) s += static_cast<long long>(chain[e]) * cochain[e];
  return static_cast<int>(s);
}

std::vector<int> chain_boundary(const Topology& topo, const EdgeChain& chain) {
  std::vector<int> b(topo.nV, 0);
  for (int e = 0; e < topo.nE; ++e) {
    b[topo.edges[e][1]] += chain[e];
    b[topo.edges[e][0]] -= chain[e];
  }
  return b;
}

std::vector<int> pushoff_cochain(const TriMeshField& mesh, const Topology& topo,
                                 const EdgeChain& cycle) {
  // expand into edge uses and pair arrivals with departures at each vertex
  std::vector<std::vector<int>> arrivals(topo.nV), departures(topo.nV);
  for (int e = 0; e < topo.nE; ++e) {
    const int a = topo.edges[e][0], b = topo.edges[e][1];
    const int c = cycle[e];
    for (int k = 0; k < std::abs(c); ++k) {
      const int from = c > 0 ? a : b, to = c > 0 ? b : a;
      arrivals[to].push_back(from);
      departures[from].push_back(to);
    }
  }
  std::vector<int> omega(topo.nE, 0);
  for (int v = 0; v < topo.nV; ++v) {
    if (arrivals[v].size() != departures[v].size()) {
      throw Error(ErrorCode::NotHomologous, "chain is not a cycle at vertex " + std::to_string(v));
    }
    if (arrivals[v].empty()) continue;
    const auto link = vertex_link(mesh, topo, v);
    const int n = static_cast<int>(link.size());
    auto pos = [&](int x) {
      return static_cast<int>(std::find(link.begin(), link.end(), x) - link.begin());
    };
    for (std::size_t k = 0; k < arrivals[v].size(); ++k) {
      const int iu = pos(arrivals[v][k]), iw = pos(departures[v][k]);
      // neighbours strictly between the departure and the arrival, counterclockwise
      for (int i = (iw + 1) % n; i != iu; i = (i + 1) % n) {
        const int x = link[i];
        const int e = topo.edge_index(v, x);
        omega[e] += v < x ? -1 : 1;
      }
    }
  }
  return omega;
}

HomologyBasis homology_basis(const TriMeshField& mesh, const Topology& topo) {
  HomologyBasis basis;
  const int g = topo.genus();
  if (g == 0) return basis;

  std::vector<int> parentEdge(topo.nV, -2), parent(topo.nV, -1), depth(topo.nV, 0);
  std::vector<char> primal(topo.nE, 0), dual(topo.nE, 0);
  std::queue<int> q;
  parentEdge[0] = -1;
  q.push(0);
  while (!q.empty()) {
    const int v = q.front();
    q.pop();
    for (int e : topo.vertexEdges[v]) {
      const int w = topo.other_vertex(e, v);
      if (parentEdge[w] != -2) continue;
      parentEdge[w] = e;
      parent[w] = v;
      depth[w] = depth[v] + 1;
      primal[e] = 1;
      q.push(w);
    }
  }
  std::vector<char> seen(topo.nT, 0);
  seen[0] = 1;
  q.push(0);
  while (!q.empty()) {
    const int t = q.front();
    q.pop();
    for (int e : topo.triEdges[t]) {
      if (primal[e]) continue;
      const int u = topo.edgeTris[e][0] == t ? topo.edgeTris[e][1] : topo.edgeTris[e][0];
      if (seen[u]) continue;
      seen[u] = 1;
      dual[e] = 1;
      q.push(u);
    }
  }
  for (int e = 0; e < topo.nE; ++e) {
    if (primal[e] || dual[e]) continue;
    EdgeChain c(topo.nE, 0);
    c[e] = 1;
    // close a -> b with the tree path b -> a
    int u = topo.edges[e][1], w = topo.edges[e][0];
    std::vector<int> down;
    while (u != w) {
      if (depth[u] >= depth[w]) {
        add_step(topo, c, u, parent[u]);
        u = parent[u];
      } else {
        down.push_back(w);
        w = parent[w];
      }
    }
    for (auto it = down.rbegin(); it != down.rend(); ++it) add_step(topo, c, parent[*it], *it);
    basis.cycles.push_back(std::move(c));
  }
  if (static_cast<int>(basis.cycles.size()) != 2 * g) {
    throw Error(ErrorCode::InternalSweep, "tree-cotree left " + std::to_string(basis.cycles.size()) +
                                              " generators for genus " + std::to_string(g));
  }
  for (const auto& c : basis.cycles) basis.duals.push_back(pushoff_cochain(mesh, topo, c));
  const int n = 2 * g;
  basis.intersection.assign(n, std::vector<int>(n, 0));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) basis.intersection[i][j] = pair(basis.cycles[i], basis.duals[j]);
  return basis;
}

std::vector<int> homology_class(const HomologyBasis& basis, const EdgeChain& cycle) {
  const int n = static_cast<int>(basis.cycles.size());
  if (n == 0) return {};
  // r_j = cycle . g_j = sum_i x_i M_ij
  Eigen::MatrixXd Mt(n, n);
  Eigen::VectorXd r(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) Mt(j, i) = basis.intersection[i][j];
  for (int j = 0; j < n; ++j) r(j) = pair(cycle, basis.duals[j]);
  const Eigen::VectorXd x = Mt.fullPivLu().solve(r);
  std::vector<int> out(n);
  for (int i = 0; i < n; ++i) out[i] = static_cast<int>(std::lround(x(i)));
  return out;
}

SnappedCycle snap_level_cycle(const TriMeshField& mesh, const Topology& topo, const LevelCycle& cycle) {
  const auto& f = mesh.field;
  SnappedCycle s;
  s.chain.assign(topo.nE, 0);
  const std::size_t n = cycle.crossings.size();
  std::vector<int> low(n);
  for (std::size_t i = 0; i < n; ++i) {
    const int e = cycle.crossings[i].first;
    const int a = topo.edges[e][0], b = topo.edges[e][1];
    low[i] = f[a] < cycle.z ? a : b;
  }
  for (std::size_t i = 0; i < n; ++i) {
    const int from = low[i], to = low[(i + 1) % n];
    if (from != to) add_step(topo, s.chain, from, to);
  }
  for (int t : cycle.triangles) {
    const Tri& tri = mesh.triangles[t];
    s.sublevelArea +=
        TriangleDensity::make(f[tri[0]], f[tri[1]], f[tri[2]], topo.area[t]).sublevel(cycle.z);
  }
  return s;
}

double chain_area_between(const Topology& topo, const EdgeChain& cycle1, const EdgeChain& cycle2) {
  std::vector<long long> target(topo.nE);
  for (int e = 0; e < topo.nE; ++e) target[e] = static_cast<long long>(cycle1[e]) - cycle2[e];

  std::vector<long long> coef(topo.nT, 0);
  std::vector<char> seen(topo.nT, 0);
  std::queue<int> q;
  seen[0] = 1;
  q.push(0);
  while (!q.empty()) {
    const int t = q.front();
    q.pop();
    for (int k = 0; k < 3; ++k) {
      const int e = topo.triEdges[t][k];
      const int u = topo.edgeTris[e][0] == t ? topo.edgeTris[e][1] : topo.edgeTris[e][0];
      if (seen[u]) continue;
      seen[u] = 1;
      // coef[t] * s + coef[u] * (-s) = target[e]
      const int s = topo.triSign[t][k];
      coef[u] = coef[t] - target[e] * s;
      q.push(u);
    }
  }
  for (int e = 0; e < topo.nE; ++e) {
    const int t0 = topo.edgeTris[e][0], t1 = topo.edgeTris[e][1];
    if (coef[t0] - coef[t1] != target[e]) {
      throw Error(ErrorCode::NotHomologous, "cycles differ by a non-bounding chain at edge " +
                                                std::to_string(e));
    }
  }
  double total = 0.0, area = 0.0;
  for (int t = 0; t < topo.nT; ++t) {
    total += topo.area[t];
    area += static_cast<double>(coef[t]) * topo.area[t];
  }
  double r = std::fmod(area, total);
  if (r < 0.0) r += total;
  if (r >= total) r -= total;
  return r;
}

double level_area_between(const Topology& topo, const TriMeshField& mesh1, const LevelCycle& cycle1,
                          const TriMeshField& mesh2, const LevelCycle& cycle2) {
  const SnappedCycle s1 = snap_level_cycle(mesh1, topo, cycle1);
  const SnappedCycle s2 = snap_level_cycle(mesh2, topo, cycle2);
  double total = 0.0;
  for (double a : topo.area) total += a;
  double r = chain_area_between(topo, s1.chain, s2.chain) + s1.sublevelArea - s2.sublevelArea;
  r = std::fmod(r, total);
  if (r < 0.0) r += total;
  if (r >= total) r -= total;
  return r;
}

}  // namespace symreeb
