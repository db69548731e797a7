#include "random_graphs.hpp"

#include <algorithm>
#include <numeric>

namespace symreeb::testing {

namespace {

struct Sketch {
  std::vector<CriticalKind> kinds;
  std::vector<std::pair<int, int>> edges;

  int add_vertex(CriticalKind k) {
    kinds.push_back(k);
    return static_cast<int>(kinds.size()) - 1;
  }

  bool reaches(int from, int to) const {
    std::vector<char> seen(kinds.size(), 0);
    std::vector<int> stack{from};
    while (!stack.empty()) {
      const int v = stack.back();
      stack.pop_back();
      if (v == to) return true;
      if (seen[v]) continue;
      seen[v] = 1;
      for (const auto& [a, b] : edges)
        if (a == v) stack.push_back(b);
    }
    return false;
  }

  // Splits edge e at a new saddle; returns the saddle.
  int split(int e) {
    const auto [a, b] = edges[e];
    const int s = add_vertex(CriticalKind::Saddle);
    edges[e] = {a, s};
    edges.push_back({s, b});
    return s;
  }
};

}  // namespace

MeasuredReebGraph random_reeb_graph(std::mt19937_64& rng, const RandomGraphOptions& opts) {
  auto pick = [&](int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); };
  auto chance = [&](double p) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng) < p; };

  Sketch sk;
  sk.add_vertex(CriticalKind::Minimum);
  sk.add_vertex(CriticalKind::Maximum);
  sk.edges.push_back({0, 1});
  const int target = 1 + pick(std::max(1, opts.maxEdges));
  while (static_cast<int>(sk.edges.size()) + 2 <= target) {
    const int room = opts.maxEdges - static_cast<int>(sk.edges.size());
    const bool handle = room >= 3 && chance(0.5);
    if (!handle) {
      const int s = sk.split(pick(static_cast<int>(sk.edges.size())));
      if (chance(0.5)) {
        sk.edges.push_back({s, sk.add_vertex(CriticalKind::Maximum)});
      } else {
        sk.edges.push_back({sk.add_vertex(CriticalKind::Minimum), s});
      }
    } else if (chance(opts.parallelChance)) {
      const int e = pick(static_cast<int>(sk.edges.size()));
      const int s1 = sk.split(e);
      const int s2 = sk.split(static_cast<int>(sk.edges.size()) - 1);
      sk.edges.push_back({s1, s2});
    } else {
      const int n = static_cast<int>(sk.edges.size());
      if (n < 2) continue;
      const int e1 = pick(n);
      int e2 = pick(n - 1);
      if (e2 >= e1) ++e2;
      const int s1 = sk.split(e1);
      const int s2 = sk.split(e2);
      if (sk.reaches(s2, s1)) {
        sk.edges.push_back({s2, s1});
      } else {
        sk.edges.push_back({s1, s2});
      }
    }
  }

  // distinct integer levels from a random topological order
  const int nv = static_cast<int>(sk.kinds.size());
  std::vector<int> indeg(nv, 0);
  for (const auto& [a, b] : sk.edges) ++indeg[b];
  std::vector<int> ready, level(nv, 0);
  for (int v = 0; v < nv; ++v)
    if (indeg[v] == 0) ready.push_back(v);
  for (int next = 0; !ready.empty(); ++next) {
    const int k = pick(static_cast<int>(ready.size()));
    const int v = ready[k];
    ready.erase(ready.begin() + k);
    level[v] = next;
    for (const auto& [a, b] : sk.edges)
      if (a == v && --indeg[b] == 0) ready.push_back(b);
  }

  MeasuredReebGraph g;
  for (int v = 0; v < nv; ++v) {
    ReebVertex rv;
    rv.id = v;
    rv.f = level[v];
    rv.kind = sk.kinds[v];
    g.vertices.push_back(rv);
  }
  for (std::size_t i = 0; i < sk.edges.size(); ++i) {
    ReebEdge e;
    e.id = static_cast<int>(i);
    e.src = sk.edges[i].first;
    e.dst = sk.edges[i].second;
    const double f0 = level[e.src], f1 = level[e.dst];
    const double mass = 0.25 * (1 + pick(12));
    const double frac = 0.25 * (1 + pick(3));
    e.profile.z = {f0, 0.5 * (f0 + f1), f1};
    e.profile.mu = {0.0, frac * mass, mass};
    e.profile.mass = mass;
    g.totalMass += mass;
    g.edges.push_back(std::move(e));
  }
  if (opts.withFirstMoments) {
    double sum = 0.0;
    for (auto& e : g.edges) {
      const double i1 = 0.125 * (pick(33) - 16);
      e.moments = {e.profile.mass, i1};
      sum += i1;
    }
    g.edges.back().moments[1] -= sum;
  }
  return g;
}

MeasuredReebGraph relabel(const MeasuredReebGraph& g, std::mt19937_64& rng, std::vector<int>* vertexPerm,
                          std::vector<int>* edgePerm) {
  std::vector<int> vp(g.vertices.size()), ep(g.edges.size());
  std::iota(vp.begin(), vp.end(), 0);
  std::iota(ep.begin(), ep.end(), 0);
  std::shuffle(vp.begin(), vp.end(), rng);
  std::shuffle(ep.begin(), ep.end(), rng);
  MeasuredReebGraph h;
  h.totalMass = g.totalMass;
  h.vertices.resize(g.vertices.size());
  h.edges.resize(g.edges.size());
  for (const auto& v : g.vertices) {
    ReebVertex w = v;
    w.id = vp[v.id];
    h.vertices[w.id] = w;
  }
  for (const auto& e : g.edges) {
    ReebEdge w = e;
    w.id = ep[e.id];
    w.src = vp[e.src];
    w.dst = vp[e.dst];
    h.edges[w.id] = std::move(w);
  }
  if (vertexPerm) *vertexPerm = vp;
  if (edgePerm) *edgePerm = ep;
  return h;
}

}  // namespace symreeb::testing
