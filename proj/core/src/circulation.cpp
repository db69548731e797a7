#include "symreeb/circulation.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

#include <Eigen/Dense>

#include "symreeb/error.hpp"
#include "symreeb/invariants.hpp"
#include "symreeb/pl_measure.hpp"

namespace symreeb {

namespace {

double tri_mean(const TriMeshField& mesh, int t) {
  const Tri& tri = mesh.triangles[t];
  return (mesh.field[tri[0]] + mesh.field[tri[1]] + mesh.field[tri[2]]) / 3.0;
}

// Oriented boundary sum of the cochain over triangle t.
double boundary_sum(const Topology& topo, const std::vector<double>& values, int t) {
  double s = 0.0;
  for (int k = 0; k < 3; ++k) s += topo.triSign[t][k] * values[topo.triEdges[t][k]];
  return s;
}

double edge_I1(const MeasuredReebGraph& g, int e) { return edge_moments(g, e, 1)[1]; }

// Barycentric coordinates (w.r.t. triangle t) of a crossing on mesh edge me.
std::array<double, 3> crossing_bary(const TriMeshField& mesh, const Topology& topo, int t, int me,
                                    double lambda) {
  std::array<double, 3> b{0.0, 0.0, 0.0};
  const Tri& tri = mesh.triangles[t];
  for (int k = 0; k < 3; ++k) {
    if (tri[k] == topo.edges[me][0]) b[k] = 1.0 - lambda;
    if (tri[k] == topo.edges[me][1]) b[k] = lambda;
  }
  return b;
}

}  // namespace

double vorticity_residual(const TriMeshField& mesh) {
  if (!mesh.cochain) throw Error(ErrorCode::MissingCochain, "mesh carries no cochain");
  const Topology topo = build_topology(mesh);
  const auto values = cochain_on_edges(mesh, topo);
  double worst = 0.0;
  for (int t = 0; t < topo.nT; ++t) {
    const double r = std::abs(boundary_sum(topo, values, t) - tri_mean(mesh, t) * topo.area[t]) /
                     topo.area[t];
    worst = std::max(worst, r);
  }
  return worst;
}

double whitney_integral(const TriMeshField& mesh, const Topology& topo,
                        const std::vector<double>& edgeValues, const LevelCycle& cycle) {
  const std::size_t n = cycle.crossings.size();
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const int t = cycle.triangles[i];
    const auto& [e0, l0] = cycle.crossings[i];
    const auto& [e1, l1] = cycle.crossings[(i + 1) % n];
    const auto p = crossing_bary(mesh, topo, t, e0, l0);
    const auto q = crossing_bary(mesh, topo, t, e1, l1);
    for (int k = 0; k < 3; ++k) {
      const int a = k, b = (k + 1) % 3;
      const double c = topo.triSign[t][k] * edgeValues[topo.triEdges[t][k]];
      const double ma = 0.5 * (p[a] + q[a]), mb = 0.5 * (p[b] + q[b]);
      const double da = q[a] - p[a], db = q[b] - p[b];
      total += c * (ma * db - mb * da);
    }
  }
  return total;
}

double corrected_circulation(const TriMeshField& mesh, const Topology& topo,
                             const std::vector<double>& edgeValues, const LevelCycle& cycle) {
  double total = whitney_integral(mesh, topo, edgeValues, cycle);
  const auto& f = mesh.field;
  for (int t : cycle.triangles) {
    const Tri& tri = mesh.triangles[t];
    const TriangleDensity d = TriangleDensity::make(f[tri[0]], f[tri[1]], f[tri[2]], topo.area[t]);
    total += d.first_moment(d.lo, cycle.z) - tri_mean(mesh, t) * d.sublevel(cycle.z);
  }
  return total;
}

double sublevel_first_moment(const TriMeshField& mesh, const Topology& topo,
                             const MeasuredReebGraph& g, const ProjectionMap& proj, int edge,
                             double z) {
  const auto& f = mesh.field;
  const auto& c = proj.critValues;
  (void)g;
  double total = 0.0;
  for (int t = 0; t < topo.nT; ++t) {
    const int count = proj.pieceOffset[t + 1] - proj.pieceOffset[t];
    const Tri& tri = mesh.triangles[t];
    for (int p = 0; p < count; ++p) {
      if (proj.pieceEdge[proj.pieceOffset[t] + p] != edge) continue;
      const int k = proj.firstStrip[t] + p;
      if (!(z > c[k])) continue;
      const TriangleDensity d = TriangleDensity::make(f[tri[0]], f[tri[1]], f[tri[2]], topo.area[t]);
      total += d.first_moment(c[k], std::min(z, c[k + 1]));
    }
  }
  return total;
}

std::vector<double> vertex_residuals(const MeasuredReebGraph& g, const std::vector<double>& cMinus) {
  const int nv = static_cast<int>(g.vertices.size());
  std::vector<double> res(nv, 0.0);
  std::vector<double> I1(g.edges.size());
  for (const auto& e : g.edges) I1[e.id] = edge_I1(g, e.id);
  for (int v = 0; v < nv; ++v) {
    const auto in = g.in_edges(v);
    const auto out = g.out_edges(v);
    auto endVal = [&](int e) { return cMinus[e] + I1[e]; };
    if (in.empty() && out.size() == 1) {
      res[v] = std::abs(cMinus[out[0]]);
    } else if (out.empty() && in.size() == 1) {
      res[v] = std::abs(endVal(in[0]));
    } else if (in.size() == 1 && out.size() == 2) {
      res[v] = std::abs(endVal(in[0]) - cMinus[out[0]] - cMinus[out[1]]);
    } else if (in.size() == 2 && out.size() == 1) {
      res[v] = std::abs(cMinus[out[0]] - endVal(in[0]) - endVal(in[1]));
    } else {
      throw Error(ErrorCode::InternalSweep, "vertex " + std::to_string(v) + " has bad valence");
    }
  }
  return res;
}

CirculationGraph circulation_function(const TriMeshField& mesh, const MeasuredReebGraph& g,
                                      const ProjectionMap& proj) {
  if (!mesh.cochain) throw Error(ErrorCode::MissingCochain, "mesh carries no cochain");
  const Topology topo = build_topology(mesh);
  const auto values = cochain_on_edges(mesh, topo);
  std::vector<double> sorted = mesh.field;
  std::sort(sorted.begin(), sorted.end());

  CirculationGraph cg;
  cg.base = g;
  cg.cMinus.assign(g.edges.size(), 0.0);
  cg.stokesResiduals.assign(g.edges.size(), 0.0);
  for (const auto& e : g.edges) {
    const double a = g.vertices[e.src].f, b = g.vertices[e.dst].f;
    double levels[2] = {safe_level(sorted, a + (b - a) / 3.0),
                        safe_level(sorted, a + 2.0 * (b - a) / 3.0)};
    double circ[2] = {0.0, 0.0}, fm[2] = {0.0, 0.0};
    for (int s = 0; s < 2; ++s) {
      LevelCycle cyc;
      try {
        cyc = level_cycle(mesh, topo, g, proj, e.id, levels[s]);
      } catch (const Error& err) {
        if (err.code() != ErrorCode::HitsVertex) throw;
        const auto& P = e.profile;
        const double step = P.size() > 2 ? (b - a) / static_cast<double>(P.size() - 1) : 0.0;
        try {
          levels[s] += step;
          cyc = level_cycle(mesh, topo, g, proj, e.id, levels[s]);
        } catch (const Error&) {
          levels[s] -= 2.0 * step;
          cyc = level_cycle(mesh, topo, g, proj, e.id, levels[s]);
        }
      }
      circ[s] = corrected_circulation(mesh, topo, values, cyc);
      fm[s] = sublevel_first_moment(mesh, topo, g, proj, e.id, levels[s]);
    }
    cg.cMinus[e.id] = circ[0] - fm[0];
    cg.stokesResiduals[e.id] = std::abs(circ[1] - fm[1] - cg.cMinus[e.id]);
  }
  cg.residuals = vertex_residuals(g, cg.cMinus);
  return cg;
}

AxiomReport check_circulation_axioms(const CirculationGraph& cg, double tol) {
  AxiomReport rep;
  const auto& g = cg.base;
  rep.vertexResiduals = vertex_residuals(g, cg.cMinus);
  for (const auto& e : g.edges) {
    rep.scale = std::max({rep.scale, std::abs(cg.cMinus[e.id]),
                          std::abs(cg.cMinus[e.id] + edge_I1(g, e.id))});
  }
  for (double r : cg.stokesResiduals) rep.worstStokes = std::max(rep.worstStokes, r);
  for (const auto& v : g.vertices) {
    const double r = rep.vertexResiduals[v.id];
    if (v.kind == CriticalKind::Saddle) rep.worstThreeValent = std::max(rep.worstThreeValent, r);
    else rep.worstOneValent = std::max(rep.worstOneValent, r);
  }
  const double bound = tol * rep.scale;
  rep.pass = rep.worstStokes <= bound && rep.worstOneValent <= bound &&
             rep.worstThreeValent <= bound;
  return rep;
}

CirculationSpace solve_circulations(const MeasuredReebGraph& g) {
  const int nv = static_cast<int>(g.vertices.size());
  const int ne = static_cast<int>(g.edges.size());
  std::vector<double> I1(ne);
  double sumI1 = 0.0, maxF = 0.0;
  for (const auto& e : g.edges) {
    I1[e.id] = edge_I1(g, e.id);
    sumI1 += I1[e.id];
  }
  for (const auto& v : g.vertices) maxF = std::max(maxF, std::abs(v.f));
  if (std::abs(sumI1) > 1e-9 * maxF * g.totalMass) {
    throw Error(ErrorCode::NoCirculation,
                "integral of f dmu over the graph is " + std::to_string(sumI1));
  }

  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(nv, ne);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(nv);
  for (int v = 0; v < nv; ++v) {
    const auto in = g.in_edges(v);
    const auto out = g.out_edges(v);
    // sum over out-edges of cMinus minus sum over in-edges of end limits = 0
    for (int e : out) A(v, e) += 1.0;
    for (int e : in) {
      A(v, e) -= 1.0;
      rhs(v) += I1[e];
    }
  }
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(A);
  const Eigen::VectorXd x = cod.solve(rhs);

  CirculationSpace space;
  space.particular.base = g;
  space.particular.cMinus.assign(x.data(), x.data() + ne);
  space.particular.residuals = vertex_residuals(g, space.particular.cMinus);
  space.particular.stokesResiduals.assign(ne, 0.0);
  space.dimension = ne - static_cast<int>(cod.rank());

  // fundamental cycles of a BFS spanning tree
  std::vector<std::vector<std::pair<int, int>>> adj(nv);  // (edge, neighbour)
  for (const auto& e : g.edges) {
    adj[e.src].push_back({e.id, e.dst});
    adj[e.dst].push_back({e.id, e.src});
  }
  std::vector<int> parentEdge(nv, -2), depth(nv, 0);
  std::vector<char> inTree(ne, 0);
  std::queue<int> q;
  if (nv > 0) {
    parentEdge[0] = -1;
    q.push(0);
  }
  while (!q.empty()) {
    const int v = q.front();
    q.pop();
    for (const auto& [e, w] : adj[v]) {
      if (parentEdge[w] != -2) continue;
      parentEdge[w] = e;
      depth[w] = depth[v] + 1;
      inTree[e] = 1;
      q.push(w);
    }
  }
  for (const auto& e : g.edges) {
    if (inTree[e.id]) continue;
    std::vector<double> y(ne, 0.0);
    y[e.id] = 1.0;  // traverse e from src to dst, then return along the tree
    int u = e.dst, w = e.src;
    // walk both ends up to the common ancestor; path goes u -> ... -> w
    std::vector<std::pair<int, double>> fromU, fromW;
    while (u != w) {
      if (depth[u] >= depth[w]) {
        const int pe = parentEdge[u];
        const auto& E = g.edges[pe];
        const int next = E.src == u ? E.dst : E.src;
        fromU.push_back({pe, E.src == u ? 1.0 : -1.0});  // moving u -> next
        u = next;
      } else {
        const int pe = parentEdge[w];
        const auto& E = g.edges[pe];
        const int next = E.src == w ? E.dst : E.src;
        fromW.push_back({pe, E.src == w ? -1.0 : 1.0});  // moving next -> w
        w = next;
      }
    }
    for (const auto& [pe, s] : fromU) y[pe] += s;
    for (const auto& [pe, s] : fromW) y[pe] += s;
    int first = -1;
    for (int k = 0; k < ne && first < 0; ++k)
      if (y[k] != 0.0) first = k;
    if (first >= 0 && y[first] < 0.0)
      for (double& val : y) val = val == 0.0 ? 0.0 : -val;
    space.basis.push_back(std::move(y));
  }
  return space;
}

TriMeshField zero_mean(const TriMeshField& mesh) {
  const Topology topo = build_topology(mesh);
  double num = 0.0, den = 0.0;
  for (int t = 0; t < topo.nT; ++t) {
    num += tri_mean(mesh, t) * topo.area[t];
    den += topo.area[t];
  }
  TriMeshField out = mesh;
  const double mean = num / den;
  for (double& v : out.field) v -= mean;
  return out;
}

std::vector<double> exact_primitive(const TriMeshField& mesh, const Topology& topo) {
  double total = 0.0, scale = 0.0;
  std::vector<double> target(topo.nT);
  for (int t = 0; t < topo.nT; ++t) {
    target[t] = tri_mean(mesh, t) * topo.area[t];
    total += target[t];
    scale += std::abs(target[t]);
  }
  if (std::abs(total) > 1e-10 * std::max(scale, 1e-300)) {
    throw Error(ErrorCode::NotZeroMean, "area-weighted field mean is not zero");
  }
  std::vector<double> alpha(topo.nE, 0.0);
  std::vector<int> parentEdge(topo.nT, -2), order;
  order.reserve(topo.nT);
  std::queue<int> q;
  parentEdge[0] = -1;
  q.push(0);
  while (!q.empty()) {
    const int t = q.front();
    q.pop();
    order.push_back(t);
    for (int k = 0; k < 3; ++k) {
      const int e = topo.triEdges[t][k];
      const int u = topo.edgeTris[e][0] == t ? topo.edgeTris[e][1] : topo.edgeTris[e][0];
      if (parentEdge[u] != -2) continue;
      parentEdge[u] = e;
      q.push(u);
    }
  }
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const int t = *it;
    if (parentEdge[t] < 0) continue;
    double known = 0.0;
    int sign = 0;
    for (int k = 0; k < 3; ++k) {
      const int e = topo.triEdges[t][k];
      if (e == parentEdge[t]) sign = topo.triSign[t][k];
      else known += topo.triSign[t][k] * alpha[e];
    }
    alpha[parentEdge[t]] = (target[t] - known) / sign;
  }
  return alpha;
}

}  // namespace symreeb
