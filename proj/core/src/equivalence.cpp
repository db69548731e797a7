#include "symreeb/equivalence.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "symreeb/circulation.hpp"
#include "symreeb/error.hpp"
#include "symreeb/freezing.hpp"
#include "symreeb/homology.hpp"
#include "symreeb/reeb.hpp"

namespace symreeb {

namespace {

struct Prepared {
  const TriMeshField* mesh = nullptr;
  Topology topo;
  ReebResult reeb;
  double fScale = 0.0;
};

Prepared prepare(const TriMeshField& mesh) {
  Prepared p;
  p.mesh = &mesh;
  ensure_simple(mesh, SimplePolicy::reject());
  p.topo = build_topology(mesh);
  p.reeb = build_reeb(mesh);
  for (double v : mesh.field) p.fScale = std::max(p.fScale, std::abs(v));
  return p;
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

bool same_mesh(const TriMeshField& a, const TriMeshField& b) {
  return a.vertices == b.vertices && a.triangles == b.triangles && a.areaOverride == b.areaOverride;
}

IsoCertificate identity_certificate(const MeasuredReebGraph& g) {
  IsoCertificate c;
  c.vertexMap.resize(g.vertices.size());
  c.edgeMap.resize(g.edges.size());
  std::iota(c.vertexMap.begin(), c.vertexMap.end(), 0);
  std::iota(c.edgeMap.begin(), c.edgeMap.end(), 0);
  return c;
}

// Names the first invariant telling the graphs apart.
std::string graph_obstruction(const MeasuredReebGraph& a, const MeasuredReebGraph& b, double tolF,
                              double tolMass) {
  if (a.betti1() != b.betti1()) {
    return "first Betti numbers differ (" + std::to_string(a.betti1()) + " vs " +
           std::to_string(b.betti1()) + ")";
  }
  if (a.vertices.size() != b.vertices.size() || a.edges.size() != b.edges.size()) {
    return "graph sizes differ (" + std::to_string(a.vertices.size()) + " vs " +
           std::to_string(b.vertices.size()) + " vertices)";
  }
  auto sorted_vertices = [](const MeasuredReebGraph& g) {
    std::vector<std::pair<double, int>> v;
    for (const auto& x : g.vertices) v.push_back({x.f, static_cast<int>(x.kind)});
    std::sort(v.begin(), v.end());
    return v;
  };
  const auto va = sorted_vertices(a), vb = sorted_vertices(b);
  double worst = 0.0;
  for (std::size_t i = 0; i < va.size(); ++i) {
    if (va[i].second != vb[i].second) return "critical point kinds differ in level order";
    worst = std::max(worst, std::abs(va[i].first - vb[i].first));
  }
  if (worst > tolF) return "vertex f-values differ (max deviation " + fmt(worst) + ")";
  std::vector<double> ma, mb;
  for (const auto& e : a.edges) ma.push_back(e.profile.mass);
  for (const auto& e : b.edges) mb.push_back(e.profile.mass);
  std::sort(ma.begin(), ma.end());
  std::sort(mb.begin(), mb.end());
  double mw = 0.0;
  for (std::size_t i = 0; i < ma.size(); ++i) mw = std::max(mw, std::abs(ma[i] - mb[i]));
  if (mw > tolMass) return "edge masses differ (max deviation " + fmt(mw) + ")";
  return "no edge correspondence matches incidence, masses and measure profiles";
}

struct Sdiff {
  std::vector<IsoCertificate> certs;
  std::string obstruction;
};

Sdiff sdiff_stage(const Prepared& F, const Prepared& G, const Tolerances& tol) {
  const auto& gF = F.reeb.graph;
  const auto& gG = G.reeb.graph;
  const double fs = std::max({F.fScale, G.fScale, 1e-300});
  const double ms = std::max(gF.totalMass, gG.totalMass);
  Sdiff s;
  s.certs = enumerate_isomorphisms(gF, gG, tol.f * fs, tol.mass * ms, tol.profile * ms);
  if (s.certs.empty()) s.obstruction = graph_obstruction(gF, gG, tol.f * fs, tol.mass * ms);
  return s;
}

double mapped_level(const MeasuredReebGraph& from, int e, const MeasuredReebGraph& to, int e2, double z) {
  const auto& A = from.edges[e];
  const auto& B = to.edges[e2];
  const double a0 = from.vertices[A.src].f, a1 = from.vertices[A.dst].f;
  const double b0 = to.vertices[B.src].f, b1 = to.vertices[B.dst].f;
  return b0 + (z - a0) / (a1 - a0) * (b1 - b0);
}

struct FreezeContext {
  FrozenData F;
  std::optional<FrozenData> G;  // genus >= 2 only
};

// Empty string when the freezing data agree under the certificate.
std::string freezing_mismatch(const Prepared& F, const Prepared& G, const FreezeContext& ctx,
                              const IsoCertificate& cert) {
  const auto& gF = F.reeb.graph;
  const auto& gG = G.reeb.graph;
  const FrozenData& fd = ctx.F;
  for (const auto& r : fd.reduced.edges) {
    const int e = r.regular_edge();
    const int e2 = cert.edgeMap[e];
    const double z = mapped_level(gF, e, gG, e2, fd.regularLevels[r.id]);
    const LevelCycle cyc = level_cycle_near(*G.mesh, G.topo, gG, G.reeb.projection, e2, z);
    const auto cls = homology_class(fd.basis, snap_level_cycle(*G.mesh, G.topo, cyc).chain);
    if (cls != fd.edgeClasses[r.id]) {
      return "homology classes of level cycles differ on reduced edge " + std::to_string(r.id);
    }
  }
  if (!ctx.G) return {};
  const FrozenData& gd = *ctx.G;
  const int nr = static_cast<int>(fd.reduced.edges.size());
  if (nr != static_cast<int>(gd.reduced.edges.size())) return "reduced graphs differ in size";
  std::vector<int> edgeImage(nr, -1), dirSame(nr, 1);
  for (const auto& r : fd.reduced.edges) {
    const int e2 = cert.edgeMap[r.chain[0]];
    const int k2 = gd.reduced.edgeSlot[e2];
    if (k2 < 0) return "reduced edge " + std::to_string(r.id) + " maps into a retracted tree";
    edgeImage[r.id] = gd.reduced.edgeTarget[e2].edge;
    dirSame[r.id] = gd.reduced.edges[edgeImage[r.id]].forward[k2] == r.forward[0] ? 1 : -1;
  }
  std::vector<int> vertexImage(fd.reduced.vertices.size(), -1);
  for (std::size_t v = 0; v < fd.reduced.vertices.size(); ++v) {
    vertexImage[v] = gd.reduced.vertexTarget[cert.vertexMap[fd.reduced.vertices[v]]].vertex;
  }
  for (const auto& r : fd.reduced.edges) {
    const auto& img = gd.reduced.edges[edgeImage[r.id]];
    int a = vertexImage[r.a], b = vertexImage[r.b];
    if (dirSame[r.id] < 0) std::swap(a, b);
    if (img.a != a || img.b != b) {
      return "pants incidence differs at reduced edge " + std::to_string(r.id);
    }
  }
  for (const auto& [id, s] : fd.halfTwists) {
    int other = 0;
    for (const auto& [id2, s2] : gd.halfTwists)
      if (id2 == edgeImage[id]) other = s2 * dirSame[id];
    if (other != s) return "half-twist invariants differ on loop " + std::to_string(id);
  }
  return {};
}

double area_weighted_mean(const TriMeshField& mesh, const Topology& topo) {
  double num = 0.0, den = 0.0;
  for (int t = 0; t < topo.nT; ++t) {
    const Tri& tri = mesh.triangles[t];
    num += (mesh.field[tri[0]] + mesh.field[tri[1]] + mesh.field[tri[2]]) / 3.0 * topo.area[t];
    den += topo.area[t];
  }
  return num / den;
}

// Reduced edges outside a maximal spanning tree picked greedily by mass.
std::vector<int> flux_edges(const ReducedGraph& rg) {
  std::vector<int> order(rg.edges.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return rg.edges[a].mass > rg.edges[b].mass; });
  std::vector<int> parent(rg.vertices.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::vector<int> out;
  for (int id : order) {
    const auto& r = rg.edges[id];
    if (r.a < 0) {
      out.push_back(id);
      continue;
    }
    const int a = find(r.a), b = find(r.b);
    if (a == b) out.push_back(id);
    else parent[a] = b;
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

const char* to_string(Group g) {
  switch (g) {
    case Group::SDiff: return "sdiff";
    case Group::SDiff0: return "sdiff0";
    case Group::Ham: return "ham";
  }
  return "?";
}

const char* to_string(Outcome o) {
  switch (o) {
    case Outcome::Equivalent: return "Equivalent";
    case Outcome::NotEquivalent: return "NotEquivalent";
    case Outcome::Inconclusive: return "Inconclusive";
  }
  return "?";
}

Group parse_group(const std::string& s) {
  if (s == "sdiff") return Group::SDiff;
  if (s == "sdiff0") return Group::SDiff0;
  if (s == "ham") return Group::Ham;
  throw Error(ErrorCode::Usage, "unknown group '" + s + "' (expected sdiff, sdiff0 or ham)");
}

int exit_code(Outcome o) {
  switch (o) {
    case Outcome::Equivalent: return 0;
    case Outcome::NotEquivalent: return 1;
    case Outcome::Inconclusive: return 2;
  }
  return 1;
}

Verdict compare_functions(const TriMeshField& meshF, const TriMeshField& meshG, Group group,
                          const Tolerances& tol) {
  Verdict v;
  v.group = group;
  v.tolerances = tol;
  const Prepared F = prepare(meshF);
  const Prepared G = prepare(meshG);
  if (group != Group::SDiff && !same_mesh(meshF, meshG)) {
    throw Error(ErrorCode::DifferentMesh, std::string(to_string(group)) +
                                              " comparisons need both fields on the same mesh");
  }
  if (group == Group::Ham) {
    for (const Prepared* p : {&F, &G}) {
      const double m = area_weighted_mean(*p->mesh, p->topo);
      if (std::abs(m) > tol.f * std::max(p->fScale, 1e-300)) {
        throw Error(ErrorCode::NotZeroMean, "area-weighted mean " + fmt(m) + " is not zero");
      }
    }
  }
  const int genus = F.topo.genus();
  if (group != Group::SDiff && meshF.field == meshG.field) {
    v.outcome = Outcome::Equivalent;
    v.reason = "identical fields";
    v.certificate = identity_certificate(F.reeb.graph);
    return v;
  }

  Sdiff sd = sdiff_stage(F, G, tol);
  if (sd.certs.empty()) {
    v.outcome = Outcome::NotEquivalent;
    v.reason = sd.obstruction;
    return v;
  }
  if (group == Group::SDiff || genus == 0) {
    v.outcome = Outcome::Equivalent;
    v.reason = group == Group::SDiff ? "measured Reeb graphs isomorphic"
                                     : "measured Reeb graphs isomorphic on a sphere";
    v.certificate = sd.certs.front();
    return v;
  }

  FreezeContext ctx;
  ctx.F = freeze(meshF, F.topo, F.reeb);
  if (genus >= 2) ctx.G = freeze(meshG, G.topo, G.reeb);
  const std::vector<int> fluxIds = group == Group::Ham ? flux_edges(ctx.F.reduced) : std::vector<int>{};
  double total = 0.0;
  for (double a : F.topo.area) total += a;

  std::string firstFailure;
  for (const auto& cert : sd.certs) {
    std::string why = freezing_mismatch(F, G, ctx, cert);
    std::vector<int> edges;
    std::vector<double> areas;
    if (why.empty() && group == Group::Ham) {
      for (int id : fluxIds) {
        const auto& r = ctx.F.reduced.edges[id];
        const int e = r.regular_edge();
        const int e2 = cert.edgeMap[e];
        const double zF = ctx.F.regularLevels[id];
        const LevelCycle cF = level_cycle_near(meshF, F.topo, F.reeb.graph, F.reeb.projection, e, zF);
        const double zG = mapped_level(F.reeb.graph, e, G.reeb.graph, e2, zF);
        const LevelCycle cG = level_cycle_near(meshG, G.topo, G.reeb.graph, G.reeb.projection, e2, zG);
        const double a = level_area_between(F.topo, meshF, cF, meshG, cG);
        edges.push_back(e);
        areas.push_back(a);
        if (why.empty() && std::min(a, total - a) > tol.area * total) {
          why = "flux area " + fmt(a) + " on reduced edge " + std::to_string(id) + " is not zero mod " +
                fmt(total);
        }
      }
    }
    if (why.empty()) {
      v.certificate = cert;
      v.fluxEdges = edges;
      v.fluxAreas = areas;
      if (genus >= 2) {
        v.outcome = Outcome::Inconclusive;
        v.reason = "isotopy proxy: homology classes, pants incidence and half-twists agree";
      } else {
        v.outcome = Outcome::Equivalent;
        v.reason = group == Group::Ham ? "freezing data agree and flux areas vanish"
                                       : "freezing data agree";
      }
      return v;
    }
    if (firstFailure.empty()) {
      firstFailure = why;
      v.certificate = cert;
      v.fluxEdges = edges;
      v.fluxAreas = areas;
    }
  }
  v.outcome = Outcome::NotEquivalent;
  v.reason = firstFailure;
  return v;
}

Verdict compare_cosets(const TriMeshField& meshF, const TriMeshField& meshG, Group group,
                       const Tolerances& tol) {
  if (group == Group::Ham) throw Error(ErrorCode::Usage, "coset comparison supports sdiff and sdiff0");
  if (!meshF.cochain || !meshG.cochain) {
    throw Error(ErrorCode::MissingCochain, "both inputs need a cochain");
  }
  Verdict v;
  v.group = group;
  v.tolerances = tol;
  const Prepared F = prepare(meshF);
  const Prepared G = prepare(meshG);
  if (group != Group::SDiff && !same_mesh(meshF, meshG)) {
    throw Error(ErrorCode::DifferentMesh, "sdiff0 comparisons need both fields on the same mesh");
  }
  const auto& gF = F.reeb.graph;
  const auto& gG = G.reeb.graph;
  const CirculationGraph cF = circulation_function(meshF, gF, F.reeb.projection);
  const CirculationGraph cG = circulation_function(meshG, gG, G.reeb.projection);
  double scale = 0.0;
  for (double c : cF.cMinus) scale = std::max(scale, std::abs(c));
  for (double c : cG.cMinus) scale = std::max(scale, std::abs(c));
  const double tolC = tol.circ * scale;

  const bool identical = meshF.field == meshG.field && same_mesh(meshF, meshG) &&
                         cochain_on_edges(meshF, F.topo) == cochain_on_edges(meshG, G.topo);
  std::vector<IsoCertificate> certs;
  if (identical) {
    certs.push_back(identity_certificate(gF));
  } else {
    Sdiff sd = sdiff_stage(F, G, tol);
    if (sd.certs.empty()) {
      v.outcome = Outcome::NotEquivalent;
      v.reason = sd.obstruction;
      return v;
    }
    certs = std::move(sd.certs);
  }
  const int genus = F.topo.genus();
  std::optional<FreezeContext> ctx;
  if (group == Group::SDiff0 && genus >= 1 && !identical) {
    ctx.emplace();
    ctx->F = freeze(meshF, F.topo, F.reeb);
    if (genus >= 2) ctx->G = freeze(meshG, G.topo, G.reeb);
  }
  std::string firstFailure;
  for (const auto& cert : certs) {
    std::vector<double> deltas(gF.edges.size());
    std::string why;
    for (const auto& e : gF.edges) {
      deltas[e.id] = cG.cMinus[cert.edgeMap[e.id]] - cF.cMinus[e.id];
      if (why.empty() && std::abs(deltas[e.id]) > tolC) {
        why = "circulation differs on edge " + std::to_string(e.id) + " by " + fmt(deltas[e.id]);
      }
    }
    if (why.empty() && ctx) why = freezing_mismatch(F, G, *ctx, cert);
    if (why.empty()) {
      v.certificate = cert;
      v.circulationDeltas = deltas;
      if (genus >= 2 && group == Group::SDiff0 && !identical) {
        v.outcome = Outcome::Inconclusive;
        v.reason = "isotopy proxy: circulation graphs and freezing data agree";
      } else {
        v.outcome = Outcome::Equivalent;
        v.reason = identical ? "identical inputs" : "circulation graphs agree";
      }
      return v;
    }
    if (firstFailure.empty()) {
      firstFailure = why;
      v.certificate = cert;
      v.circulationDeltas = deltas;
    }
  }
  v.outcome = Outcome::NotEquivalent;
  v.reason = firstFailure;
  return v;
}

std::string verdict_to_json(const Verdict& v) {
  using nlohmann::json;
  json j;
  j["outcome"] = to_string(v.outcome);
  j["reason"] = v.reason;
  j["group"] = to_string(v.group);
  j["tolerances"] = {{"f", v.tolerances.f},
                     {"mass", v.tolerances.mass},
                     {"profile", v.tolerances.profile},
                     {"area", v.tolerances.area},
                     {"circ", v.tolerances.circ}};
  if (v.certificate) {
    j["certificate"] = {{"vertex_map", v.certificate->vertexMap},
                        {"edge_map", v.certificate->edgeMap},
                        {"max_f_deviation", v.certificate->maxFDeviation},
                        {"max_mass_deviation", v.certificate->maxMassDeviation},
                        {"max_profile_deviation", v.certificate->maxProfileDeviation}};
  } else {
    j["certificate"] = nullptr;
  }
  if (!v.fluxAreas.empty()) j["flux"] = {{"edges", v.fluxEdges}, {"areas", v.fluxAreas}};
  if (!v.circulationDeltas.empty()) j["circulation_deltas"] = v.circulationDeltas;
  return j.dump(2);
}

}  // namespace symreeb
