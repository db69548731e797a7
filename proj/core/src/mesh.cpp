#include "symreeb/mesh.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "symreeb/error.hpp"
#include "symreeb/topology.hpp"

namespace symreeb {

const char* to_string(CriticalKind k) {
  switch (k) {
    case CriticalKind::Minimum: return "minimum";
    case CriticalKind::Maximum: return "maximum";
    case CriticalKind::Saddle: return "saddle";
  }
  return "?";
}

SurfaceReport validate(const TriMeshField& mesh) {
  const Topology topo = build_topology(mesh);
  SurfaceReport rep;
  rep.eulerCharacteristic = topo.euler();
  if (rep.eulerCharacteristic > 2 || rep.eulerCharacteristic % 2 != 0) {
    throw Error(ErrorCode::NotClosed,
                "Euler characteristic " + std::to_string(rep.eulerCharacteristic) +
                    " is not that of a closed orientable surface");
  }
  rep.genus = topo.genus();
  // fixed index-ordered summation
  double total = 0.0;
  for (double a : topo.area) total += a;
  rep.totalArea = total;

  for (int v = 0; v < topo.nV; ++v) {
    const auto link = vertex_link(mesh, topo, v);
    bool anyUpper = false;
    for (int w : link) anyUpper |= vertex_below(mesh.field, v, w);
    const int lower = lower_link_components(mesh, topo, v);
    if (lower == 0) {
      rep.criticalPoints.push_back({v, CriticalKind::Minimum});
    } else if (!anyUpper) {
      rep.criticalPoints.push_back({v, CriticalKind::Maximum});
    } else if (lower == 2) {
      rep.criticalPoints.push_back({v, CriticalKind::Saddle});
    } else if (lower >= 3) {
      throw Error(ErrorCode::DegenerateSaddle,
                  "vertex " + std::to_string(v) + " has " + std::to_string(lower) +
                      " lower-link components");
    }
  }
  return rep;
}

namespace {

// First pair of critical vertices sharing a field value, or {-1,-1}.
std::array<int, 2> duplicate_critical(const TriMeshField& mesh, const SurfaceReport& rep) {
  std::vector<int> crit;
  crit.reserve(rep.criticalPoints.size());
  for (const auto& c : rep.criticalPoints) crit.push_back(c.vertex);
  std::stable_sort(crit.begin(), crit.end(),
                   [&](int a, int b) { return mesh.field[a] < mesh.field[b]; });
  for (std::size_t i = 1; i < crit.size(); ++i) {
    if (mesh.field[crit[i]] == mesh.field[crit[i - 1]]) {
      return {std::min(crit[i - 1], crit[i]), std::max(crit[i - 1], crit[i])};
    }
  }
  return {-1, -1};
}

}  // namespace

TriMeshField ensure_simple(const TriMeshField& mesh, SimplePolicy policy) {
  const SurfaceReport rep = validate(mesh);
  const auto dup = duplicate_critical(mesh, rep);
  if (dup[0] < 0) return mesh;
  if (policy.kind == SimplePolicy::Kind::Reject) {
    throw Error(ErrorCode::DuplicateCriticalValue,
                "vertices " + std::to_string(dup[0]) + " and " + std::to_string(dup[1]) +
                    " share value " + std::to_string(mesh.field[dup[0]]));
  }
  // offsets grow with the rank in the (value, index) order, so no strict
  // inequality between vertices is reversed
  TriMeshField out = mesh;
  std::vector<int> order(mesh.field.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) { return vertex_below(mesh.field, a, b); });
  const double V = static_cast<double>(mesh.field.size());
  for (std::size_t r = 0; r < order.size(); ++r) {
    out.field[order[r]] += policy.epsilon * static_cast<double>(r) / V;
  }
  const auto again = duplicate_critical(out, validate(out));
  if (again[0] >= 0) {
    throw Error(ErrorCode::DuplicateCriticalValue,
                "perturbation did not separate vertices " + std::to_string(again[0]) + " and " +
                    std::to_string(again[1]));
  }
  return out;
}

}  // namespace symreeb
