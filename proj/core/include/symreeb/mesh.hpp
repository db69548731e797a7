#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace symreeb {

using Vec3 = std::array<double, 3>;
using Tri = std::array<int, 3>;

/// A 1-form sampled on directed mesh edges; the value of (j,i) is minus (i,j).
struct Cochain {
  std::vector<std::array<int, 2>> edges;
  std::vector<double> values;
};

struct TriMeshField {
  std::vector<Vec3> vertices;
  std::vector<Tri> triangles;  // counterclockwise w.r.t. the outward normal
  std::vector<double> field;
  std::optional<std::vector<double>> areaOverride;
  std::optional<Cochain> cochain;
};

enum class CriticalKind { Minimum, Maximum, Saddle };

const char* to_string(CriticalKind k);

struct CriticalPoint {
  int vertex;
  CriticalKind kind;
};

struct SurfaceReport {
  int genus = 0;
  double totalArea = 0.0;
  int eulerCharacteristic = 0;
  std::vector<CriticalPoint> criticalPoints;  // sorted by vertex index
};

enum class InputFormat { Json, Off };

TriMeshField load_mesh(const std::string& bytes, InputFormat format);
TriMeshField load_mesh_file(const std::string& path);  // format from extension
std::string mesh_to_json(const TriMeshField& mesh);
std::string mesh_to_off(const TriMeshField& mesh);

SurfaceReport validate(const TriMeshField& mesh);

struct SimplePolicy {
  enum class Kind { Reject, Perturb } kind = Kind::Reject;
  double epsilon = 1e-9;

  static SimplePolicy reject() { return {}; }
  static SimplePolicy perturb(double eps) { return {Kind::Perturb, eps}; }
};

TriMeshField ensure_simple(const TriMeshField& mesh, SimplePolicy policy);

/// Strict total order on vertices: by field value, ties broken by index.
inline bool vertex_below(const std::vector<double>& f, int a, int b) {
  return f[a] < f[b] || (f[a] == f[b] && a < b);
}

}  // namespace symreeb
