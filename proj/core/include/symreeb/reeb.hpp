#pragma once

#include <array>
#include <string>
#include <vector>

#include "symreeb/mesh.hpp"
#include "symreeb/topology.hpp"

namespace symreeb {

struct ReebVertex {
  int id = 0;
  double f = 0.0;
  CriticalKind kind = CriticalKind::Minimum;
  int meshVertex = -1;     // -1 for abstract graphs
  double ringSpread = 0.0;  // max |f(w) - f(v)| over the one-ring; 0 if unknown
};

// Cumulative measure along an edge: mu[i] = area between the source level and
// z[i]. fmu[i] is the matching cumulative integral of f (empty when the graph
// was not built from a mesh).
struct EdgeProfile {
  std::vector<double> z;
  std::vector<double> mu;
  std::vector<double> fmu;
  double mass = 0.0;

  std::size_t size() const { return z.size(); }
};

struct ReebEdge {
  int id = 0;
  int src = 0;
  int dst = 0;
  EdgeProfile profile;
  std::vector<double> moments;  // exact I_0..I_16 when built from a mesh
};

struct MeasuredReebGraph {
  std::vector<ReebVertex> vertices;
  std::vector<ReebEdge> edges;
  double totalMass = 0.0;

  int betti1() const {
    return static_cast<int>(edges.size()) - static_cast<int>(vertices.size()) + 1;
  }
  std::vector<int> out_edges(int v) const;
  std::vector<int> in_edges(int v) const;
  double f_range() const;
};

struct ProjectionMap {
  std::vector<double> critValues;  // graph vertex id == index here
  std::vector<int> critVertices;   // mesh vertex of each graph vertex
  // per mesh vertex: graph vertex for critical ones, else the containing edge
  std::vector<int> vertexNode;
  std::vector<int> vertexEdge;
  std::vector<double> vertexParam;  // normalized position along vertexEdge
  // pieces: triangle t covers strips firstStrip[t] .. firstStrip[t] + count - 1
  std::vector<int> firstStrip;
  std::vector<int> pieceOffset;  // size nT + 1
  std::vector<int> pieceEdge;
  // per graph vertex: triangles meeting the critical level component
  std::vector<std::vector<int>> figureEight;

  /// Graph edge carrying the level component of triangle t at level z, or -1
  /// if t does not meet that level's open strip.
  int edge_at(int t, double z) const;
  int strip_of(double z) const;
};

struct ReebOptions {
  int interiorLevels = 64;
  int saddleLevels = 64;
  double saddleRatio = 0.8408964152537145;  // 2^(-1/4)
};

struct ReebResult {
  MeasuredReebGraph graph;
  ProjectionMap projection;
};

ReebResult build_reeb(const TriMeshField& mesh, const ReebOptions& opts = {});

/// Cumulative measure at level z on an edge (piecewise-linear interpolation).
double measure_at(const MeasuredReebGraph& g, int edge, double z);

/// Cumulative integral of f dmu from the edge start to level z.
double first_moment_at(const MeasuredReebGraph& g, int edge, double z);

struct LevelCycle {
  double z = 0.0;
  std::vector<Vec3> points;
  std::vector<std::pair<int, double>> crossings;  // (mesh edge, param from edges[e][0])
  std::vector<int> triangles;                      // triangle entered after each crossing
  int orientation = 1;
};

LevelCycle level_cycle(const TriMeshField& mesh, const Topology& topo, const MeasuredReebGraph& g,
                       const ProjectionMap& proj, int edge, double z);

/// Returns z unless it equals one of the (sorted) vertex values, in which case
/// the midpoint to the next larger value.
double safe_level(const std::vector<double>& sortedValues, double z);

std::string graph_to_json(const MeasuredReebGraph& g);
MeasuredReebGraph graph_from_json(const std::string& text);
std::string graph_to_dot(const MeasuredReebGraph& g);

}  // namespace symreeb
