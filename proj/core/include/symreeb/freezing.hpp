#pragma once

#include <string>
#include <utility>
#include <vector>

#include "symreeb/homology.hpp"
#include "symreeb/reeb.hpp"

namespace symreeb {

struct ReducedEdge {
  int id = 0;
  int a = -1;  // start vertex (reduced id); -1 for the vertexless loop of a torus
  int b = -1;
  std::vector<int> chain;    // full-graph edges in traversal order
  std::vector<int> forward;  // +1 when the chain edge is traversed src -> dst, else -1
  int regularSlot = 0;       // index into chain of the edge carrying the regular point
  double regularParam = 0.5; // normalized position along that full edge (src -> dst)
  double mass = 0.0;         // sum of chain masses

  bool loop() const { return a == b; }
  int regular_edge() const { return chain[regularSlot]; }
};

/// Where a full-graph cell lands under the retraction: a reduced vertex, or a
/// position along a reduced edge (chain slot k covers [k, k+1)).
struct RetractTarget {
  int vertex = -1;
  int edge = -1;
  double position = 0.0;
};

struct ReducedGraph {
  std::vector<int> vertices;  // full-graph vertex of each reduced vertex
  std::vector<ReducedEdge> edges;
  std::vector<RetractTarget> vertexTarget;  // per full-graph vertex
  std::vector<RetractTarget> edgeTarget;    // per full-graph edge (start of the edge)
  std::vector<int> edgeSlot;                // per full edge: chain slot on its reduced edge or -1

  int betti1() const {
    if (edges.empty()) return 0;
    if (vertices.empty()) return 1;
    return static_cast<int>(edges.size()) - static_cast<int>(vertices.size()) + 1;
  }
};

ReducedGraph reduced_graph(const MeasuredReebGraph& g);

/// Level of the regular point of a reduced edge.
double regular_level(const MeasuredReebGraph& g, const ReducedEdge& e);

/// level_cycle, moving z slightly when it hits a vertex value.
LevelCycle level_cycle_near(const TriMeshField& mesh, const Topology& topo,
                            const MeasuredReebGraph& g, const ProjectionMap& proj, int edge,
                            double z);

/// Homology class of the level cycle at the regular point of every reduced
/// edge, oriented with the sublevel set on its left.
std::vector<std::vector<int>> edge_homology_classes(const TriMeshField& mesh, const Topology& topo,
                                                    const MeasuredReebGraph& g,
                                                    const ProjectionMap& proj,
                                                    const ReducedGraph& reduced,
                                                    const HomologyBasis& basis);

struct PantsColoring {
  std::vector<std::vector<int>> regions;      // triangles per reduced vertex
  std::vector<int> euler;                     // Euler characteristic of each region
  std::vector<int> boundaryComponents;        // per region
  std::vector<std::vector<int>> incidentEdges;  // reduced edges per vertex, with multiplicity
};

PantsColoring pants_coloring(const TriMeshField& mesh, const Topology& topo,
                             const MeasuredReebGraph& g, const ProjectionMap& proj,
                             const ReducedGraph& reduced);

/// (reduced edge id, sign) for every loop of the reduced graph.
std::vector<std::pair<int, int>> half_twists(const ReducedGraph& reduced,
                                             const std::vector<std::vector<int>>& edgeClasses);

struct FrozenData {
  int genus = 0;
  ReducedGraph reduced;
  HomologyBasis basis;
  std::vector<double> regularLevels;
  std::vector<std::vector<int>> edgeClasses;
  PantsColoring pants;                         // empty below genus 2
  std::vector<std::pair<int, int>> halfTwists; // empty without loops
};

FrozenData freeze(const TriMeshField& mesh, const Topology& topo, const ReebResult& reeb);

std::string frozen_to_json(const FrozenData& fd);

}  // namespace symreeb
