#pragma once

#include <array>
#include <vector>

#include "symreeb/mesh.hpp"

namespace symreeb {

// Combinatorial structure of a closed oriented triangle mesh.
//
// Undirected edge e = (a, b) with a < b. Side k of triangle (v0, v1, v2) runs
// from v_k to v_{k+1}; triSign[t][k] is +1 when that matches a -> b.
// edgeTris[e][0] is the triangle traversing a -> b, edgeTris[e][1] the one
// traversing b -> a (the left and right faces of the directed edge a -> b).
struct Topology {
  int nV = 0;
  int nE = 0;
  int nT = 0;
  std::vector<std::array<int, 2>> edges;
  std::vector<std::array<int, 3>> triEdges;
  std::vector<std::array<int, 3>> triSign;
  std::vector<std::array<int, 2>> edgeTris;
  std::vector<std::vector<int>> vertexTris;
  std::vector<std::vector<int>> vertexEdges;
  std::vector<double> area;

  int euler() const { return nV - nE + nT; }
  int genus() const { return (2 - euler()) / 2; }
  int edge_index(int a, int b) const;  // -1 if absent
  int other_vertex(int e, int v) const { return edges[e][0] == v ? edges[e][1] : edges[e][0]; }
};

/// Builds adjacency and checks closedness, orientability, connectivity and
/// positive areas. Throws Error naming the first offending simplex.
Topology build_topology(const TriMeshField& mesh);

double triangle_area(const Vec3& a, const Vec3& b, const Vec3& c);

/// Link of v as a cyclic ccw vertex sequence.
std::vector<int> vertex_link(const TriMeshField& mesh, const Topology& topo, int v);

/// Number of connected components of the lower link (0 for a minimum).
int lower_link_components(const TriMeshField& mesh, const Topology& topo, int v);

/// Cochain values per undirected edge, oriented a -> b (a < b). Edges not
/// listed in the cochain get zero.
std::vector<double> cochain_on_edges(const TriMeshField& mesh, const Topology& topo);

/// Inverse of cochain_on_edges.
Cochain make_cochain(const Topology& topo, const std::vector<double>& values);

}  // namespace symreeb
