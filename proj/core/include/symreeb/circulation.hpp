#pragma once

#include <vector>

#include "symreeb/reeb.hpp"

namespace symreeb {

struct CirculationGraph {
  MeasuredReebGraph base;
  std::vector<double> cMinus;           // limit at each edge's source vertex
  std::vector<double> residuals;        // per vertex condition violation
  std::vector<double> stokesResiduals;  // per edge, second-level witness (mesh input only)
};

struct CirculationSpace {
  CirculationGraph particular;
  std::vector<std::vector<double>> basis;  // per-edge vectors spanning the kernel
  int dimension = 0;
};

struct AxiomReport {
  double worstStokes = 0.0;
  double worstOneValent = 0.0;
  double worstThreeValent = 0.0;
  double scale = 0.0;  // max |C| over all edge limits
  std::vector<double> vertexResiduals;
  bool pass = true;
};

/// max_t |d alpha(t) - mean(F on t) area(t)| / area(t).
double vorticity_residual(const TriMeshField& mesh);

/// Line integral of the Whitney interpolant of `edgeValues` (oriented a -> b
/// with a < b) along a level cycle.
double whitney_integral(const TriMeshField& mesh, const Topology& topo,
                        const std::vector<double>& edgeValues, const LevelCycle& cycle);

/// Circulation of the level cycle with the per-triangle vorticity mismatch
/// integrated over the sublevel parts of the crossed triangles.
double corrected_circulation(const TriMeshField& mesh, const Topology& topo,
                             const std::vector<double>& edgeValues, const LevelCycle& cycle);

CirculationGraph circulation_function(const TriMeshField& mesh, const MeasuredReebGraph& g,
                                      const ProjectionMap& proj);

/// Vertex-condition residuals of an edge-limit assignment.
std::vector<double> vertex_residuals(const MeasuredReebGraph& g, const std::vector<double>& cMinus);

AxiomReport check_circulation_axioms(const CirculationGraph& cg, double tol);

CirculationSpace solve_circulations(const MeasuredReebGraph& g);

/// Copy of the mesh with the area-weighted mean of the field removed.
TriMeshField zero_mean(const TriMeshField& mesh);

/// Cochain alpha with d alpha(t) = mean(F on t) area(t) on every triangle, by
/// a dual spanning tree sweep. Requires an area-weighted zero-mean field.
std::vector<double> exact_primitive(const TriMeshField& mesh, const Topology& topo);

/// Integral of f over the part of the given edge's cylinder below level z.
double sublevel_first_moment(const TriMeshField& mesh, const Topology& topo,
                             const MeasuredReebGraph& g, const ProjectionMap& proj, int edge,
                             double z);

}  // namespace symreeb
