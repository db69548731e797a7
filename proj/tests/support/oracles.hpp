#pragma once

#include <vector>

#include "symreeb/mesh.hpp"
#include "symreeb/reeb.hpp"

namespace symreeb::testing {

/// Exhaustive search for a vertex bijection preserving kind and f exactly and
/// an edge bijection preserving endpoints, mass and the profile samples
/// exactly. Meant for small graphs only.
bool brute_force_isomorphic(const MeasuredReebGraph& a, const MeasuredReebGraph& b);

/// E - V + (number of connected components), by union-find.
int cycle_rank(const MeasuredReebGraph& g);

/// V - E + T with edges counted from the triangle list.
int euler_characteristic(const TriMeshField& mesh);

struct CriticalCounts {
  int minima = 0;
  int saddles = 0;  // lower link with two components
  int maxima = 0;
};

/// Critical points from cyclic links assembled directly from the triangle list.
CriticalCounts count_critical_points(const TriMeshField& mesh);

/// Integral of f^l over the PL surface, triangle by triangle, with
/// int_T f^l = 2 A l! / (l + 2)! * h_l(f0, f1, f2) (h_l: complete homogeneous
/// symmetric polynomial).
double direct_moment(const TriMeshField& mesh, int l);

/// Vertex-condition residuals of edge limits c, written out directly:
/// minimum c(out) = 0, maximum c(in) + I1(in) = 0, saddle
/// sum_out c = sum_in (c + I1).
std::vector<double> circulation_conditions(const MeasuredReebGraph& g, const std::vector<double>& c,
                                           const std::vector<double>& firstMoments);

/// Numerical rank of a set of vectors (Gram-Schmidt with tolerance).
int vector_rank(std::vector<std::vector<double>> rows, double tol);

/// Net number of turns in x of a level cycle on the unit flat torus, from its
/// edge crossings with seam-wrapped edge vectors.
double winding_x(const TriMeshField& mesh, const Topology& topo, const LevelCycle& cycle);

/// Area of the cap {z' < z} on the unit sphere.
double sphere_cap_area(double z);

/// Riemann sum of the period function over `parts` equal slices of an edge.
double period_integral(const MeasuredReebGraph& g, int edge, int parts);

/// Circular distance between a and b modulo `period`.
double circular_distance(double a, double b, double period);

}  // namespace symreeb::testing
