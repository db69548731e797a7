#pragma once

#include <array>
#include <functional>
#include <vector>

#include "symreeb/mesh.hpp"

namespace symreeb::fixtures {

TriMeshField tetrahedron();
TriMeshField octahedron();

/// Octahedron with every face split into n^2 triangles and projected to the
/// unit sphere; 8 n^2 triangles, field = z.
TriMeshField sphere(int n);

/// Torus of revolution about the y axis, sampled on an nu x nv grid. The field
/// is the height z plus a small tilt that breaks grid symmetries.
TriMeshField torus(int nu, int nv, double R = 2.0, double r = 0.75, double tilt = 0.013);

enum class GridPattern { Diagonal, Crossed };

/// Unit-area flat torus [0,1)^2 with n x n squares. Diagonal: two triangles per
/// square. Crossed: four triangles around a centre vertex (symmetric under the
/// quarter turn). Vertex positions are in [0,1)^2 with z = 0; areas are given
/// by area_override.
TriMeshField flat_torus(int n, GridPattern pattern, const std::function<double(double, double)>& f);

/// Replaces the field by f(x, y) evaluated at the vertex positions.
void resample(TriMeshField& mesh, const std::function<double(double, double)>& f);

double wave_field(double x, double y);        // cos 2 pi y + 0.1 cos 2 pi x
double two_maxima_field(double x, double y);  // torus field with two maxima

struct Box {
  int x0, x1, y0, y1;  // half-open cell ranges
};

/// Boundary surface of a slab of unit voxels [0,W) x [0,H) x [0,D) with
/// rectangular holes drilled through z. Field x + a y + b z.
TriMeshField slab(int W, int H, int D, const std::vector<Box>& holes, double a, double b);

/// Genus-2 slab with two holes side by side along x (reduced graph: dumbbell).
TriMeshField pretzel_dumbbell();
/// Genus-2 slab with a large hole and a small hole above it (reduced graph: theta).
TriMeshField pretzel_theta();

/// Vertex permutation of pretzel_dumbbell induced by the half turn
/// (x, y, z) -> (x, H - y, D - z).
std::vector<int> pretzel_dumbbell_half_turn();

/// Vertex permutation of the crossed flat torus induced by (x, y) -> (-y, x).
std::vector<int> flat_torus_quarter_turn(int n);

/// Vertex permutation of the flat torus induced by (x, y) -> (x, y + k / n).
std::vector<int> flat_torus_shift_y(int n, GridPattern pattern, int k);

}  // namespace symreeb::fixtures
