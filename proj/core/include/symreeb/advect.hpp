#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "symreeb/mesh.hpp"

namespace symreeb {

using Point2 = std::array<double, 2>;

/// offset + sum_k (c_k cos 2 pi k s + s_k sin 2 pi k s)
struct FourierProfile {
  struct Mode {
    int k = 1;
    double cosCoef = 0.0;
    double sinCoef = 0.0;
  };
  double offset = 0.0;
  std::vector<Mode> modes;

  double value(double s) const;
  double derivative(double s) const;
};

/// sum (c cos 2 pi (kx x + ky y) + s sin 2 pi (kx x + ky y))
struct StreamFunction {
  struct Mode {
    int kx = 0;
    int ky = 0;
    double cosCoef = 0.0;
    double sinCoef = 0.0;
  };
  std::vector<Mode> modes;

  double value(double x, double y) const;
  double dx(double x, double y) const;
  double dy(double x, double y) const;
  double dxx(double x, double y) const;
  double dxy(double x, double y) const;
  double dyy(double x, double y) const;
};

enum class MapKind { ShearX, ShearY, HamiltonianFlow, SimplicialAutomorphism };

struct AreaPreservingMap {
  MapKind kind = MapKind::ShearX;
  FourierProfile profile;     // shears: x += g(y) or y += h(x)
  StreamFunction stream;      // flow
  double time = 0.0;
  int steps = 1;
  std::vector<int> permutation;  // perm[v] = image of vertex v

  /// Point maps on the unit torus (not for simplicial automorphisms).
  Point2 forward(Point2 p) const;
  Point2 inverse(Point2 p) const;
  std::string describe() const;
};

AreaPreservingMap shear_x(FourierProfile g);
AreaPreservingMap shear_y(FourierProfile h);
/// Time-t map of the Hamiltonian flow of H, as `steps` symplectic Euler steps.
AreaPreservingMap hamiltonian_flow_map(StreamFunction H, double t, int steps);
AreaPreservingMap simplicial_automorphism(std::vector<int> perm);

/// Pulls the field (and cochain) back through the inverse map, sampling the
/// piecewise-linear field at the preimages of the vertices.
TriMeshField apply_map(const TriMeshField& mesh, const AreaPreservingMap& map);

/// Same, with the field given in closed form on the unit torus and evaluated
/// exactly at the preimages. The cochain, if any, is pulled back as above.
TriMeshField apply_map(const TriMeshField& mesh, const AreaPreservingMap& map,
                       const std::function<double(double, double)>& field);

/// {"kind": "shear_x"|"shear_y"|"ham"|"perm", ...}
AreaPreservingMap map_from_json(const std::string& text);

}  // namespace symreeb
