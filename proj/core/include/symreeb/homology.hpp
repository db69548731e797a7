#pragma once

#include <vector>

#include "symreeb/reeb.hpp"

namespace symreeb {

/// Integer 1-chain: one coefficient per undirected mesh edge, oriented a -> b
/// with a < b.
using EdgeChain = std::vector<int>;

struct HomologyBasis {
  std::vector<EdgeChain> cycles;                // 2g tree-cotree generators
  std::vector<std::vector<int>> duals;          // crossing cochain of each generator's push-off
  std::vector<std::vector<int>> intersection;   // [i][j] = cycles[i] . cycles[j]
};

HomologyBasis homology_basis(const TriMeshField& mesh, const Topology& topo);

/// Edge-crossing counts of the left push-off of a 1-cycle. Pairing a chain
/// with it gives the algebraic intersection number chain . cycle.
std::vector<int> pushoff_cochain(const TriMeshField& mesh, const Topology& topo,
                                 const EdgeChain& cycle);

int pair(const EdgeChain& chain, const std::vector<int>& cochain);

/// Coordinates of a 1-cycle in the basis.
std::vector<int> homology_class(const HomologyBasis& basis, const EdgeChain& cycle);

/// Boundary of a chain: +1 at heads, -1 at tails. All zero for a cycle.
std::vector<int> chain_boundary(const Topology& topo, const EdgeChain& chain);

struct SnappedCycle {
  EdgeChain chain;           // path through the low endpoints of the crossed edges
  double sublevelArea = 0.0; // area swept between the level cycle and the path
};

/// Pushes a level cycle down onto the mesh edges. The level cycle equals the
/// snapped chain plus the boundary of the swept region.
SnappedCycle snap_level_cycle(const TriMeshField& mesh, const Topology& topo, const LevelCycle& cycle);

/// Area of a 2-chain c with boundary(c) = cycle1 - cycle2, reduced into
/// [0, totalArea). Throws NotHomologous if no such chain exists.
double chain_area_between(const Topology& topo, const EdgeChain& cycle1, const EdgeChain& cycle2);

/// chain_area_between for two level cycles, including the swept-area terms.
/// The cycles may come from different fields on the same mesh.
double level_area_between(const Topology& topo, const TriMeshField& mesh1, const LevelCycle& cycle1,
                          const TriMeshField& mesh2, const LevelCycle& cycle2);

}  // namespace symreeb
