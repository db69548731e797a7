#pragma once

#include <random>
#include <vector>

#include "symreeb/reeb.hpp"

namespace symreeb::testing {

struct RandomGraphOptions {
  int maxEdges = 8;
  double parallelChance = 0.4;  // chance a new loop closes on a single edge
  bool withFirstMoments = false;  // fill moments {I0, I1} with sum I1 = 0
};

/// Random abstract measured Reeb graph of a simple Morse function, grown from
/// a single min -> max edge by attaching branches and handles. Vertex values
/// are distinct integers, masses are multiples of 1/4 and every profile has
/// three samples (ends and midpoint) at dyadic fractions, so all data is exact.
MeasuredReebGraph random_reeb_graph(std::mt19937_64& rng, const RandomGraphOptions& opts);

/// Copy with vertices and edges renumbered by random permutations.
/// vertexPerm[old] = new, edgePerm[old] = new.
MeasuredReebGraph relabel(const MeasuredReebGraph& g, std::mt19937_64& rng,
                          std::vector<int>* vertexPerm = nullptr, std::vector<int>* edgePerm = nullptr);

}  // namespace symreeb::testing
