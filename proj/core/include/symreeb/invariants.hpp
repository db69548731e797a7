#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "symreeb/reeb.hpp"

namespace symreeb {

/// I_0..I_lmax of f^l dmu over one edge (lmax <= 16).
std::vector<double> edge_moments(const MeasuredReebGraph& g, int edge, int lmax);

/// Sum over edges of I_l, accumulated in edge order.
double global_moment(const MeasuredReebGraph& g, int l);

/// d mu / d z at an interior level: centred difference over the half-width of
/// the sample interval containing z.
double period_function(const MeasuredReebGraph& g, int edge, double z);

struct SaddleFit {
  int vertexId = -1;
  std::array<int, 3> edges{};  // trunk first, then the two branches by id
  double psiPrime0 = 0.0;
  std::array<double, 3> logCoefficients{};
  std::array<double, 3> etaValues{};  // constant terms
  std::array<double, 3> etaSlopes{};  // linear terms
  std::array<double, 3> zetaFirstOrder{};
  std::array<int, 3> samples{};
  double conditionNumber = 0.0;
};

struct FitOptions {
  double radius = 0.0;       // <= 0: quarter of the shortest incident f-extent
  double innerCutoff = -1.0; // < 0: derived from the vertex ring spread
  int minSamples = 12;
  double maxCondition = 1e8;
  bool secondOrder = true;  // also fit t^2 ln|t| and t^2 terms
};

SaddleFit fit_saddle(const MeasuredReebGraph& g, int vertex, const FitOptions& opts = {});

struct IsoCertificate {
  std::vector<int> vertexMap;  // G1 vertex -> G2 vertex
  std::vector<int> edgeMap;    // G1 edge -> G2 edge
  double maxFDeviation = 0.0;
  double maxMassDeviation = 0.0;
  double maxProfileDeviation = 0.0;
};

/// Sup of |mu1 - mu2| over the sample levels of both edges, comparing points
/// at equal normalized position along the edge.
double profile_deviation(const MeasuredReebGraph& g1, int e1, const MeasuredReebGraph& g2, int e2);

std::optional<IsoCertificate> graphs_isomorphic(const MeasuredReebGraph& g1,
                                                const MeasuredReebGraph& g2, double tolF,
                                                double tolMass, double tolProfile);

/// Every certificate within tolerance (parallel bundles can admit several),
/// best first. At most `limit` are returned.
std::vector<IsoCertificate> enumerate_isomorphisms(const MeasuredReebGraph& g1,
                                                   const MeasuredReebGraph& g2, double tolF,
                                                   double tolMass, double tolProfile,
                                                   std::size_t limit = 4096);

bool compatible(const MeasuredReebGraph& g, int genus, double area, double tol);

/// CSV table: one row per edge (edgeId, src, dst, fSrc, fDst, mass, I0..Ilmax)
/// followed by one row per fitted saddle.
std::string invariants_csv(const MeasuredReebGraph& g, int lmax, const std::vector<SaddleFit>& fits);

}  // namespace symreeb
