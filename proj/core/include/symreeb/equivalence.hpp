#pragma once

#include <optional>
#include <string>
#include <vector>

#include "symreeb/invariants.hpp"
#include "symreeb/mesh.hpp"

namespace symreeb {

enum class Group { SDiff, SDiff0, Ham };
enum class Outcome { Equivalent, NotEquivalent, Inconclusive };

const char* to_string(Group g);
const char* to_string(Outcome o);
Group parse_group(const std::string& s);

/// Relative tolerances: f against the field range, mass and profiles against
/// the total mass, area against the total area, circulation against the
/// largest edge limit.
struct Tolerances {
  double f = 1e-9;
  double mass = 1e-9;
  double profile = 1e-6;
  double area = 1e-6;
  double circ = 1e-6;
};

struct Verdict {
  Outcome outcome = Outcome::NotEquivalent;
  std::string reason;
  Group group = Group::SDiff;
  Tolerances tolerances;
  std::optional<IsoCertificate> certificate;
  std::vector<int> fluxEdges;          // full-graph edges of the first function used for the flux test
  std::vector<double> fluxAreas;       // chain areas in [0, totalArea)
  std::vector<double> circulationDeltas;  // per edge of the first function
};

/// 0 Equivalent, 1 NotEquivalent, 2 Inconclusive.
int exit_code(Outcome o);

Verdict compare_functions(const TriMeshField& meshF, const TriMeshField& meshG, Group group,
                          const Tolerances& tol = {});

/// Compares (F, alpha) and (G, beta) through their circulation graphs. Group
/// Ham is not accepted here.
Verdict compare_cosets(const TriMeshField& meshF, const TriMeshField& meshG, Group group,
                       const Tolerances& tol = {});

std::string verdict_to_json(const Verdict& v);

}  // namespace symreeb
