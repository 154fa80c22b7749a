#pragma once

#include <vector>

#include "drsub/forest.hpp"
#include "drsub/oracle.hpp"

namespace drsub {

// Result of inserting a single integer child below every psi that lacks one.
// Inserted vertices get ids n+1, n+2, ... in psi order.
struct NormalizedInstance {
  ForestInstance instance;
  ValueOracle oracle;  // empty when normalization was run without an oracle
  // original_of[v] for v in 1..size: the original vertex, or kNone if inserted.
  std::vector<Vertex> original_of;
  // (psi, inserted child) pairs.
  std::vector<std::pair<Vertex, Vertex>> inserted;
  int original_size = 0;

  bool identity() const { return inserted.empty(); }
};

NormalizedInstance normalize_property1(const ForestInstance& inst);
NormalizedInstance normalize_property1(const ForestInstance& inst, const ValueOracle& oracle);

Point map_solution_back(const Point& x, const NormalizedInstance& norm);
// Lifts a point of the original relaxation by giving each inserted vertex the
// largest value its children and bound allow. The result lies in the extended
// hull whenever z lies in the original one.
Point lift_hull_point(const Point& z, const NormalizedInstance& norm);

Point lift_solution(const Point& z, const NormalizedInstance& norm, const ForestInstance& original);

}  // namespace drsub
