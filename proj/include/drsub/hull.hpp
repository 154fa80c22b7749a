#pragma once

#include <functional>
#include <string>
#include <vector>

#include "drsub/forest.hpp"

namespace drsub {

enum class CutTag { Box, NonNeg, Monotone, MIR, DR };
std::string_view to_string(CutTag tag);

// Row  coef^T z <= rhs.
struct LinearCut {
  std::vector<double> coef;
  double rhs = 0.0;
  CutTag tag = CutTag::Box;

  double lhs(const Point& z) const;
  double slack(const Point& z) const { return rhs - lhs(z); }
};

std::string format_row(const LinearCut& row);

namespace hull {

// Deepest member of S on the path from i to its root, or kNone.
Vertex i_triangle(const ForestInstance& inst, const VertexSubset& S, Vertex i);
VertexSubset sigma(const ForestInstance& inst, const VertexSubset& S, Vertex i);

Point extreme_point(const ForestInstance& inst, const VertexSubset& S);

std::vector<LinearCut> mir_rows(const ForestInstance& inst);
// Upper bounds, non-negativity, one row per arc, then MIR rows.
std::vector<LinearCut> cz_rows(const ForestInstance& inst);

struct Membership {
  bool member = true;
  std::vector<LinearCut> violated;
  double max_violation = 0.0;
};

Membership is_member_cz(const ForestInstance& inst, const Point& z, double tol = kFeasibilityTol);
bool is_feasible(const ForestInstance& inst, const Point& z, double tol = kFeasibilityTol);

inline constexpr int kMaxEnumerationVertices = 20;

// Calls fn(S, P(S)) for every subset; guarded to |V| <= 20.
void for_each_extreme_point(const ForestInstance& inst,
                            const std::function<void(const VertexSubset&, const Point&)>& fn);

// Point hashed to 12 decimal digits, for de-duplicating P(S) across subsets.
std::string canonical_key(const Point& z);

}  // namespace hull
}  // namespace drsub
