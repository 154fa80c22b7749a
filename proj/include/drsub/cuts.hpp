#pragma once

#include <string>
#include <vector>

#include "drsub/forest.hpp"
#include "drsub/oracle.hpp"
#include "drsub/perm.hpp"

namespace drsub::cuts {

// Epigraph inequality  w >= coef^T z, generated by a valid permutation.
struct DRCut {
  perm::Permutation perm;
  std::vector<double> coef;
  std::vector<double> prefix_values;  // f(P(delta, k)) for k = 0..n

  double evaluate(const Point& z) const;
};

DRCut dr_cut(const ForestInstance& inst, const ValueOracle& oracle, const perm::Permutation& delta);

// coef^T z - w; positive when (z, w) is cut off.
double cut_violation(const DRCut& cut, const Point& z, double w);

struct SeparateOptions {
  bool check_hull = true;
  double hull_tol = kFeasibilityTol;
};

struct Separation {
  DRCut cut;
  double violation = 0.0;
};

Separation separate(const ForestInstance& inst, const ValueOracle& oracle, const Point& z, double w,
                    const SeparateOptions& = {});

struct CutValidity {
  bool valid = true;
  double worst_slack = 0.0;  // min over S of f(P(S)) - coef^T P(S)
  VertexSubset worst;
};

// A subset fails when f(P(S)) - coef^T P(S) < -tol * (1 + |f(P(S))|).
CutValidity validate_cut_on_extremes(const ForestInstance& inst, const ValueOracle& oracle,
                                     const DRCut& cut, double tol = 1e-9);

// "w >= 0.5*z1 - 2*z3" with 1-based coordinates.
std::string format_cut(const DRCut& cut);

}  // namespace drsub::cuts
