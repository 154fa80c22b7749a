#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "drsub/forest.hpp"
#include "drsub/linopt.hpp"
#include "drsub/oracle.hpp"
#include "drsub/perm.hpp"

namespace drsub::bruteforce {

struct Budget {
  std::uint64_t subsets = std::uint64_t{1} << 20;
  std::uint64_t permutations = 1000000;
  std::uint64_t lattice_points = 10000000;
};

struct ExtremeMin {
  VertexSubset S;
  Point z;
  double value = 0.0;
};

// Exhaustive min of f over P(S), S ranging over all subsets.
ExtremeMin min_over_extreme_points(const ForestInstance& inst, const ValueOracle& oracle,
                                   const Budget& budget = {});

struct LatticeMin {
  Point z;
  double value = 0.0;
  std::uint64_t evaluated = 0;
};

// Integer vertices range over 0..u, continuous ones over multiples of
// grid_step plus u itself; only monotone points are evaluated.
LatticeMin min_over_lattice(const ForestInstance& inst, const ValueOracle& oracle, double grid_step,
                            const Budget& budget = {});

struct PermutationMax {
  perm::Permutation perm;
  double violation = 0.0;
  std::uint64_t enumerated = 0;
};

// Largest DR-cut violation at (z, w) over every valid permutation. Violations
// are formed as sum_k t_k(z) (f(P_k) - f(P_{k-1})) - w, without building the
// cut coefficients.
PermutationMax max_violation_over_permutations(const ForestInstance& inst,
                                               const ValueOracle& oracle, const Point& z, double w,
                                               const Budget& budget = {});

// Random instances and data for property tests.

struct InstanceOptions {
  int vertices = 6;
  double root_probability = 0.3;
  double integer_probability = 0.5;
  double equal_bound_probability = 0.25;
  // Below a fractional bound, chance of an integer child at the rounded-up bound.
  double psi_child_probability = 0.5;
  bool enforce_assumption2 = true;
  // Insert the extra integer child under psi vertices where needed.
  bool normalize = true;
  // Redraw until the (normalized) instance has at most this many vertices; 0 = no cap.
  int max_vertices = 0;
};

ForestInstance random_instance(std::mt19937_64& rng, const InstanceOptions& opts);

// Symmetric Q with entries in [-scale, 0] (about half of them zero) and c in
// [-linear, linear].
QuadraticSpec random_dr_quadratic(std::mt19937_64& rng, int n, double scale = 1.0,
                                  double linear = 20.0);

std::vector<double> random_objective(std::mt19937_64& rng, int n, double range = 5.0);

// Rewrites a_psi and a_child so that the subtree below psi lands in `target`.
void steer_objective(const ForestInstance& inst, std::vector<double>& a, Vertex psi,
                     linopt::Case target, std::mt19937_64& rng);

// Convex combination of `atoms` extreme points with random subsets and weights.
Point random_hull_point(const ForestInstance& inst, std::mt19937_64& rng, int atoms = 3);

}  // namespace drsub::bruteforce
