#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "drsub/cuts.hpp"
#include "drsub/forest.hpp"
#include "drsub/lp.hpp"
#include "drsub/oracle.hpp"

namespace drsub::solver {

enum class Status { Optimal, BoundOnly };
std::string_view to_string(Status s);

enum class SeedPoint { Zero, Upper };

struct Options {
  double epsilon = kViolationTol;
  // 0 picks 10 * 2^min(n, 12).
  long long max_iterations = 0;
  SeedPoint seed = SeedPoint::Zero;
  // Solve a relaxation and report a bound when the assumptions fail, instead of throwing.
  bool allow_degraded = false;
  bool check_dr = false;
  DrCheckOptions dr;
  lp::Options lp;
  bool record_cuts = false;
};

struct Report {
  Status status = Status::Optimal;
  Point z;             // minimizer in the caller's coordinates (empty if none was found)
  double value = 0.0;  // f(z), in the oracle's own units
  double bound = 0.0;  // final master LP value (lower bound on the minimum)
  int iterations = 0;
  int cuts = 0;
  int oracle_calls = 0;  // distinct points evaluated
  int recovery_prefix = 0;
  perm::Permutation recovery_perm;
  std::vector<double> bound_history;
  std::vector<cuts::DRCut> cut_pool;  // only with record_cuts; extended coordinates
  int inserted_vertices = 0;
  double wall_seconds = 0.0;

  // Degraded runs.
  std::vector<Vertex> relaxed;  // psi vertices whose bound was rounded up
  std::optional<double> upper_bound;
  bool certified = false;
};

// Minimizes f over the mixed-integer forest set. The instance must have finite
// bounds; inserted vertices from normalization are handled internally.
Report minimize(const ForestInstance& inst, const ValueOracle& oracle, const Options& opts = {});

struct SetMinimum {
  std::vector<int> members;  // 1-based
  double value = 0.0;
};

// Submodular set function minimization on {1..n}: the forest has no arcs and
// every vertex is integer with bound 1.
SetMinimum minimize_set_function(const std::function<double(const std::vector<int>&)>& f, int n,
                                 const Options& opts = {});

}  // namespace drsub::solver
