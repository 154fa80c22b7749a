#pragma once

#include <Eigen/Dense>

#include "drsub/forest.hpp"
#include "drsub/hull.hpp"

namespace drsub::lp {

// minimize c^T x  subject to  A x <= b,  lower <= x <= upper.
// Empty lower/upper default to 0 and +inf; either may hold infinities.
struct DenseLP {
  Eigen::VectorXd c;
  Eigen::MatrixXd A;
  Eigen::VectorXd b;
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;
};

enum class Status { Optimal, Infeasible, Unbounded };
std::string_view to_string(Status s);

struct Options {
  double feasibility_tol = 1e-9;
  double optimality_tol = 1e-9;
  double complementarity_tol = 1e-8;
  int degenerate_before_bland = 50;
  int refactor_every = 64;
  int max_iterations = 100000;
};

struct Result {
  Status status = Status::Infeasible;
  Eigen::VectorXd x;
  double objective = 0.0;
  Eigen::VectorXd row_duals;      // one per row of A, <= 0
  Eigen::VectorXd reduced_costs;  // c - A^T y
  int iterations = 0;
  int bland_pivots = 0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  double complementarity = 0.0;
};

Result solve_lp(const DenseLP& lp, const Options& opts = {});

struct CzSolution {
  Point z;
  double objective = 0.0;
  std::vector<LinearCut> rows;   // monotone and MIR rows handed to the solver
  std::vector<double> row_duals;
  Result raw;
};

// min a^T z over the box, arc rows and MIR rows, by the simplex method.
CzSolution solve_over_cz(const ForestInstance& inst, const std::vector<double>& a,
                         const Options& opts = {});

}  // namespace drsub::lp
