#pragma once

#include <functional>
#include <map>
#include <memory>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "drsub/forest.hpp"

namespace drsub {

// f(z) = z^T Q z + c^T z with Q symmetric.
struct QuadraticSpec {
  Eigen::MatrixXd Q;
  Eigen::VectorXd c;

  double evaluate(std::span<const double> z) const;
};

// Objective tabulated on integer points (all-integer instances only).
struct TableSpec {
  std::map<std::vector<long long>, double> values;

  double evaluate(std::span<const double> z) const;
};

// Black-box objective. Calls return f(z) - f(0), so the oracle as seen by the
// algorithms always vanishes at the origin.
class ValueOracle {
 public:
  using Function = std::function<double(std::span<const double>)>;

  ValueOracle() = default;
  ValueOracle(Function f, int dimension);
  static ValueOracle quadratic(QuadraticSpec spec);
  static ValueOracle table(TableSpec spec, int dimension);
  static ValueOracle zero(int dimension);

  double operator()(std::span<const double> z) const { return raw(z) - base_; }
  double raw(std::span<const double> z) const;
  double base_value() const { return base_; }
  int dimension() const { return dim_; }
  explicit operator bool() const { return static_cast<bool>(fn_); }

  const QuadraticSpec* quadratic_spec() const { return quad_.get(); }

 private:
  Function fn_;
  int dim_ = 0;
  double base_ = 0.0;
  std::shared_ptr<const QuadraticSpec> quad_;
};

struct DrCheckResult {
  bool pass = true;
  // Most negative observed violation (0 when none); sampled gaps are scaled
  // by 1 + the largest function value involved.
  double worst = 0.0;
  int samples = 0;
  bool exact = false;  // decided from the quadratic's coefficients
};

struct DrCheckOptions {
  int samples = 2000;
  std::uint64_t seed = 1;
  double tolerance = 1e-9;
  bool force_sampling = false;
};

DrCheckResult check_dr_submodularity(const ValueOracle& oracle, const ForestInstance& inst,
                                     const DrCheckOptions& = {});

}  // namespace drsub
