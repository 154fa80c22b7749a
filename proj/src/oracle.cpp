#include "drsub/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace drsub {

double QuadraticSpec::evaluate(std::span<const double> z) const {
  Eigen::Map<const Eigen::VectorXd> v(z.data(), static_cast<Eigen::Index>(z.size()));
  return v.dot(Q * v) + c.dot(v);
}

double TableSpec::evaluate(std::span<const double> z) const {
  std::vector<long long> key(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) {
    if (!is_integral(z[i]))
      throw Error(ErrorCode::OracleEvaluationFailure, "table objective queried off the lattice");
    key[i] = std::llround(z[i]);
  }
  auto it = values.find(key);
  if (it == values.end())
    throw Error(ErrorCode::OracleEvaluationFailure, "table objective has no entry for point");
  return it->second;
}

ValueOracle::ValueOracle(Function f, int dimension) : fn_(std::move(f)), dim_(dimension) {
  std::vector<double> zero(dim_, 0.0);
  base_ = raw(zero);
}

ValueOracle ValueOracle::quadratic(QuadraticSpec spec) {
  const int n = static_cast<int>(spec.c.size());
  if (spec.Q.rows() != n || spec.Q.cols() != n)
    throw Error(ErrorCode::InvalidArgument, "quadratic objective dimensions disagree");
  auto shared = std::make_shared<const QuadraticSpec>(std::move(spec));
  ValueOracle o([shared](std::span<const double> z) { return shared->evaluate(z); }, n);
  o.quad_ = shared;
  return o;
}

ValueOracle ValueOracle::table(TableSpec spec, int dimension) {
  auto shared = std::make_shared<const TableSpec>(std::move(spec));
  return ValueOracle([shared](std::span<const double> z) { return shared->evaluate(z); },
                     dimension);
}

ValueOracle ValueOracle::zero(int dimension) {
  return ValueOracle([](std::span<const double>) { return 0.0; }, dimension);
}

double ValueOracle::raw(std::span<const double> z) const {
  if (!fn_) throw Error(ErrorCode::OracleEvaluationFailure, "empty oracle");
  if (static_cast<int>(z.size()) != dim_)
    throw Error(ErrorCode::OracleEvaluationFailure, "point has wrong dimension");
  double v;
  try {
    v = fn_(z);
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    throw Error(ErrorCode::OracleEvaluationFailure, e.what());
  }
  if (!std::isfinite(v)) throw Error(ErrorCode::OracleEvaluationFailure, "non-finite value");
  return v;
}

DrCheckResult check_dr_submodularity(const ValueOracle& oracle, const ForestInstance& inst,
                                     const DrCheckOptions& opts) {
  DrCheckResult res;
  if (const QuadraticSpec* q = oracle.quadratic_spec(); q && !opts.force_sampling) {
    res.exact = true;
    const double m = q->Q.size() ? q->Q.maxCoeff() : 0.0;
    res.worst = std::min(0.0, -2.0 * m);
    res.pass = m <= 0.0;
    return res;
  }
  if (inst.has_infinite_bounds())
    throw Error(ErrorCode::InvalidArgument, "DR check needs finite bounds");

  const int n = inst.size();
  std::mt19937_64 rng(opts.seed);
  auto uniform = [&](double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
  };
  std::vector<double> x(n + 1, 0.0), y(n + 1, 0.0);
  Point px(n), py(n);
  int attempts = 0;
  while (res.samples < opts.samples && attempts < 20 * opts.samples) {
    ++attempts;
    // Integer coordinates stay on the lattice so tabulated objectives can be checked too.
    auto draw = [&](double lo, double hi, bool integer) {
      if (!integer) return uniform(lo, hi);
      const auto a = static_cast<long long>(std::ceil(lo - kIntegralityTol));
      const auto b = static_cast<long long>(std::floor(hi + kIntegralityTol));
      return static_cast<double>(std::uniform_int_distribution<long long>(a, b)(rng));
    };
    for (Vertex v : inst.preorder()) {
      const Vertex p = inst.parent(v);
      y[v] = draw(y[p], inst.upper(v), inst.is_integer(v));
      x[v] = draw(x[p], y[v], inst.is_integer(v));
    }
    const Vertex i = std::uniform_int_distribution<Vertex>(1, n)(rng);
    double amax = inst.upper(i) - y[i];
    for (Vertex c : inst.children(i)) amax = std::min({amax, y[c] - y[i], x[c] - x[i]});
    if (inst.is_integer(i)) amax = std::floor(amax + kIntegralityTol);
    if (amax <= 1e-12) continue;
    const double alpha = inst.is_integer(i) ? draw(1.0, amax, true) : uniform(0.0, amax);
    if (alpha <= 0.0) continue;
    for (Vertex v = 1; v <= n; ++v) {
      px[v - 1] = x[v];
      py[v - 1] = y[v];
    }
    const double fx = oracle(px), fy = oracle(py);
    px[i - 1] += alpha;
    py[i - 1] += alpha;
    const double fx2 = oracle(px), fy2 = oracle(py);
    const double scale = 1.0 + std::max({std::abs(fx), std::abs(fy), std::abs(fx2), std::abs(fy2)});
    const double gap = ((fx2 - fx) - (fy2 - fy)) / scale;
    res.worst = std::min(res.worst, gap);
    ++res.samples;
  }
  res.pass = res.worst >= -opts.tolerance;
  return res;
}

}  // namespace drsub
