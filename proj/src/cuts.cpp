#include "drsub/cuts.hpp"

#include <cmath>
#include <sstream>

#include "drsub/hull.hpp"

namespace drsub::cuts {

double DRCut::evaluate(const Point& z) const {
  double s = 0.0;
  for (std::size_t i = 0; i < coef.size(); ++i) s += coef[i] * z[i];
  return s;
}

DRCut dr_cut(const ForestInstance& inst, const ValueOracle& oracle, const perm::Permutation& delta) {
  const int n = inst.size();
  const auto rows = perm::t_rows(inst, delta);
  const auto points = perm::prefix_points(inst, delta);
  DRCut cut{delta, std::vector<double>(n, 0.0), std::vector<double>(n + 1, 0.0)};
  for (int k = 1; k <= n; ++k) cut.prefix_values[k] = oracle(points[k]);
  // coef = d^T T with d_k = f(P(delta,k)) - f(P(delta,k-1)).
  for (int k = 1; k <= n; ++k) {
    const double d = cut.prefix_values[k] - cut.prefix_values[k - 1];
    if (d == 0.0) continue;
    const auto& row = rows[k - 1];
    for (int e = 0; e < row.nnz; ++e) cut.coef[row.entries[e].first - 1] += d * row.entries[e].second;
  }
  return cut;
}

double cut_violation(const DRCut& cut, const Point& z, double w) { return cut.evaluate(z) - w; }

Separation separate(const ForestInstance& inst, const ValueOracle& oracle, const Point& z, double w,
                    const SeparateOptions& opts) {
  auto delta = perm::permutation_finder(inst, z, {opts.check_hull, opts.hull_tol});
  Separation s{dr_cut(inst, oracle, delta), 0.0};
  s.violation = cut_violation(s.cut, z, w);
  return s;
}

CutValidity validate_cut_on_extremes(const ForestInstance& inst, const ValueOracle& oracle,
                                     const DRCut& cut, double tol) {
  CutValidity out;
  bool first = true;
  hull::for_each_extreme_point(inst, [&](const VertexSubset& S, const Point& p) {
    const double f = oracle(p);
    const double slack = f - cut.evaluate(p);
    if (slack < -tol * (1.0 + std::abs(f))) out.valid = false;
    if (first || slack < out.worst_slack) {
      out.worst_slack = slack;
      out.worst = S;
      first = false;
    }
  });
  return out;
}

std::string format_cut(const DRCut& cut) {
  std::ostringstream os;
  os.precision(12);
  os << "w >= ";
  bool first = true;
  for (std::size_t i = 0; i < cut.coef.size(); ++i) {
    const double c = cut.coef[i];
    if (c == 0.0) continue;
    if (!first) os << (c < 0 ? " - " : " + ");
    else if (c < 0) os << "-";
    os << std::abs(c) << "*z" << (i + 1);
    first = false;
  }
  if (first) os << "0";
  return os.str();
}

}  // namespace drsub::cuts
