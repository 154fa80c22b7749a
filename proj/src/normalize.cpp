#include "drsub/normalize.hpp"

#include <algorithm>

namespace drsub {

NormalizedInstance normalize_property1(const ForestInstance& inst) {
  if (auto a1 = check_assumption1(inst); !a1.ok)
    throw Error(ErrorCode::Assumption1Violated, a1.message);

  const int n = inst.size();
  NormalizedInstance out{inst, {}, {}, {}, n};
  out.original_of.resize(n + 1);
  for (Vertex v = 0; v <= n; ++v) out.original_of[v] = v;

  std::vector<Vertex> needs;
  for (Vertex psi : inst.psi()) {
    Vertex c = inst.psi_child(psi);
    if (c == kNone || !inst.is_integer(c) || !nearly_equal(inst.upper(c), int_ceil(inst.upper(psi))))
      needs.push_back(psi);
  }
  if (needs.empty()) return out;

  std::vector<Arc> arcs(inst.arcs().begin(), inst.arcs().end());
  std::vector<double> u(inst.upper_bounds().begin() + 1, inst.upper_bounds().end());
  std::vector<Vertex> ints = inst.integer_vertices();
  std::vector<Vertex> rho_of(n + 1, kNone);
  Vertex next = n;
  for (Vertex psi : needs) {
    const Vertex rho = ++next;
    rho_of[psi] = rho;
    u.push_back(int_ceil(inst.upper(psi)));
    ints.push_back(rho);
    out.inserted.push_back({psi, rho});
    out.original_of.push_back(kNone);
  }
  for (Arc& a : arcs)
    if (rho_of[a.from] != kNone) a.from = rho_of[a.from];
  for (auto [psi, rho] : out.inserted) arcs.push_back({psi, rho});

  out.instance = ForestInstance::build(next, std::move(arcs), std::move(u), std::move(ints));
  return out;
}

NormalizedInstance normalize_property1(const ForestInstance& inst, const ValueOracle& oracle) {
  NormalizedInstance out = normalize_property1(inst);
  if (out.identity()) {
    out.oracle = oracle;
    return out;
  }
  const int n = out.original_size;
  out.oracle = ValueOracle(
      [oracle, n](std::span<const double> x) { return oracle.raw(x.subspan(0, n)); },
      out.instance.size());
  return out;
}

Point map_solution_back(const Point& x, const NormalizedInstance& norm) {
  if (!in_feasible_set(norm.instance, x, true))
    throw Error(ErrorCode::InfeasibleInput, "point is not feasible in the extended instance");
  return Point(x.begin(), x.begin() + norm.original_size);
}

Point lift_solution(const Point& z, const NormalizedInstance& norm, const ForestInstance& original) {
  if (!in_feasible_set(original, z, true))
    throw Error(ErrorCode::InfeasibleInput, "point is not feasible in the original instance");
  Point x = z;
  for (auto [psi, rho] : norm.inserted) {
    (void)rho;
    x.push_back(int_ceil(z[psi - 1]));
  }
  return x;
}

Point lift_hull_point(const Point& z, const NormalizedInstance& norm) {
  if (static_cast<int>(z.size()) != norm.original_size)
    throw Error(ErrorCode::InvalidArgument, "point has the wrong dimension");
  const ForestInstance& inst = norm.instance;
  Point x = z;
  x.resize(inst.size(), 0.0);
  for (auto [psi, rho] : norm.inserted) {
    (void)psi;
    double v = inst.upper(rho);
    for (Vertex c : inst.children(rho)) v = std::min(v, z[c - 1]);
    x[rho - 1] = v;
  }
  return x;
}

}  // namespace drsub
