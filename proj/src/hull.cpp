#include "drsub/hull.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace drsub {

std::string_view to_string(CutTag tag) {
  switch (tag) {
    case CutTag::Box: return "box";
    case CutTag::NonNeg: return "nonneg";
    case CutTag::Monotone: return "monotone";
    case CutTag::MIR: return "mir";
    case CutTag::DR: return "dr";
  }
  return "?";
}

double LinearCut::lhs(const Point& z) const {
  double s = 0.0;
  for (std::size_t i = 0; i < coef.size(); ++i) s += coef[i] * z[i];
  return s;
}

std::string format_row(const LinearCut& row) {
  std::ostringstream os;
  os.precision(12);
  bool first = true;
  for (std::size_t i = 0; i < row.coef.size(); ++i) {
    const double c = row.coef[i];
    if (c == 0.0) continue;
    if (!first) os << (c < 0 ? " - " : " + ");
    else if (c < 0) os << "-";
    const double a = std::abs(c);
    if (a != 1.0) os << a << "*";
    os << "z" << (i + 1);
    first = false;
  }
  if (first) os << "0";
  os << " <= " << row.rhs;
  return os.str();
}

namespace hull {

Vertex i_triangle(const ForestInstance& inst, const VertexSubset& S, Vertex i) {
  for (Vertex v = i; v != kNone; v = inst.parent(v))
    if (S.contains(v)) return v;
  return kNone;
}

VertexSubset sigma(const ForestInstance& inst, const VertexSubset& S, Vertex i) {
  VertexSubset out(inst.size());
  std::vector<Vertex> stack{i};
  while (!stack.empty()) {
    Vertex v = stack.back();
    stack.pop_back();
    out.insert(v);
    for (Vertex c : inst.children(v))
      if (!S.contains(c)) stack.push_back(c);
  }
  return out;
}

Point extreme_point(const ForestInstance& inst, const VertexSubset& S) {
  inst.require_normalized("extreme_point");
  const int n = inst.size();
  std::vector<Vertex> tri(n + 1, kNone);
  Point z(n, 0.0);
  for (Vertex v : inst.preorder()) {
    const Vertex t = S.contains(v) ? v : tri[inst.parent(v)];
    tri[v] = t;
    if (t == kNone) continue;
    if (inst.in_psi(t) && !S.contains(inst.psi_child(t)))
      z[v - 1] = inst.psi_floor(t);
    else
      z[v - 1] = inst.upper(t);
  }
  return z;
}

std::vector<LinearCut> mir_rows(const ForestInstance& inst) {
  const int n = inst.size();
  std::vector<LinearCut> rows;
  for (Vertex psi : inst.psi()) {
    const Vertex ch = inst.psi_child(psi);
    if (ch == kNone) continue;
    const double u = inst.upper(psi), fl = strict_floor(u), frac = u - fl;
    LinearCut r{std::vector<double>(n, 0.0), fl * (int_ceil(u) - u) / frac, CutTag::MIR};
    r.coef[psi - 1] = 1.0 / frac;
    r.coef[ch - 1] = -1.0;
    rows.push_back(std::move(r));
  }
  return rows;
}

std::vector<LinearCut> cz_rows(const ForestInstance& inst) {
  const int n = inst.size();
  std::vector<LinearCut> rows;
  for (Vertex v = 1; v <= n; ++v) {
    LinearCut r{std::vector<double>(n, 0.0), inst.upper(v), CutTag::Box};
    r.coef[v - 1] = 1.0;
    rows.push_back(std::move(r));
  }
  for (Vertex v = 1; v <= n; ++v) {
    LinearCut r{std::vector<double>(n, 0.0), 0.0, CutTag::NonNeg};
    r.coef[v - 1] = -1.0;
    rows.push_back(std::move(r));
  }
  for (const Arc& a : inst.arcs()) {
    LinearCut r{std::vector<double>(n, 0.0), 0.0, CutTag::Monotone};
    r.coef[a.from - 1] = 1.0;
    r.coef[a.to - 1] = -1.0;
    rows.push_back(std::move(r));
  }
  for (auto& r : mir_rows(inst)) rows.push_back(std::move(r));
  return rows;
}

Membership is_member_cz(const ForestInstance& inst, const Point& z, double tol) {
  if (static_cast<int>(z.size()) != inst.size())
    throw Error(ErrorCode::InvalidArgument, "point has wrong dimension");
  Membership m;
  for (auto& r : cz_rows(inst)) {
    const double v = -r.slack(z);
    if (v > tol) {
      m.member = false;
      m.max_violation = std::max(m.max_violation, v);
      m.violated.push_back(std::move(r));
    }
  }
  return m;
}

bool is_feasible(const ForestInstance& inst, const Point& z, double tol) {
  if (!is_member_cz(inst, z, tol).member) return false;
  for (Vertex v = 1; v <= inst.size(); ++v)
    if (inst.is_integer(v) && std::abs(z[v - 1] - std::round(z[v - 1])) > tol) return false;
  return true;
}

void for_each_extreme_point(const ForestInstance& inst,
                            const std::function<void(const VertexSubset&, const Point&)>& fn) {
  const int n = inst.size();
  if (n > kMaxEnumerationVertices)
    throw Error(ErrorCode::TooLarge, "extreme point enumeration is limited to 20 vertices");
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    VertexSubset S = VertexSubset::from_mask(n, mask);
    fn(S, extreme_point(inst, S));
  }
}

std::string canonical_key(const Point& z) {
  std::string key;
  char buf[40];
  for (double x : z) {
    double r = std::round(x * 1e12) / 1e12;
    if (r == 0.0) r = 0.0;  // fold -0
    std::snprintf(buf, sizeof buf, "%.12f,", r);
    key += buf;
  }
  return key;
}

}  // namespace hull
}  // namespace drsub
