#include "drsub/forest.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <sstream>

namespace drsub {

VertexSubset::VertexSubset(int n, std::initializer_list<Vertex> members) : VertexSubset(n) {
  for (Vertex v : members) {
    if (v < 1 || v > n) throw Error(ErrorCode::InvalidArgument, "subset member out of range");
    insert(v);
  }
}

VertexSubset VertexSubset::from_mask(int n, std::uint64_t mask) {
  VertexSubset s(n);
  for (Vertex v = 1; v <= n && v <= 64; ++v)
    if ((mask >> (v - 1)) & 1u) s.insert(v);
  return s;
}

VertexSubset VertexSubset::full(int n) {
  VertexSubset s(n);
  for (Vertex v = 1; v <= n; ++v) s.insert(v);
  return s;
}

int VertexSubset::count() const {
  int c = 0;
  for (auto w : words_) c += std::popcount(w);
  return c;
}

std::vector<Vertex> VertexSubset::members() const {
  std::vector<Vertex> out;
  for (Vertex v = 1; v <= n_; ++v)
    if (contains(v)) out.push_back(v);
  return out;
}

std::string VertexSubset::to_string() const {
  std::ostringstream os;
  os << '{';
  bool first = true;
  for (Vertex v : members()) {
    os << (first ? "" : ",") << v;
    first = false;
  }
  os << '}';
  return os.str();
}

ForestInstance ForestInstance::build(int n, std::vector<Arc> arcs, std::vector<double> upper,
                                     std::vector<Vertex> integer_vertices,
                                     const BuildOptions& opts) {
  if (n <= 0) throw Error(ErrorCode::InvalidArgument, "vertex count must be positive");
  if (static_cast<int>(upper.size()) != n)
    throw Error(ErrorCode::InvalidArgument, "expected " + std::to_string(n) + " upper bounds");

  ForestInstance f;
  f.n_ = n;
  f.integer_.assign(n + 1, 0);
  for (Vertex v : integer_vertices) {
    if (v < 1 || v > n) throw Error(ErrorCode::InvalidArgument, "integer vertex out of range");
    f.integer_[v] = 1;
  }

  f.upper_.assign(n + 1, 0.0);
  for (Vertex v = 1; v <= n; ++v) {
    double u = upper[v - 1];
    if (std::isnan(u) || u <= 0.0)
      throw Error(ErrorCode::NonPositiveBound, "u_" + std::to_string(v) + " must be positive");
    if (std::isinf(u)) {
      f.has_infinite_ = true;
    } else if (f.integer_[v]) {
      u = round_down_bound(u);
      if (u <= 0.0)
        throw Error(ErrorCode::NonPositiveBound,
                    "u_" + std::to_string(v) + " rounds down to zero on an integer vertex");
    } else if (is_integral(u)) {
      u = std::round(u);
    }
    f.upper_[v] = u;
  }

  f.parent_.assign(n + 1, kNone);
  f.parent_arc_.assign(n + 1, -1);
  f.children_.assign(n + 1, {});
  for (std::size_t k = 0; k < arcs.size(); ++k) {
    const Arc& a = arcs[k];
    if (a.from < 1 || a.from > n || a.to < 1 || a.to > n)
      throw Error(ErrorCode::InvalidArgument, "arc endpoint out of range");
    if (a.from == a.to) throw Error(ErrorCode::NotAForest, "self loop at " + std::to_string(a.from));
    if (f.parent_[a.to] != kNone)
      throw Error(ErrorCode::NotAForest, "vertex " + std::to_string(a.to) + " has two parents");
    f.parent_[a.to] = a.from;
    f.parent_arc_[a.to] = static_cast<int>(k);
    f.children_[a.from].push_back(a.to);
  }
  for (auto& ch : f.children_) std::sort(ch.begin(), ch.end());
  f.arcs_ = std::move(arcs);

  // Traverse from roots; anything unreached sits on a cycle.
  f.depth_.assign(n + 1, 0);
  f.root_of_.assign(n + 1, kNone);
  f.tin_.assign(n + 1, 0);
  f.tout_.assign(n + 1, 0);
  int clock = 0;
  std::vector<std::pair<Vertex, std::size_t>> stack;
  for (Vertex r = 1; r <= n; ++r) {
    if (f.parent_[r] != kNone) continue;
    f.roots_.push_back(r);
    stack.push_back({r, 0});
    f.root_of_[r] = r;
    f.tin_[r] = clock++;
    f.preorder_.push_back(r);
    while (!stack.empty()) {
      auto& [v, next] = stack.back();
      if (next < f.children_[v].size()) {
        Vertex c = f.children_[v][next++];
        f.depth_[c] = f.depth_[v] + 1;
        f.root_of_[c] = r;
        f.tin_[c] = clock++;
        f.preorder_.push_back(c);
        stack.push_back({c, 0});
      } else {
        f.tout_[v] = clock++;
        stack.pop_back();
      }
    }
  }
  if (static_cast<int>(f.preorder_.size()) != n)
    throw Error(ErrorCode::NotAForest, "arcs contain a directed cycle");

  for (const Arc& a : f.arcs_) {
    if (f.upper_[a.from] > f.upper_[a.to] + opts.monotone_tol)
      throw Error(ErrorCode::NonMonotoneBounds, "u_" + std::to_string(a.from) + " > u_" +
                                                    std::to_string(a.to) + " on an arc");
  }

  f.analyse();
  return f;
}

void ForestInstance::analyse() {
  // A vertex is in Psi when its bound is finite and fractional and some
  // descendant is integer. Children come after parents in preorder, so a
  // reverse sweep propagates "has integer descendant" upward.
  std::vector<char> has_int(n_ + 1, 0);
  for (auto it = preorder_.rbegin(); it != preorder_.rend(); ++it) {
    Vertex v = *it;
    if (integer_[v]) has_int[v] = 1;
    if (has_int[v] && parent_[v] != kNone) has_int[parent_[v]] = 1;
  }
  in_psi_.assign(n_ + 1, 0);
  psi_.clear();
  for (Vertex v = 1; v <= n_; ++v) {
    if (std::isfinite(upper_[v]) && !is_integral(upper_[v]) && has_int[v]) {
      in_psi_[v] = 1;
      psi_.push_back(v);
    }
  }
  assumption1_ = check_assumption1(*this).ok;
  property1_ = check_property1(*this).ok;
  assumption2_ = check_assumption2(*this).ok;
}

std::vector<Vertex> ForestInstance::integer_vertices() const {
  std::vector<Vertex> out;
  for (Vertex v = 1; v <= n_; ++v)
    if (integer_[v]) out.push_back(v);
  return out;
}

Vertex ForestInstance::psi_child(Vertex psi) const {
  return children_[psi].size() == 1 ? children_[psi][0] : kNone;
}

void ForestInstance::require_normalized(const char* where) const {
  if (has_infinite_)
    throw Error(ErrorCode::AssumptionViolated, std::string(where) + " requires finite bounds");
  if (!assumption1_)
    throw Error(ErrorCode::AssumptionViolated,
                std::string(where) + ": " + check_assumption1(*this).message);
  if (!property1_)
    throw Error(ErrorCode::AssumptionViolated,
                std::string(where) + ": " + check_property1(*this).message);
}

std::vector<Vertex> ForestInstance::descendants(Vertex i) const {
  std::vector<Vertex> out;
  std::vector<Vertex> stack{i};
  while (!stack.empty()) {
    Vertex v = stack.back();
    stack.pop_back();
    out.push_back(v);
    for (auto it = children_[v].rbegin(); it != children_[v].rend(); ++it) stack.push_back(*it);
  }
  return out;
}

std::vector<Vertex> ForestInstance::ascendants(Vertex i) const {
  std::vector<Vertex> out;
  for (Vertex v = i; v != kNone; v = parent_[v]) out.push_back(v);
  return out;
}

ReachSets reach_sets(const ForestInstance& inst) {
  const int n = inst.size();
  ReachSets rs;
  rs.descendants.resize(n + 1);
  rs.ascendants.resize(n + 1);
  rs.depth.assign(n + 1, 0);
  rs.parent.assign(n + 1, kNone);
  rs.children.resize(n + 1);
  for (Vertex v = 1; v <= n; ++v) {
    rs.descendants[v] = inst.descendants(v);
    std::sort(rs.descendants[v].begin(), rs.descendants[v].end());
    rs.ascendants[v] = inst.ascendants(v);
    std::sort(rs.ascendants[v].begin(), rs.ascendants[v].end());
    rs.depth[v] = inst.depth(v);
    rs.parent[v] = inst.parent(v);
    auto ch = inst.children(v);
    rs.children[v].assign(ch.begin(), ch.end());
  }
  return rs;
}

std::vector<Vertex> psi_set(const ForestInstance& inst) { return inst.psi(); }

AssumptionCheck check_assumption1(const ForestInstance& inst) {
  for (Vertex psi : inst.psi()) {
    for (Vertex a = inst.parent(psi); a != kNone; a = inst.parent(a)) {
      if (!inst.in_psi(a)) continue;
      AssumptionCheck r{false, {}, {}};
      for (Vertex v = psi; v != a; v = inst.parent(v)) r.witness.push_back(v);
      r.witness.push_back(a);
      std::reverse(r.witness.begin(), r.witness.end());
      r.message = "path from " + std::to_string(a) + " to " + std::to_string(psi) +
                  " contains two fractional-bounded vertices with integer descendants";
      return r;
    }
    for (Vertex c : inst.children(psi)) {
      if (!inst.is_integer(c))
        return {false, {psi, c},
                "child " + std::to_string(c) + " of " + std::to_string(psi) + " is not integer"};
    }
  }
  return {};
}

AssumptionCheck check_assumption2(const ForestInstance& inst) {
  for (Vertex psi : inst.psi()) {
    const double u = inst.upper(psi);
    if (u <= 1.0) continue;
    const double target = int_ceil(u);
    for (Vertex j : inst.descendants(psi)) {
      if (j == psi) continue;
      if (!nearly_equal(inst.upper(j), target))
        return {false, {psi, j},
                "u_" + std::to_string(j) + " differs from ceil(u_" + std::to_string(psi) + ")"};
    }
  }
  return {};
}

AssumptionCheck check_property1(const ForestInstance& inst) {
  for (Vertex psi : inst.psi()) {
    auto ch = inst.children(psi);
    if (ch.size() != 1)
      return {false, {psi},
              std::to_string(psi) + " must have exactly one child, has " +
                  std::to_string(ch.size())};
    Vertex c = ch[0];
    if (!inst.is_integer(c) || !nearly_equal(inst.upper(c), int_ceil(inst.upper(psi))))
      return {false, {psi, c},
              "child " + std::to_string(c) + " of " + std::to_string(psi) +
                  " must be integer with bound ceil(u_psi)"};
  }
  return {};
}

bool in_feasible_set(const ForestInstance& inst, const Point& z, bool check_integrality,
                     double tol) {
  if (static_cast<int>(z.size()) != inst.size()) return false;
  for (Vertex v = 1; v <= inst.size(); ++v) {
    const double x = z[v - 1];
    if (!std::isfinite(x) || x < -tol || x > inst.upper(v) + tol) return false;
    if (check_integrality && inst.is_integer(v) && std::abs(x - std::round(x)) > tol) return false;
    if (Vertex p = inst.parent(v); p != kNone && z[p - 1] > x + tol) return false;
  }
  return true;
}

FinitizeResult finitize_bounds(const ForestInstance& inst, double root_default) {
  if (!inst.has_infinite_bounds()) return {inst, {}};
  const int n = inst.size();
  std::vector<double> u(inst.upper_bounds().begin() + 1, inst.upper_bounds().end());
  std::vector<Vertex> defaulted;
  for (Vertex i : inst.preorder()) {
    if (!std::isinf(u[i - 1])) continue;
    Vertex p = inst.parent(i);
    double value;
    if (p == kNone) {
      value = root_default;
      defaulted.push_back(i);
    } else {
      // Parents precede children in preorder, so u_p is already finite.
      value = int_ceil(u[p - 1]);
    }
    for (Vertex j : inst.descendants(i)) u[j - 1] = value;
  }
  std::vector<Arc> arcs(inst.arcs().begin(), inst.arcs().end());
  return {ForestInstance::build(n, std::move(arcs), std::move(u), inst.integer_vertices()),
          std::move(defaulted)};
}

}  // namespace drsub
