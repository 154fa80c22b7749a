#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "drsub/error.hpp"
#include "drsub/numeric.hpp"

namespace drsub {

// Vertices are numbered 1..n. Vertex 0 is the sentinel "no vertex" with
// u_0 = z_0 = 0; it doubles as the parent of every root.
using Vertex = int;
inline constexpr Vertex kNone = 0;

// Points are plain vectors of length n; coordinate of vertex i sits at [i - 1].
using Point = std::vector<double>;

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

struct Arc {
  Vertex from = kNone;
  Vertex to = kNone;
  friend bool operator==(const Arc&, const Arc&) = default;
};

class VertexSubset {
 public:
  VertexSubset() = default;
  explicit VertexSubset(int n) : n_(n), words_((n + 64) / 64, 0) {}
  VertexSubset(int n, std::initializer_list<Vertex> members);
  static VertexSubset from_mask(int n, std::uint64_t mask);
  static VertexSubset full(int n);

  int universe() const { return n_; }
  bool contains(Vertex v) const {
    return v > 0 && v <= n_ && ((words_[v >> 6] >> (v & 63)) & 1u);
  }
  void insert(Vertex v) { words_[v >> 6] |= std::uint64_t{1} << (v & 63); }
  void erase(Vertex v) { words_[v >> 6] &= ~(std::uint64_t{1} << (v & 63)); }
  int count() const;
  bool empty() const { return count() == 0; }
  std::vector<Vertex> members() const;
  std::string to_string() const;

  friend bool operator==(const VertexSubset&, const VertexSubset&) = default;

 private:
  int n_ = 0;
  std::vector<std::uint64_t> words_;
};

struct BuildOptions {
  // Reject bounds that violate monotonicity only beyond this slack.
  double monotone_tol = kIntegralityTol;
};

class ForestInstance {
 public:
  static ForestInstance build(int n, std::vector<Arc> arcs, std::vector<double> upper,
                              std::vector<Vertex> integer_vertices, const BuildOptions& = {});

  int size() const { return n_; }
  std::span<const Arc> arcs() const { return arcs_; }
  // Index into arcs() of the arc entering v, or -1 for roots.
  int parent_arc(Vertex v) const { return parent_arc_[v]; }

  double upper(Vertex v) const { return upper_[v]; }
  const std::vector<double>& upper_bounds() const { return upper_; }  // index 0 is the sentinel
  Point upper_point() const { return Point(upper_.begin() + 1, upper_.end()); }
  bool is_integer(Vertex v) const { return integer_[v] != 0; }
  std::vector<Vertex> integer_vertices() const;
  bool has_infinite_bounds() const { return has_infinite_; }

  Vertex parent(Vertex v) const { return parent_[v]; }
  std::span<const Vertex> children(Vertex v) const { return children_[v]; }
  int depth(Vertex v) const { return depth_[v]; }
  Vertex root_of(Vertex v) const { return root_of_[v]; }
  const std::vector<Vertex>& roots() const { return roots_; }
  // Parents before children, components in root order.
  const std::vector<Vertex>& preorder() const { return preorder_; }

  // j in R+(i), i.e. i is an ascendant of j (reflexive).
  bool reaches(Vertex i, Vertex j) const {
    return i != kNone && j != kNone && tin_[i] <= tin_[j] && tout_[j] <= tout_[i];
  }
  std::vector<Vertex> descendants(Vertex i) const;  // R+(i), preorder
  std::vector<Vertex> ascendants(Vertex i) const;   // R-(i), from i up to the root

  const std::vector<Vertex>& psi() const { return psi_; }
  bool in_psi(Vertex v) const { return in_psi_[v] != 0; }
  // The unique child of psi when it has exactly one child, otherwise kNone.
  Vertex psi_child(Vertex psi) const;
  // floor(u) with the strict convention, for psi vertices.
  double psi_floor(Vertex psi) const { return strict_floor(upper_[psi]); }

  bool assumption1() const { return assumption1_; }
  bool property1() const { return property1_; }
  bool assumption2() const { return assumption2_; }
  // Throws AssumptionViolated unless bounds are finite, Assumption 1 and Property 1 hold.
  void require_normalized(const char* where) const;

 private:
  int n_ = 0;
  std::vector<Arc> arcs_;
  std::vector<double> upper_;
  std::vector<char> integer_;
  std::vector<Vertex> parent_;
  std::vector<int> parent_arc_;
  std::vector<std::vector<Vertex>> children_;
  std::vector<int> depth_;
  std::vector<Vertex> root_of_;
  std::vector<Vertex> roots_;
  std::vector<Vertex> preorder_;
  std::vector<int> tin_, tout_;
  std::vector<Vertex> psi_;
  std::vector<char> in_psi_;
  bool has_infinite_ = false;
  bool assumption1_ = true;
  bool property1_ = true;
  bool assumption2_ = true;

  void analyse();
};

struct ReachSets {
  std::vector<std::vector<Vertex>> descendants;  // R+(i), index 0 unused
  std::vector<std::vector<Vertex>> ascendants;   // R-(i)
  std::vector<int> depth;
  std::vector<Vertex> parent;  // kNone for roots
  std::vector<std::vector<Vertex>> children;
};

ReachSets reach_sets(const ForestInstance& inst);
std::vector<Vertex> psi_set(const ForestInstance& inst);

struct AssumptionCheck {
  bool ok = true;
  // Violating path (Assumption 1a), psi and offending child (1b), or psi and
  // offending descendant (Assumption 2 and Property 1).
  std::vector<Vertex> witness;
  std::string message;
};

AssumptionCheck check_assumption1(const ForestInstance& inst);
AssumptionCheck check_assumption2(const ForestInstance& inst);
AssumptionCheck check_property1(const ForestInstance& inst);

struct FinitizeResult {
  ForestInstance instance;
  // Roots (or their subtrees) whose bound fell back to the default.
  std::vector<Vertex> defaulted;
};

// 0 <= z <= u, z_i <= z_j on arcs and, optionally, integrality on N.
bool in_feasible_set(const ForestInstance& inst, const Point& z, bool check_integrality,
                     double tol = kFeasibilityTol);

FinitizeResult finitize_bounds(const ForestInstance& inst, double root_default = 1.0);

}  // namespace drsub
