#pragma once

#include <array>
#include <functional>
#include <random>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "drsub/forest.hpp"

namespace drsub::perm {

// An ordering delta(1), ..., delta(n) of the vertices. Positions are 1-based to
// line up with t_1..t_n and the prefix points P(delta, k).
class Permutation {
 public:
  Permutation() = default;
  explicit Permutation(std::vector<Vertex> order);

  int size() const { return static_cast<int>(order_.size()); }
  Vertex at(int k) const { return order_[k - 1]; }
  int position(Vertex v) const { return pos_[v]; }
  const std::vector<Vertex>& order() const { return order_; }
  std::string to_string() const;

  friend bool operator==(const Permutation& a, const Permutation& b) { return a.order_ == b.order_; }

 private:
  std::vector<Vertex> order_;
  std::vector<int> pos_;
};

struct Validity {
  bool valid = true;
  std::vector<int> violated;  // subset of {1, 2, 3}
};

Validity is_valid_permutation(const ForestInstance& inst, const Permutation& delta);

// Vertices that may be appended to the prefix without losing validity.
std::vector<Vertex> valid_candidates(const ForestInstance& inst, std::span<const Vertex> prefix);

double eta(const ForestInstance& inst, Vertex psi, const Point& z);

// t_k for k = 1..prefix.size() (direct formula).
double t_value(const ForestInstance& inst, std::span<const Vertex> prefix, int k, const Point& z);
// (t_1, ..., t_n), direct formula.
std::vector<double> t_vector(const ForestInstance& inst, const Permutation& delta, const Point& z);

// Row k of T^delta has at most three nonzeros.
struct SparseRow {
  int nnz = 0;
  std::array<std::pair<Vertex, double>, 3> entries{};

  void add(Vertex v, double c) { entries[nnz++] = {v, c}; }
  double dot(const Point& z) const {
    double s = 0.0;
    for (int e = 0; e < nnz; ++e) s += entries[e].second * z[entries[e].first - 1];
    return s;
  }
};

std::vector<SparseRow> t_rows(const ForestInstance& inst, const Permutation& delta);
Eigen::MatrixXd t_matrix(const ForestInstance& inst, const Permutation& delta);
Eigen::MatrixXd d_matrix(const ForestInstance& inst, const Permutation& delta);
// P(delta, 0), ..., P(delta, n).
std::vector<Point> prefix_points(const ForestInstance& inst, const Permutation& delta);

struct FinderOptions {
  bool check_hull = true;
  double hull_tol = kFeasibilityTol;
};

// Greedy ordering: repeatedly append the candidate with the largest t-value,
// ties to the smallest vertex id.
Permutation permutation_finder(const ForestInstance& inst, const Point& z,
                               const FinderOptions& = {});

struct Decomposition {
  Permutation perm;
  std::vector<double> t;       // t_1..t_n
  std::vector<double> lambda;  // lambda_0..lambda_n, weights of P(delta, k)
  std::vector<Point> points;   // P(delta, 0..n)
  double residual = 0.0;       // max coordinate error of the reconstruction
};

Decomposition decompose(const ForestInstance& inst, const Point& z, const FinderOptions& = {});

inline constexpr int kMaxEnumerationVertices = 8;

// Calls fn on every valid permutation; fn returns false to stop early.
void for_each_valid_permutation(const ForestInstance& inst,
                                const std::function<bool(const Permutation&)>& fn,
                                int max_vertices = kMaxEnumerationVertices);
std::vector<Permutation> enumerate_valid_permutations(const ForestInstance& inst,
                                                      int max_vertices = kMaxEnumerationVertices);

Permutation random_valid_permutation(const ForestInstance& inst, std::mt19937_64& rng);

}  // namespace drsub::perm
