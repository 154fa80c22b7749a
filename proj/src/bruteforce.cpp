#include "drsub/bruteforce.hpp"

#include <algorithm>
#include <cmath>

#include "drsub/hull.hpp"
#include "drsub/normalize.hpp"

namespace drsub::bruteforce {

ExtremeMin min_over_extreme_points(const ForestInstance& inst, const ValueOracle& oracle,
                                   const Budget& budget) {
  const int n = inst.size();
  if (n >= 63 || (std::uint64_t{1} << n) > budget.subsets)
    throw Error(ErrorCode::BudgetExceeded, "2^" + std::to_string(n) + " subsets exceed the budget");
  inst.require_normalized("min_over_extreme_points");
  ExtremeMin best;
  bool first = true;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    VertexSubset S = VertexSubset::from_mask(n, mask);
    Point p = hull::extreme_point(inst, S);
    const double v = oracle(p);
    if (first || v < best.value) {
      best = {std::move(S), std::move(p), v};
      first = false;
    }
  }
  return best;
}

LatticeMin min_over_lattice(const ForestInstance& inst, const ValueOracle& oracle, double grid_step,
                            const Budget& budget) {
  if (budget.lattice_points == 0) throw Error(ErrorCode::BudgetExceeded, "lattice budget is zero");
  if (!(grid_step > 0.0)) throw Error(ErrorCode::InvalidArgument, "grid step must be positive");
  if (inst.has_infinite_bounds())
    throw Error(ErrorCode::AssumptionViolated, "lattice enumeration needs finite bounds");
  const int n = inst.size();
  std::vector<std::vector<double>> values(n + 1);
  double product = 1.0;
  for (Vertex v = 1; v <= n; ++v) {
    const double u = inst.upper(v);
    auto& vals = values[v];
    if (inst.is_integer(v)) {
      for (long long k = 0; k <= std::llround(u); ++k) vals.push_back(static_cast<double>(k));
    } else {
      for (long long k = 0; k * grid_step < u - 1e-12; ++k) vals.push_back(k * grid_step);
      vals.push_back(u);
    }
    product *= static_cast<double>(vals.size());
    if (product > static_cast<double>(budget.lattice_points))
      throw Error(ErrorCode::BudgetExceeded, "lattice has more points than the budget");
  }

  LatticeMin best;
  bool first = true;
  Point z(n, 0.0);
  const auto& order = inst.preorder();
  auto rec = [&](auto&& self, std::size_t idx) -> void {
    if (idx == order.size()) {
      const double f = oracle(z);
      ++best.evaluated;
      if (first || f < best.value) {
        best.value = f;
        best.z = z;
        first = false;
      }
      return;
    }
    const Vertex v = order[idx];
    const Vertex p = inst.parent(v);
    const double lo = p == kNone ? 0.0 : z[p - 1];
    for (double x : values[v]) {
      if (x < lo - 1e-12) continue;
      z[v - 1] = x;
      self(self, idx + 1);
    }
  };
  rec(rec, 0);
  return best;
}

PermutationMax max_violation_over_permutations(const ForestInstance& inst,
                                               const ValueOracle& oracle, const Point& z, double w,
                                               const Budget& budget) {
  PermutationMax best;
  bool first = true;
  perm::for_each_valid_permutation(inst, [&](const perm::Permutation& delta) {
    if (++best.enumerated > budget.permutations)
      throw Error(ErrorCode::BudgetExceeded, "more valid permutations than the budget");
    const auto t = perm::t_vector(inst, delta, z);
    const auto pts = perm::prefix_points(inst, delta);
    double prev = 0.0, lhs = 0.0;
    for (int k = 1; k <= inst.size(); ++k) {
      const double f = oracle(pts[k]);
      lhs += t[k - 1] * (f - prev);
      prev = f;
    }
    const double viol = lhs - w;
    if (first || viol > best.violation) {
      best.perm = delta;
      best.violation = viol;
      first = false;
    }
    return true;
  });
  return best;
}

namespace {

const std::vector<double>& bound_pool() {
  static const std::vector<double> pool = [] {
    std::vector<double> p;
    for (int k = 1; k <= 12; ++k) p.push_back(k);
    for (int k = 0; k <= 12; ++k)
      for (double f : {0.25, 0.5, 0.75}) p.push_back(k + f);
    std::sort(p.begin(), p.end());
    return p;
  }();
  return pool;
}

struct Draft {
  int n = 0;
  std::vector<Vertex> parent;  // 1-based, kNone for roots
  std::vector<double> u;       // 1-based
  std::vector<char> integer;   // 1-based

  ForestInstance build() const {
    std::vector<Arc> arcs;
    for (Vertex v = 1; v <= n; ++v)
      if (parent[v] != kNone) arcs.push_back({parent[v], v});
    std::vector<Vertex> ints;
    for (Vertex v = 1; v <= n; ++v)
      if (integer[v]) ints.push_back(v);
    return ForestInstance::build(n, std::move(arcs), std::vector<double>(u.begin() + 1, u.end()),
                                 std::move(ints));
  }
};

void continuize_below(const ForestInstance& inst, Draft& d, Vertex v) {
  for (Vertex j : inst.descendants(v)) d.integer[j] = 0;
}

// Raise u_psi to its ceiling when no child bound sits below that ceiling.
bool round_up(const ForestInstance& inst, Draft& d, Vertex psi) {
  const double c = int_ceil(d.u[psi]);
  for (Vertex ch : inst.children(psi))
    if (d.u[ch] < c) return false;
  d.u[psi] = c;
  return true;
}

Draft draw(std::mt19937_64& rng, const InstanceOptions& opts) {
  const int n = opts.vertices;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<Vertex> label(n);
  for (int i = 0; i < n; ++i) label[i] = i + 1;
  std::shuffle(label.begin(), label.end(), rng);

  Draft d;
  d.n = n;
  d.parent.assign(n + 1, kNone);
  d.u.assign(n + 1, 0.0);
  d.integer.assign(n + 1, 0);
  const auto& pool = bound_pool();
  for (int i = 0; i < n; ++i) {
    const Vertex v = label[i];
    if (i > 0 && unit(rng) >= opts.root_probability)
      d.parent[v] = label[std::uniform_int_distribution<int>(0, i - 1)(rng)];
    const Vertex p = d.parent[v];
    if (p == kNone) {
      d.u[v] = pool[std::uniform_int_distribution<std::size_t>(0, pool.size() - 1)(rng)];
    } else if (!is_integral(d.u[p]) && unit(rng) < opts.psi_child_probability) {
      d.u[v] = int_ceil(d.u[p]);
      d.integer[v] = 1;
      continue;
    } else if (unit(rng) < opts.equal_bound_probability) {
      d.u[v] = d.u[p];
    } else {
      auto first = std::lower_bound(pool.begin(), pool.end(), d.u[p]);
      const auto span = static_cast<std::size_t>(pool.end() - first);
      d.u[v] = span ? *(first + std::uniform_int_distribution<std::size_t>(0, span - 1)(rng)) : d.u[p];
    }
    d.integer[v] = is_integral(d.u[v]) && unit(rng) < opts.integer_probability;
  }
  return d;
}

void repair(Draft& d, bool assumption2) {
  for (int round = 0; round < 4 * d.n + 4; ++round) {
    const ForestInstance inst = d.build();
    if (auto a1 = check_assumption1(inst); !a1.ok) {
      const bool path = a1.witness.size() >= 2 && inst.in_psi(a1.witness.front()) &&
                        inst.in_psi(a1.witness.back());
      if (!path) {
        const Vertex psi = a1.witness[0], ch = a1.witness[1];
        if (is_integral(d.u[ch])) d.integer[ch] = 1;
        else if (!round_up(inst, d, psi)) continuize_below(inst, d, ch);
      } else {
        const Vertex lower = a1.witness.back();
        if (!round_up(inst, d, lower)) continuize_below(inst, d, lower);
      }
      continue;
    }
    if (assumption2) {
      if (auto a2 = check_assumption2(inst); !a2.ok) {
        const Vertex psi = a2.witness[0];
        const double c = int_ceil(d.u[psi]);
        for (Vertex j : inst.descendants(psi))
          if (j != psi) d.u[j] = c;
        continue;
      }
    }
    return;
  }
  for (Vertex v = 1; v <= d.n; ++v) d.integer[v] = 0;
}

}  // namespace

ForestInstance random_instance(std::mt19937_64& rng, const InstanceOptions& opts) {
  if (opts.vertices < 1) throw Error(ErrorCode::InvalidArgument, "need at least one vertex");
  for (int attempt = 0; attempt < 1000; ++attempt) {
    Draft d = draw(rng, opts);
    repair(d, opts.enforce_assumption2);
    ForestInstance inst = d.build();
    if (opts.normalize) inst = normalize_property1(inst).instance;
    if (opts.max_vertices == 0 || inst.size() <= opts.max_vertices) return inst;
  }
  throw Error(ErrorCode::InvalidArgument, "could not draw an instance within the vertex cap");
}

QuadraticSpec random_dr_quadratic(std::mt19937_64& rng, int n, double scale, double linear) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  QuadraticSpec q{Eigen::MatrixXd::Zero(n, n), Eigen::VectorXd::Zero(n)};
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      if (unit(rng) < 0.5) continue;
      const double v = -scale * unit(rng);
      q.Q(i, j) = v;
      q.Q(j, i) = v;
    }
    q.c(i) = linear * (2.0 * unit(rng) - 1.0);
  }
  return q;
}

std::vector<double> random_objective(std::mt19937_64& rng, int n, double range) {
  std::uniform_real_distribution<double> dist(-range, range);
  std::vector<double> a(n);
  for (double& x : a) x = dist(rng);
  return a;
}

void steer_objective(const ForestInstance& inst, std::vector<double>& a, Vertex psi,
                     linopt::Case target, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto between = [&](double lo, double hi) { return lo + (hi - lo) * unit(rng); };
  const double u = inst.upper(psi);
  const double theta = u - strict_floor(u);
  double a_psi = 0.0, s_target = 0.0;
  switch (target) {
    case linopt::Case::C1:
      a_psi = between(-3.0, 3.0);
      s_target = std::max(0.0, -a_psi) + between(0.1, 3.0);
      break;
    case linopt::Case::C2:
      a_psi = -between(1.0, 5.0);
      s_target = -a_psi * (theta + between(0.1, 0.9) * (1.0 - theta));
      break;
    case linopt::Case::C3:
      a_psi = -between(1.0, 5.0);
      s_target = -theta * a_psi * between(0.1, 0.9);
      break;
    case linopt::Case::C4:
      a_psi = between(-3.0, 3.0);
      s_target = -between(0.1, 3.0);
      break;
  }
  a[psi - 1] = a_psi;
  // The child's s-value moves one-for-one with its own coefficient, and the
  // selections deeper down do not depend on it.
  const double s_now = linopt::solve_subtree_psi(inst, a, psi).s_child;
  a[inst.psi_child(psi) - 1] += s_target - s_now;
}

Point random_hull_point(const ForestInstance& inst, std::mt19937_64& rng, int atoms) {
  const int n = inst.size();
  std::exponential_distribution<double> expo(1.0);
  std::bernoulli_distribution coin(0.5);
  std::vector<double> weights(atoms);
  double total = 0.0;
  for (double& x : weights) total += (x = expo(rng));
  Point z(n, 0.0);
  for (int k = 0; k < atoms; ++k) {
    VertexSubset S(n);
    for (Vertex v = 1; v <= n; ++v)
      if (coin(rng)) S.insert(v);
    const Point p = hull::extreme_point(inst, S);
    for (int i = 0; i < n; ++i) z[i] += weights[k] / total * p[i];
  }
  return z;
}

}  // namespace drsub::bruteforce
