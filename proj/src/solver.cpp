#include "drsub/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <unordered_map>

#include "drsub/bruteforce.hpp"
#include "drsub/hull.hpp"
#include "drsub/normalize.hpp"

namespace drsub::solver {

std::string_view to_string(Status s) {
  return s == Status::Optimal ? "Optimal" : "BoundOnly";
}

namespace {

// Oracle evaluations keyed by the point rounded to 12 decimals.
struct Memo {
  ValueOracle inner;
  std::unordered_map<std::string, double> values;

  double operator()(std::span<const double> z) {
    Point p(z.begin(), z.end());
    auto key = hull::canonical_key(p);
    if (auto it = values.find(key); it != values.end()) return it->second;
    const double v = inner(p);
    values.emplace(std::move(key), v);
    return v;
  }
};

bool same_cut(const cuts::DRCut& a, const cuts::DRCut& b) {
  for (std::size_t i = 0; i < a.coef.size(); ++i)
    if (std::abs(a.coef[i] - b.coef[i]) > 1e-10) return false;
  return true;
}

struct CoreResult {
  Point x;  // extended coordinates
  double value = 0.0;
  double bound = 0.0;
  int iterations = 0;
  int recovery_prefix = 0;
  perm::Permutation recovery_perm;
  std::vector<double> history;
  std::vector<cuts::DRCut> pool;
  int oracle_calls = 0;
};

// Cutting-plane loop on an instance that already satisfies the assumptions and
// Property 1. The oracle vanishes at the origin.
CoreResult cutting_plane(const ForestInstance& inst, const ValueOracle& oracle, const Options& opts) {
  const int n = inst.size();
  auto memo = std::make_shared<Memo>(Memo{oracle, {}});
  const ValueOracle f([memo](std::span<const double> z) { return (*memo)(z); }, n);

  std::vector<LinearCut> structural;
  for (auto& row : hull::cz_rows(inst))
    if (row.tag == CutTag::Monotone || row.tag == CutTag::MIR) structural.push_back(std::move(row));

  const long long cap =
      opts.max_iterations > 0 ? opts.max_iterations : 10LL << std::min(n, 12);

  CoreResult out;
  const Point seed = opts.seed == SeedPoint::Zero ? Point(n, 0.0) : inst.upper_point();
  out.pool.push_back(cuts::dr_cut(inst, f, perm::permutation_finder(inst, seed)));

  lp::DenseLP master;
  master.c = Eigen::VectorXd::Zero(n + 1);
  master.c(n) = 1.0;
  master.lower = Eigen::VectorXd::Zero(n + 1);
  master.upper = Eigen::VectorXd::Zero(n + 1);
  for (Vertex v = 1; v <= n; ++v) master.upper(v - 1) = inst.upper(v);
  master.lower(n) = -kInfinity;
  master.upper(n) = kInfinity;

  Point z(n, 0.0);
  double w = 0.0;
  while (true) {
    if (out.iterations >= cap)
      throw Error(ErrorCode::IterationLimit,
                  "no convergence after " + std::to_string(cap) + " master iterations");
    ++out.iterations;

    const int m = static_cast<int>(structural.size() + out.pool.size());
    master.A = Eigen::MatrixXd::Zero(m, n + 1);
    master.b = Eigen::VectorXd::Zero(m);
    int r = 0;
    for (const auto& row : structural) {
      for (int j = 0; j < n; ++j) master.A(r, j) = row.coef[j];
      master.b(r++) = row.rhs;
    }
    for (const auto& cut : out.pool) {
      for (int j = 0; j < n; ++j) master.A(r, j) = cut.coef[j];
      master.A(r++, n) = -1.0;
    }
    const auto res = lp::solve_lp(master, opts.lp);
    if (res.status != lp::Status::Optimal)
      throw Error(ErrorCode::NumericalFailure,
                  "master LP reported " + std::string(lp::to_string(res.status)));
    for (int j = 0; j < n; ++j) z[j] = std::clamp(res.x(j), 0.0, inst.upper(j + 1));
    w = res.x(n);
    out.history.push_back(w);

    auto sep = cuts::separate(inst, f, z, w, {true, 1e-7});
    if (sep.violation <= opts.epsilon) break;
    for (const auto& old : out.pool)
      if (same_cut(old, sep.cut))
        throw Error(ErrorCode::NumericalFailure,
                    "master solution violates a cut already in the pool");
    out.pool.push_back(std::move(sep.cut));
  }
  out.bound = w;

  const auto dec = perm::decompose(inst, z, {true, 1e-7});
  bool first = true;
  for (int k = 0; k <= n; ++k) {
    if (dec.lambda[k] <= 1e-12) continue;
    const double v = f(dec.points[k]);
    if (first || v < out.value) {
      out.value = v;
      out.x = dec.points[k];
      out.recovery_prefix = k;
      first = false;
    }
  }
  out.recovery_perm = dec.perm;
  out.oracle_calls = static_cast<int>(memo->values.size());
  return out;
}

Report solve_exact(const ForestInstance& inst, const ValueOracle& oracle, const Options& opts) {
  const auto norm = normalize_property1(inst, oracle);
  auto core = cutting_plane(norm.instance, norm.oracle, opts);
  Report rep;
  rep.status = Status::Optimal;
  rep.z = map_solution_back(core.x, norm);
  rep.value = core.value + oracle.base_value();
  rep.bound = core.bound + oracle.base_value();
  rep.iterations = core.iterations;
  rep.cuts = static_cast<int>(core.pool.size());
  rep.oracle_calls = core.oracle_calls;
  rep.recovery_prefix = core.recovery_prefix;
  rep.recovery_perm = std::move(core.recovery_perm);
  rep.bound_history = std::move(core.history);
  for (double& h : rep.bound_history) h += oracle.base_value();
  if (opts.record_cuts) rep.cut_pool = std::move(core.pool);
  rep.inserted_vertices = static_cast<int>(norm.inserted.size());
  rep.certified = true;
  return rep;
}

// Rounds bounds up until both assumptions hold. Only bounds grow, so the
// result contains the original feasible set.
ForestInstance relax(const ForestInstance& inst, std::vector<Vertex>& relaxed) {
  std::vector<double> u(inst.upper_bounds().begin() + 1, inst.upper_bounds().end());
  ForestInstance cur = inst;
  while (true) {
    Vertex psi = kNone;
    if (auto a1 = check_assumption1(cur); !a1.ok) {
      const bool path = a1.witness.size() >= 2 && cur.in_psi(a1.witness.front()) &&
                        cur.in_psi(a1.witness.back());
      psi = path ? a1.witness.back() : a1.witness.front();
    } else if (auto a2 = check_assumption2(cur); !a2.ok) {
      psi = a2.witness.front();
    } else {
      return cur;
    }
    const double c = int_ceil(u[psi - 1]);
    for (Vertex j : cur.descendants(psi)) u[j - 1] = std::max(u[j - 1], c);
    relaxed.push_back(psi);
    std::vector<Arc> arcs(cur.arcs().begin(), cur.arcs().end());
    cur = ForestInstance::build(cur.size(), std::move(arcs), u, cur.integer_vertices());
  }
}

Report solve_degraded(const ForestInstance& inst, const ValueOracle& oracle, const Options& opts) {
  std::vector<Vertex> relaxed;
  const ForestInstance rel = relax(inst, relaxed);
  Report rep = solve_exact(rel, oracle, opts);
  rep.status = Status::BoundOnly;
  rep.relaxed = std::move(relaxed);
  rep.bound = rep.value;
  rep.certified = false;

  // Incumbent: the relaxed minimizer clipped into the original bounds, which
  // keeps monotonicity and integrality.
  Point best(inst.size());
  for (Vertex v = 1; v <= inst.size(); ++v) {
    double x = std::min(rep.z[v - 1], inst.upper(v));
    if (inst.is_integer(v)) x = std::floor(x + kIntegralityTol);
    best[v - 1] = x;
  }
  double best_value = oracle.raw(best);

  // Exhaustive search over P(S) when the original instance admits it.
  if (inst.assumption1()) {
    const auto norm = normalize_property1(inst, oracle);
    if (norm.instance.size() <= 20) {
      const auto bf = bruteforce::min_over_extreme_points(norm.instance, norm.oracle);
      if (bf.value + oracle.base_value() < best_value) {
        best_value = bf.value + oracle.base_value();
        best = map_solution_back(bf.z, norm);
      }
    }
  }
  rep.z = std::move(best);
  rep.value = best_value;
  rep.upper_bound = best_value;
  rep.certified = best_value - rep.bound <= 1e-6 * (1.0 + std::abs(rep.bound));
  return rep;
}

}  // namespace

Report minimize(const ForestInstance& inst, const ValueOracle& oracle, const Options& opts) {
  const auto start = std::chrono::steady_clock::now();
  if (!oracle) throw Error(ErrorCode::InvalidArgument, "no objective supplied");
  if (oracle.dimension() != inst.size())
    throw Error(ErrorCode::InvalidArgument, "oracle dimension differs from the instance size");
  if (inst.has_infinite_bounds())
    throw Error(ErrorCode::AssumptionViolated, "upper bounds must be finite");
  if (opts.check_dr) {
    const auto dr = check_dr_submodularity(oracle, inst, opts.dr);
    if (!dr.pass)
      throw Error(ErrorCode::NonDRSubmodularDetected,
                  "DR-submodularity check failed (worst " + std::to_string(dr.worst) + ")");
  }

  Report rep;
  const auto a1 = check_assumption1(inst);
  const auto a2 = a1.ok ? check_assumption2(inst) : AssumptionCheck{};
  if (a1.ok && a2.ok) {
    rep = solve_exact(inst, oracle, opts);
  } else if (opts.allow_degraded) {
    rep = solve_degraded(inst, oracle, opts);
  } else {
    throw Error(ErrorCode::AssumptionViolated, a1.ok ? a2.message : a1.message);
  }
  rep.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

SetMinimum minimize_set_function(const std::function<double(const std::vector<int>&)>& f, int n,
                                 const Options& opts) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "need at least one element");
  std::vector<Vertex> ints(n);
  for (int i = 0; i < n; ++i) ints[i] = i + 1;
  const auto inst = ForestInstance::build(n, {}, std::vector<double>(n, 1.0), ints);
  const ValueOracle oracle(
      [f, n](std::span<const double> z) {
        std::vector<int> S;
        for (int i = 0; i < n; ++i)
          if (z[i] > 0.5) S.push_back(i + 1);
        return f(S);
      },
      n);
  const auto rep = minimize(inst, oracle, opts);
  SetMinimum out;
  for (int i = 0; i < n; ++i)
    if (rep.z[i] > 0.5) out.members.push_back(i + 1);
  out.value = rep.value;
  return out;
}

}  // namespace drsub::solver
