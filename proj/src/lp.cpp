#include "drsub/lp.hpp"

#include <cmath>
#include <limits>

namespace drsub::lp {

std::string_view to_string(Status s) {
  switch (s) {
    case Status::Optimal: return "optimal";
    case Status::Infeasible: return "infeasible";
    case Status::Unbounded: return "unbounded";
  }
  return "?";
}

namespace {

constexpr double kPivotTol = 1e-11;

// x_j = offset + sign * y[col] - y[col2]   (col2 only for free variables)
struct ColumnMap {
  int col = -1;
  int col2 = -1;
  double sign = 1.0;
  double offset = 0.0;
};

// Revised simplex on  F v = rhs, v >= 0, with an explicit basis inverse that is
// rebuilt from a fresh LU factorization every few pivots.
class Simplex {
 public:
  Simplex(Eigen::MatrixXd F, Eigen::VectorXd rhs, std::vector<int> basis, int first_artificial,
          const Options& opts)
      : F_(std::move(F)), rhs_(std::move(rhs)), basis_(std::move(basis)),
        first_art_(first_artificial), opts_(opts) {
    basic_.assign(F_.cols(), 0);
    for (int j : basis_) basic_[j] = 1;
    refactor();
  }

  enum class Outcome { Optimal, Unbounded, IterationLimit };

  Outcome run(const Eigen::VectorXd& cost, bool allow_artificial) {
    const double scale = std::max(1.0, cost.cwiseAbs().maxCoeff());
    const double dtol = opts_.optimality_tol * scale;
    int degenerate = 0;
    bool bland = false;
    for (;;) {
      if (iterations_ >= opts_.max_iterations) return Outcome::IterationLimit;
      if (since_refactor_ >= opts_.refactor_every) refactor();
      const Eigen::VectorXd cb = basis_cost(cost);
      const Eigen::VectorXd pi = binv_.transpose() * cb;

      int q = -1;
      double best = -dtol;
      const int ncols = allow_artificial ? static_cast<int>(F_.cols()) : first_art_;
      for (int j = 0; j < ncols; ++j) {
        if (basic_[j]) continue;
        const double d = cost(j) - F_.col(j).dot(pi);
        if (d < best) {
          best = d;
          q = j;
          if (bland) break;
        }
      }
      if (q < 0) return Outcome::Optimal;

      const Eigen::VectorXd w = binv_ * F_.col(q);
      int r = -1;
      double ratio = std::numeric_limits<double>::infinity();
      for (int i = 0; i < w.size(); ++i) {
        if (w(i) <= kPivotTol) continue;
        const double t = std::max(0.0, xb_(i)) / w(i);
        if (r < 0 || t < ratio - 1e-12) {
          r = i;
          ratio = t;
        } else if (t <= ratio + 1e-12) {
          // Tie: Bland keeps the smallest basic index, otherwise prefer the larger pivot.
          if (bland ? basis_[i] < basis_[r] : w(i) > w(r)) {
            r = i;
            ratio = std::min(ratio, t);
          }
        }
      }
      if (r < 0) return Outcome::Unbounded;

      pivot(r, q, w, ratio);
      ++iterations_;
      if (bland) ++bland_pivots_;
      if (ratio <= 1e-12) {
        if (++degenerate >= opts_.degenerate_before_bland) bland = true;
      } else {
        degenerate = 0;
        bland = false;
      }
    }
  }

  // Replace basic artificials by structural columns where possible.
  void drive_out_artificials() {
    for (int i = 0; i < static_cast<int>(basis_.size()); ++i) {
      if (basis_[i] < first_art_) continue;
      const Eigen::RowVectorXd row = binv_.row(i);
      for (int j = 0; j < first_art_; ++j) {
        if (basic_[j]) continue;
        const double wi = row.dot(F_.col(j));
        if (std::abs(wi) > 1e-9) {
          pivot(i, j, binv_ * F_.col(j), 0.0);
          break;
        }
      }
    }
  }

  void refactor() {
    since_refactor_ = 0;
    if (basis_.empty()) {
      binv_.resize(0, 0);
      xb_.resize(0);
      return;
    }
    Eigen::MatrixXd B(F_.rows(), static_cast<Eigen::Index>(basis_.size()));
    for (std::size_t i = 0; i < basis_.size(); ++i) B.col(i) = F_.col(basis_[i]);
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(B);
    binv_ = lu.inverse();
    xb_ = lu.solve(rhs_);
    since_refactor_ = 0;
  }

  Eigen::VectorXd values() const {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(F_.cols());
    for (std::size_t i = 0; i < basis_.size(); ++i) v(basis_[i]) = xb_(i);
    return v;
  }

  Eigen::VectorXd duals(const Eigen::VectorXd& cost) const {
    return binv_.transpose() * basis_cost(cost);
  }

  int iterations() const { return iterations_; }
  int bland_pivots() const { return bland_pivots_; }

 private:
  Eigen::VectorXd basis_cost(const Eigen::VectorXd& cost) const {
    Eigen::VectorXd cb(basis_.size());
    for (std::size_t i = 0; i < basis_.size(); ++i) cb(i) = cost(basis_[i]);
    return cb;
  }

  void pivot(int r, int q, const Eigen::VectorXd& w, double step) {
    xb_ -= step * w;
    xb_(r) = step;
    const double wr = w(r);
    binv_.row(r) /= wr;
    for (int i = 0; i < binv_.rows(); ++i)
      if (i != r && w(i) != 0.0) binv_.row(i) -= w(i) * binv_.row(r);
    basic_[basis_[r]] = 0;
    basic_[q] = 1;
    basis_[r] = q;
    ++since_refactor_;
  }

  Eigen::MatrixXd F_;
  Eigen::VectorXd rhs_;
  std::vector<int> basis_;
  std::vector<char> basic_;
  int first_art_;
  Options opts_;
  Eigen::MatrixXd binv_;
  Eigen::VectorXd xb_;
  int since_refactor_ = 0;
  int iterations_ = 0;
  int bland_pivots_ = 0;
};

}  // namespace

Result solve_lp(const DenseLP& lp, const Options& opts) {
  const int n = static_cast<int>(lp.c.size());
  const int m = static_cast<int>(lp.b.size());
  if (lp.A.rows() != m || (m > 0 && lp.A.cols() != n))
    throw Error(ErrorCode::InvalidArgument, "LP dimensions disagree");
  Eigen::VectorXd lo = lp.lower.size() ? lp.lower : Eigen::VectorXd::Zero(n);
  Eigen::VectorXd hi =
      lp.upper.size() ? lp.upper : Eigen::VectorXd::Constant(n, std::numeric_limits<double>::infinity());
  if (lo.size() != n || hi.size() != n) throw Error(ErrorCode::InvalidArgument, "bound sizes");

  // Shift/flip/split variables so that every column is non-negative.
  std::vector<ColumnMap> map(n);
  std::vector<std::pair<int, double>> bound_rows;  // (column, bound on y)
  int ny = 0;
  for (int j = 0; j < n; ++j) {
    if (lo(j) > hi(j)) {
      Result res;
      res.status = Status::Infeasible;
      return res;
    }
    if (std::isfinite(lo(j))) {
      map[j] = {ny++, -1, 1.0, lo(j)};
      if (std::isfinite(hi(j))) bound_rows.push_back({map[j].col, hi(j) - lo(j)});
    } else if (std::isfinite(hi(j))) {
      map[j] = {ny++, -1, -1.0, hi(j)};
    } else {
      map[j] = {ny, ny + 1, 1.0, 0.0};
      ny += 2;
    }
  }

  const int rows = m + static_cast<int>(bound_rows.size());
  Eigen::MatrixXd Abar = Eigen::MatrixXd::Zero(rows, ny);
  Eigen::VectorXd bbar(rows);
  for (int r = 0; r < m; ++r) {
    double shift = 0.0;
    for (int j = 0; j < n; ++j) {
      const double a = lp.A(r, j);
      if (a == 0.0) continue;
      shift += a * map[j].offset;
      Abar(r, map[j].col) += a * map[j].sign;
      if (map[j].col2 >= 0) Abar(r, map[j].col2) -= a;
    }
    bbar(r) = lp.b(r) - shift;
  }
  for (std::size_t k = 0; k < bound_rows.size(); ++k) {
    Abar(m + k, bound_rows[k].first) = 1.0;
    bbar(m + k) = bound_rows[k].second;
  }

  std::vector<double> sign(rows);
  int n_art = 0;
  for (int r = 0; r < rows; ++r) {
    sign[r] = bbar(r) < 0 ? -1.0 : 1.0;
    if (sign[r] < 0) ++n_art;
  }
  const int first_art = ny + rows;
  Eigen::MatrixXd F = Eigen::MatrixXd::Zero(rows, first_art + n_art);
  Eigen::VectorXd rhs(rows);
  std::vector<int> basis(rows);
  for (int r = 0, art = first_art; r < rows; ++r) {
    F.row(r).head(ny) = sign[r] * Abar.row(r);
    F(r, ny + r) = sign[r];
    rhs(r) = sign[r] * bbar(r);
    if (sign[r] < 0) {
      F(r, art) = 1.0;
      basis[r] = art++;
    } else {
      basis[r] = ny + r;
    }
  }

  Simplex sx(F, rhs, basis, first_art, opts);
  Result res;
  const double bscale = 1.0 + (rows ? rhs.cwiseAbs().maxCoeff() : 0.0);

  if (n_art > 0) {
    Eigen::VectorXd c1 = Eigen::VectorXd::Zero(F.cols());
    c1.tail(n_art).setOnes();
    auto out = sx.run(c1, true);
    if (out == Simplex::Outcome::IterationLimit)
      throw Error(ErrorCode::NumericalFailure, "simplex iteration limit in phase one");
    sx.refactor();
    const double infeas = sx.values().tail(n_art).sum();
    if (infeas > opts.feasibility_tol * bscale) {
      res.status = Status::Infeasible;
      res.iterations = sx.iterations();
      return res;
    }
    sx.drive_out_artificials();
    sx.refactor();
  }

  Eigen::VectorXd c2 = Eigen::VectorXd::Zero(F.cols());
  for (int j = 0; j < n; ++j) {
    c2(map[j].col) += lp.c(j) * map[j].sign;
    if (map[j].col2 >= 0) c2(map[j].col2) -= lp.c(j);
  }
  auto out = sx.run(c2, false);
  if (out == Simplex::Outcome::IterationLimit)
    throw Error(ErrorCode::NumericalFailure, "simplex iteration limit");
  res.iterations = sx.iterations();
  res.bland_pivots = sx.bland_pivots();
  if (out == Simplex::Outcome::Unbounded) {
    res.status = Status::Unbounded;
    return res;
  }

  auto extract = [&] {
    const Eigen::VectorXd v = sx.values();
    res.x.resize(n);
    for (int j = 0; j < n; ++j) {
      double x = map[j].offset + map[j].sign * v(map[j].col);
      if (map[j].col2 >= 0) x -= v(map[j].col2);
      res.x(j) = x;
    }
    const Eigen::VectorXd pi = sx.duals(c2);
    res.row_duals.resize(m);
    for (int r = 0; r < m; ++r) res.row_duals(r) = sign[r] * pi(r);
    res.reduced_costs = lp.c;
    if (m > 0) res.reduced_costs -= lp.A.transpose() * res.row_duals;
    res.objective = lp.c.dot(res.x);

    const double cscale = 1.0 + lp.c.cwiseAbs().maxCoeff();
    double primal = 0.0, dual = 0.0, comp = 0.0;
    const Eigen::VectorXd ax = m > 0 ? Eigen::VectorXd(lp.A * res.x) : Eigen::VectorXd();
    for (int r = 0; r < m; ++r) {
      primal = std::max(primal, ax(r) - lp.b(r));
      dual = std::max(dual, res.row_duals(r));
      comp = std::max(comp, std::abs(res.row_duals(r) * (lp.b(r) - ax(r))));
    }
    for (int j = 0; j < n; ++j) {
      const double x = res.x(j), d = res.reduced_costs(j);
      primal = std::max({primal, lo(j) - x, x - hi(j)});
      const bool at_lo = std::isfinite(lo(j)) && x <= lo(j) + opts.feasibility_tol * bscale;
      const bool at_hi = std::isfinite(hi(j)) && x >= hi(j) - opts.feasibility_tol * bscale;
      if (!at_lo) dual = std::max(dual, d);
      if (!at_hi) dual = std::max(dual, -d);
      if (!at_lo && !at_hi) comp = std::max(comp, std::abs(d));
    }
    res.primal_residual = primal / bscale;
    res.dual_residual = dual / cscale;
    res.complementarity = comp / (bscale * cscale);
    return res.primal_residual <= opts.feasibility_tol && res.dual_residual <= opts.optimality_tol &&
           res.complementarity <= opts.complementarity_tol;
  };

  if (!extract()) {
    sx.refactor();
    if (!extract())
      throw Error(ErrorCode::NumericalFailure,
                  "simplex residuals too large (primal " + std::to_string(res.primal_residual) +
                      ", dual " + std::to_string(res.dual_residual) + ")");
  }
  res.status = Status::Optimal;
  return res;
}

CzSolution solve_over_cz(const ForestInstance& inst, const std::vector<double>& a,
                         const Options& opts) {
  const int n = inst.size();
  if (static_cast<int>(a.size()) != n)
    throw Error(ErrorCode::InvalidArgument, "objective has wrong dimension");
  if (inst.has_infinite_bounds())
    throw Error(ErrorCode::AssumptionViolated, "solve_over_cz requires finite bounds");
  CzSolution sol;
  for (auto& r : hull::cz_rows(inst))
    if (r.tag == CutTag::Monotone || r.tag == CutTag::MIR) sol.rows.push_back(std::move(r));

  DenseLP lp;
  lp.c = Eigen::Map<const Eigen::VectorXd>(a.data(), n);
  lp.A = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(sol.rows.size()), n);
  lp.b.resize(static_cast<Eigen::Index>(sol.rows.size()));
  for (std::size_t r = 0; r < sol.rows.size(); ++r) {
    for (int j = 0; j < n; ++j) lp.A(r, j) = sol.rows[r].coef[j];
    lp.b(r) = sol.rows[r].rhs;
  }
  lp.lower = Eigen::VectorXd::Zero(n);
  lp.upper.resize(n);
  for (Vertex v = 1; v <= n; ++v) lp.upper(v - 1) = inst.upper(v);

  sol.raw = solve_lp(lp, opts);
  if (sol.raw.status != Status::Optimal)
    throw Error(ErrorCode::NumericalFailure,
                "LP over CZ reported " + std::string(to_string(sol.raw.status)));
  sol.z.assign(sol.raw.x.data(), sol.raw.x.data() + n);
  sol.objective = sol.raw.objective;
  sol.row_duals.assign(sol.raw.row_duals.data(), sol.raw.row_duals.data() + sol.raw.row_duals.size());
  return sol;
}

}  // namespace drsub::lp
