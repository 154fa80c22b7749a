#include "drsub/perm.hpp"

#include <algorithm>
#include <sstream>

#include "drsub/hull.hpp"

namespace drsub::perm {

Permutation::Permutation(std::vector<Vertex> order) : order_(std::move(order)) {
  const int n = static_cast<int>(order_.size());
  pos_.assign(n + 1, 0);
  for (int k = 1; k <= n; ++k) {
    const Vertex v = order_[k - 1];
    if (v < 1 || v > n || pos_[v] != 0)
      throw Error(ErrorCode::NotAPermutation, "order is not a permutation of 1.." + std::to_string(n));
    pos_[v] = k;
  }
}

std::string Permutation::to_string() const {
  std::ostringstream os;
  os << '(';
  for (int k = 0; k < size(); ++k) os << (k ? "," : "") << order_[k];
  os << ')';
  return os.str();
}

namespace {

void require_size(const ForestInstance& inst, const Permutation& delta) {
  if (delta.size() != inst.size())
    throw Error(ErrorCode::NotAPermutation, "permutation length differs from |V|");
}

// Bookkeeping for a growing prefix: which vertices are placed, the nearest
// placed proper ascendant of every vertex, and the counters behind the
// candidate rules.
class PrefixState {
 public:
  explicit PrefixState(const ForestInstance& inst)
      : inst_(inst), placed_(inst.size() + 1, 0), anc_(inst.size() + 1, kNone),
        eq_pending_(inst.size() + 1, 0), floor_seen_(inst.size() + 1, 0),
        floor_watch_(inst.size() + 1) {
    for (Vertex j = 1; j <= inst.size(); ++j)
      for (Vertex i = inst.parent(j); i != kNone && nearly_equal(inst.upper(i), inst.upper(j));
           i = inst.parent(i))
        ++eq_pending_[i];
    for (Vertex psi : inst.psi()) {
      const double fl = inst.psi_floor(psi);
      for (Vertex i = inst.parent(psi); i != kNone; i = inst.parent(i))
        if (nearly_equal(inst.upper(i), fl)) floor_watch_[i].push_back(psi);
    }
  }

  bool placed(Vertex v) const { return placed_[v] != 0; }
  Vertex anchor(Vertex v) const { return anc_[v]; }
  int count() const { return count_; }

  bool candidate(Vertex i) const {
    if (placed_[i] || eq_pending_[i] > 0) return false;
    if (inst_.in_psi(i) && !placed_[inst_.psi_child(i)]) {
      if (inst_.upper(i) < 1.0 || floor_seen_[i]) return false;
    }
    return true;
  }

  void place(Vertex v) {
    placed_[v] = 1;
    ++count_;
    for (Vertex i = inst_.parent(v); i != kNone && nearly_equal(inst_.upper(i), inst_.upper(v));
         i = inst_.parent(i))
      --eq_pending_[i];
    for (Vertex psi : floor_watch_[v]) floor_seen_[psi] = 1;
    // v becomes the nearest placed ascendant of everything below it down to
    // the next placed vertex.
    stack_.assign(inst_.children(v).begin(), inst_.children(v).end());
    while (!stack_.empty()) {
      const Vertex d = stack_.back();
      stack_.pop_back();
      if (placed_[d]) continue;
      anc_[d] = v;
      for (Vertex c : inst_.children(d)) stack_.push_back(c);
    }
  }

  // t-value of appending i next, by the case formulas.
  double t_of(Vertex i, const Point& z) const {
    const Vertex a = anc_[i];
    const double za = a ? z[a - 1] : 0.0, ua = a ? inst_.upper(a) : 0.0;
    double num, den;
    if (inst_.in_psi(i) && !placed_[inst_.psi_child(i)]) {
      num = eta(inst_, i, z) - za;
      den = inst_.psi_floor(i) - ua;
    } else if (a != kNone && inst_.in_psi(a)) {
      num = z[i - 1] - eta(inst_, a, z);
      den = inst_.upper(i) - inst_.psi_floor(a);
    } else {
      num = z[i - 1] - za;
      den = inst_.upper(i) - ua;
    }
    if (den <= kTieTol)
      throw Error(ErrorCode::InvalidPrefix,
                  "non-positive denominator when appending " + std::to_string(i));
    return num / den;
  }

  // Same quantity as t_of, as coefficients on z.
  SparseRow row_of(Vertex i) const {
    SparseRow row;
    const Vertex a = anc_[i];
    const double ua = a ? inst_.upper(a) : 0.0;
    auto bad = [&] {
      return Error(ErrorCode::InvalidPermutation,
                   "non-positive denominator when appending " + std::to_string(i));
    };
    if (inst_.in_psi(i) && !placed_[inst_.psi_child(i)]) {
      const Vertex ch = inst_.psi_child(i);
      const double fl = inst_.psi_floor(i), gap = inst_.upper(ch) - inst_.upper(i);
      const double den = fl - ua;
      if (den <= kTieTol) throw bad();
      row.add(i, 1.0 / (gap * den));
      if (a) row.add(a, -1.0 / den);
      row.add(ch, -(inst_.upper(i) - fl) / (gap * den));
    } else if (a != kNone && inst_.in_psi(a)) {
      const Vertex ch = inst_.psi_child(a);
      const double fl = inst_.psi_floor(a), gap = inst_.upper(ch) - inst_.upper(a);
      if (i == ch) {
        row.add(i, 1.0 / gap);
        row.add(a, -1.0 / gap);
      } else {
        const double den = inst_.upper(i) - fl;
        if (den <= kTieTol) throw bad();
        row.add(i, 1.0 / den);
        row.add(a, -1.0 / (gap * den));
        row.add(ch, (inst_.upper(a) - fl) / (gap * den));
      }
    } else {
      const double den = inst_.upper(i) - ua;
      if (den <= kTieTol) throw bad();
      row.add(i, 1.0 / den);
      if (a) row.add(a, -1.0 / den);
    }
    return row;
  }

 private:
  const ForestInstance& inst_;
  std::vector<char> placed_;
  std::vector<Vertex> anc_;
  std::vector<int> eq_pending_;
  std::vector<char> floor_seen_;
  std::vector<std::vector<Vertex>> floor_watch_;
  std::vector<Vertex> stack_;
  int count_ = 0;
};

PrefixState replay(const ForestInstance& inst, std::span<const Vertex> prefix, ErrorCode on_bad) {
  PrefixState st(inst);
  for (Vertex v : prefix) {
    if (v < 1 || v > inst.size() || st.placed(v))
      throw Error(ErrorCode::NotAPermutation, "prefix repeats or leaves the vertex range");
    if (!st.candidate(v))
      throw Error(on_bad, "appending " + std::to_string(v) + " breaks validity");
    st.place(v);
  }
  return st;
}

}  // namespace

Validity is_valid_permutation(const ForestInstance& inst, const Permutation& delta) {
  require_size(inst, delta);
  inst.require_normalized("is_valid_permutation");
  Validity out;
  auto flag = [&](int c) {
    out.valid = false;
    if (std::find(out.violated.begin(), out.violated.end(), c) == out.violated.end())
      out.violated.push_back(c);
  };
  for (Vertex j = 1; j <= inst.size(); ++j)
    for (Vertex i = inst.parent(j); i != kNone; i = inst.parent(i))
      if (nearly_equal(inst.upper(i), inst.upper(j)) && delta.position(i) < delta.position(j))
        flag(1);
  for (Vertex psi : inst.psi()) {
    const Vertex ch = inst.psi_child(psi);
    if (inst.psi_floor(psi) == 0.0 && delta.position(ch) > delta.position(psi)) flag(2);
    for (Vertex i = inst.parent(psi); i != kNone; i = inst.parent(i))
      if (nearly_equal(inst.upper(i), inst.psi_floor(psi)) &&
          delta.position(i) < delta.position(psi) && delta.position(psi) < delta.position(ch))
        flag(3);
  }
  std::sort(out.violated.begin(), out.violated.end());
  return out;
}

std::vector<Vertex> valid_candidates(const ForestInstance& inst, std::span<const Vertex> prefix) {
  inst.require_normalized("valid_candidates");
  PrefixState st = replay(inst, prefix, ErrorCode::InvalidPartial);
  std::vector<Vertex> out;
  for (Vertex v = 1; v <= inst.size(); ++v)
    if (st.candidate(v)) out.push_back(v);
  return out;
}

double eta(const ForestInstance& inst, Vertex psi, const Point& z) {
  const Vertex ch = inst.psi_child(psi);
  const double u = inst.upper(psi);
  return (z[psi - 1] - (u - inst.psi_floor(psi)) * z[ch - 1]) / (inst.upper(ch) - u);
}

double t_value(const ForestInstance& inst, std::span<const Vertex> prefix, int k, const Point& z) {
  inst.require_normalized("t_value");
  if (k < 1 || k > static_cast<int>(prefix.size()))
    throw Error(ErrorCode::InvalidArgument, "t index outside the prefix");
  PrefixState st(inst);
  for (int j = 0; j + 1 < k; ++j) {
    if (st.placed(prefix[j])) throw Error(ErrorCode::InvalidPrefix, "prefix repeats a vertex");
    st.place(prefix[j]);
  }
  return st.t_of(prefix[k - 1], z);
}

std::vector<double> t_vector(const ForestInstance& inst, const Permutation& delta, const Point& z) {
  require_size(inst, delta);
  inst.require_normalized("t_vector");
  PrefixState st(inst);
  std::vector<double> t(inst.size());
  for (int k = 1; k <= delta.size(); ++k) {
    t[k - 1] = st.t_of(delta.at(k), z);
    st.place(delta.at(k));
  }
  return t;
}

std::vector<SparseRow> t_rows(const ForestInstance& inst, const Permutation& delta) {
  require_size(inst, delta);
  inst.require_normalized("t_rows");
  PrefixState st(inst);
  std::vector<SparseRow> rows(inst.size());
  for (int k = 1; k <= delta.size(); ++k) {
    if (!st.candidate(delta.at(k)))
      throw Error(ErrorCode::InvalidPermutation,
                  "position " + std::to_string(k) + " breaks validity");
    rows[k - 1] = st.row_of(delta.at(k));
    st.place(delta.at(k));
  }
  return rows;
}

Eigen::MatrixXd t_matrix(const ForestInstance& inst, const Permutation& delta) {
  const int n = inst.size();
  Eigen::MatrixXd T = Eigen::MatrixXd::Zero(n, n);
  const auto rows = t_rows(inst, delta);
  for (int k = 0; k < n; ++k)
    for (int e = 0; e < rows[k].nnz; ++e) T(k, rows[k].entries[e].first - 1) += rows[k].entries[e].second;
  return T;
}

std::vector<Point> prefix_points(const ForestInstance& inst, const Permutation& delta) {
  require_size(inst, delta);
  VertexSubset S(inst.size());
  std::vector<Point> pts;
  pts.reserve(inst.size() + 1);
  pts.push_back(hull::extreme_point(inst, S));
  for (int k = 1; k <= delta.size(); ++k) {
    S.insert(delta.at(k));
    pts.push_back(hull::extreme_point(inst, S));
  }
  return pts;
}

Eigen::MatrixXd d_matrix(const ForestInstance& inst, const Permutation& delta) {
  if (!is_valid_permutation(inst, delta).valid)
    throw Error(ErrorCode::InvalidPermutation, "d_matrix needs a valid permutation");
  const int n = inst.size();
  const auto pts = prefix_points(inst, delta);
  Eigen::MatrixXd D(n, n);
  for (int k = 1; k <= n; ++k)
    for (int i = 0; i < n; ++i) D(i, k - 1) = pts[k][i] - pts[k - 1][i];
  return D;
}

Permutation permutation_finder(const ForestInstance& inst, const Point& z,
                               const FinderOptions& opts) {
  inst.require_normalized("permutation_finder");
  if (static_cast<int>(z.size()) != inst.size())
    throw Error(ErrorCode::InvalidArgument, "point has wrong dimension");
  if (opts.check_hull) {
    auto m = hull::is_member_cz(inst, z, opts.hull_tol);
    if (!m.member)
      throw Error(ErrorCode::NotInHull,
                  "point violates " + std::to_string(m.violated.size()) + " hull rows");
  }
  const int n = inst.size();
  PrefixState st(inst);
  std::vector<Vertex> order;
  order.reserve(n);
  for (int k = 0; k < n; ++k) {
    Vertex best = kNone;
    double best_t = 0.0;
    for (Vertex v = 1; v <= n; ++v) {
      if (!st.candidate(v)) continue;
      const double t = st.t_of(v, z);
      if (best == kNone || t > best_t) {
        best = v;
        best_t = t;
      }
    }
    if (best == kNone) throw Error(ErrorCode::NumericalFailure, "no valid candidate left");
    order.push_back(best);
    st.place(best);
  }
  return Permutation(std::move(order));
}

Decomposition decompose(const ForestInstance& inst, const Point& z, const FinderOptions& opts) {
  Decomposition d;
  d.perm = permutation_finder(inst, z, opts);
  d.t = t_vector(inst, d.perm, z);
  const int n = inst.size();
  d.lambda.resize(n + 1);
  double sum = 0.0;
  for (int k = 0; k <= n; ++k) {
    const double hi = k == 0 ? 1.0 : d.t[k - 1];
    const double lo = k == n ? 0.0 : d.t[k];
    double l = hi - lo;
    if (l < -1e-9)
      throw Error(ErrorCode::DecompositionResidual,
                  "negative weight " + std::to_string(l) + " at prefix " + std::to_string(k));
    l = std::max(0.0, l);
    d.lambda[k] = l;
    sum += l;
  }
  d.points = prefix_points(inst, d.perm);
  Point rec(n, 0.0);
  for (int k = 0; k <= n; ++k)
    if (d.lambda[k] != 0.0)
      for (int i = 0; i < n; ++i) rec[i] += d.lambda[k] * d.points[k][i];
  for (int i = 0; i < n; ++i) d.residual = std::max(d.residual, std::abs(rec[i] - z[i]));
  if (std::abs(sum - 1.0) > 1e-9 || d.residual > 1e-9)
    throw Error(ErrorCode::DecompositionResidual,
                "reconstruction error " + std::to_string(d.residual) + ", weight sum " +
                    std::to_string(sum));
  return d;
}

void for_each_valid_permutation(const ForestInstance& inst,
                                const std::function<bool(const Permutation&)>& fn,
                                int max_vertices) {
  inst.require_normalized("for_each_valid_permutation");
  const int n = inst.size();
  if (n > max_vertices)
    throw Error(ErrorCode::TooLarge, "permutation enumeration is limited to " +
                                         std::to_string(max_vertices) + " vertices");
  std::vector<Vertex> order;
  bool stop = false;
  std::function<void(const PrefixState&)> rec = [&](const PrefixState& st) {
    if (stop) return;
    if (static_cast<int>(order.size()) == n) {
      if (!fn(Permutation(order))) stop = true;
      return;
    }
    for (Vertex v = 1; v <= n && !stop; ++v) {
      if (!st.candidate(v)) continue;
      PrefixState next = st;
      next.place(v);
      order.push_back(v);
      rec(next);
      order.pop_back();
    }
  };
  rec(PrefixState(inst));
}

std::vector<Permutation> enumerate_valid_permutations(const ForestInstance& inst, int max_vertices) {
  std::vector<Permutation> out;
  for_each_valid_permutation(
      inst, [&](const Permutation& p) {
        out.push_back(p);
        return true;
      },
      max_vertices);
  return out;
}

Permutation random_valid_permutation(const ForestInstance& inst, std::mt19937_64& rng) {
  inst.require_normalized("random_valid_permutation");
  PrefixState st(inst);
  std::vector<Vertex> order, cand;
  for (int k = 0; k < inst.size(); ++k) {
    cand.clear();
    for (Vertex v = 1; v <= inst.size(); ++v)
      if (st.candidate(v)) cand.push_back(v);
    const Vertex v = cand[std::uniform_int_distribution<std::size_t>(0, cand.size() - 1)(rng)];
    order.push_back(v);
    st.place(v);
  }
  return Permutation(std::move(order));
}

}  // namespace drsub::perm
