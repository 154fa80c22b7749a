#include "drsub/linopt.hpp"

#include <algorithm>
#include <cmath>

#include "drsub/hull.hpp"

namespace drsub::linopt {

std::string_view to_string(Case c) {
  switch (c) {
    case Case::C1: return "C1";
    case Case::C2: return "C2";
    case Case::C3: return "C3";
    case Case::C4: return "C4";
  }
  return "?";
}

DualCertificate DualCertificate::zeros(const ForestInstance& inst) {
  const int n = inst.size();
  return {std::vector<double>(n + 1, 0.0), std::vector<double>(inst.arcs().size(), 0.0),
          std::vector<double>(n + 1, 0.0)};
}

std::map<Vertex, double> s_values(const ForestInstance& inst, const std::vector<double>& a,
                                  const VertexSubset& S_next, int depth_level) {
  std::map<Vertex, double> out;
  for (Vertex i = 1; i <= inst.size(); ++i) {
    if (inst.depth(i) != depth_level) continue;
    double s = 0.0;
    for (Vertex j : hull::sigma(inst, S_next, i).members()) s += a[j - 1];
    out[i] = s;
  }
  return out;
}

VertexSubset fold_level(const ForestInstance& inst, const std::vector<double>& a,
                        const VertexSubset& S_next, int depth_level) {
  VertexSubset S = S_next;
  for (auto [i, s] : s_values(inst, a, S_next, depth_level))
    if (s < -kTieTol) S.insert(i);
  return S;
}

namespace {

bool negative(double s) { return s < -kTieTol; }

struct Work {
  const ForestInstance& inst;
  const std::vector<double>& a;
  std::vector<double> s;
  std::vector<char> sel;
  DualCertificate cert;

  Work(const ForestInstance& i, const std::vector<double>& obj)
      : inst(i), a(obj), s(i.size() + 1, 0.0), sel(i.size() + 1, 0),
        cert(DualCertificate::zeros(i)) {}

  double& q_into(Vertex j) { return cert.q[inst.parent_arc(j)]; }

  // s-value of v from the current selections among its children.
  double accumulate(Vertex v, const std::vector<char>* skip = nullptr) const {
    double t = a[v - 1];
    for (Vertex c : inst.children(v))
      if (!sel[c] && !(skip && (*skip)[c])) t += s[c];
    return t;
  }
};

Case solve_subtree(Work& w, Vertex psi, double* s_child_out) {
  const ForestInstance& inst = w.inst;
  const Vertex rho = inst.psi_child(psi);
  const std::vector<Vertex> below = inst.descendants(rho);

  // Depth >= 2 relative to psi: bottom-up equals the depth-by-depth fold.
  for (auto it = below.rbegin(); it != below.rend(); ++it) {
    const Vertex j = *it;
    if (j == rho) continue;
    w.s[j] = w.accumulate(j);
    w.sel[j] = negative(w.s[j]);
  }
  const double s_rho = w.accumulate(rho);
  w.s[rho] = s_rho;
  if (s_child_out) *s_child_out = s_rho;

  const double a_psi = w.a[psi - 1];
  const double sum_r = std::min(0.0, a_psi);
  const double u = inst.upper(psi);
  const double theta = u - strict_floor(u);

  Case c;
  if (-s_rho <= sum_r + kTieTol) c = Case::C1;
  else if (-s_rho <= theta * sum_r + kTieTol) c = Case::C2;
  else if (-s_rho <= kTieTol) c = Case::C3;
  else c = Case::C4;

  const bool psi_in = c != Case::C1 && a_psi < 0;
  const bool rho_in = c == Case::C3 || c == Case::C4;
  w.sel[psi] = psi_in;
  w.sel[rho] = rho_in;
  w.s[psi] = a_psi + (rho_in ? 0.0 : s_rho);

  for (Vertex j : below) {
    w.cert.p[j] = 0.0;
    if (j != rho) {
      if (w.sel[j]) w.cert.p[j] = w.s[j];
      w.q_into(j) = w.sel[j] ? 0.0 : -w.s[j];
    }
  }
  w.cert.p[psi] = 0.0;
  w.cert.r[psi] = 0.0;

  switch (c) {
    case Case::C1:
    case Case::C4:
      if (rho_in) w.cert.p[rho] = s_rho;
      if (psi_in) w.cert.p[psi] = w.s[psi];
      w.q_into(rho) = rho_in ? 0.0 : -s_rho;
      break;
    case Case::C2: {
      const double r = theta / (1.0 - theta) * (a_psi + s_rho);
      w.cert.r[psi] = r;
      w.q_into(rho) = -s_rho - r;
      break;
    }
    case Case::C3:
      w.cert.p[rho] = theta * a_psi + s_rho;
      w.cert.r[psi] = theta * a_psi;
      w.q_into(rho) = 0.0;
      break;
  }
  return c;
}

void check_objective(const ForestInstance& inst, const std::vector<double>& a) {
  if (static_cast<int>(a.size()) != inst.size())
    throw Error(ErrorCode::InvalidArgument, "objective has wrong dimension");
  for (double x : a)
    if (!std::isfinite(x)) throw Error(ErrorCode::InvalidArgument, "objective is not finite");
}

VertexSubset selected(const Work& w) {
  VertexSubset S(w.inst.size());
  for (Vertex v = 1; v <= w.inst.size(); ++v)
    if (w.sel[v]) S.insert(v);
  return S;
}

void solve_component(Work& w, Vertex root, std::vector<std::pair<Vertex, Case>>& cases) {
  const ForestInstance& inst = w.inst;
  const std::vector<Vertex> comp = inst.descendants(root);
  std::vector<Vertex> psis;
  for (Vertex v : comp)
    if (inst.in_psi(v)) psis.push_back(v);
  std::sort(psis.begin(), psis.end());

  for (Vertex psi : psis) cases.push_back({psi, solve_subtree(w, psi, nullptr)});

  // Everything hanging below a selection made inside a psi subtree leaves G'.
  std::vector<char> deleted(inst.size() + 1, 0);
  for (Vertex psi : psis)
    for (Vertex i : inst.descendants(psi))
      if (w.sel[i] && !deleted[i])
        for (Vertex j : inst.descendants(i)) deleted[j] = 1;

  for (auto it = comp.rbegin(); it != comp.rend(); ++it) {
    const Vertex v = *it;
    if (deleted[v]) continue;
    w.s[v] = w.accumulate(v, &deleted);
    w.sel[v] = negative(w.s[v]);
    w.cert.p[v] = w.sel[v] ? w.s[v] : 0.0;
    w.cert.r[v] = 0.0;
    for (Vertex c : inst.children(v))
      w.q_into(c) = deleted[c] || w.sel[c] ? 0.0 : -w.s[c];
  }
}

}  // namespace

SubtreeSolution solve_subtree_psi(const ForestInstance& inst, const std::vector<double>& a,
                                  Vertex psi) {
  check_objective(inst, a);
  if (psi < 1 || psi > inst.size() || !inst.in_psi(psi) || inst.psi_child(psi) == kNone ||
      !inst.property1())
    throw Error(ErrorCode::NotAPsiRoot,
                std::to_string(psi) + " is not a fractional vertex with a single integer child");
  Work w(inst, a);
  SubtreeSolution out;
  out.tag = solve_subtree(w, psi, &out.s_child);
  out.S = VertexSubset(inst.size());
  for (Vertex v : inst.descendants(psi))
    if (w.sel[v]) out.S.insert(v);
  out.cert = std::move(w.cert);
  return out;
}

TreeSolution solve_tree(const ForestInstance& inst, const std::vector<double>& a, Vertex root) {
  check_objective(inst, a);
  inst.require_normalized("solve_tree");
  if (root < 1 || root > inst.size() || inst.parent(root) != kNone)
    throw Error(ErrorCode::InvalidArgument, std::to_string(root) + " is not a root");
  Work w(inst, a);
  TreeSolution out;
  solve_component(w, root, out.cases);
  out.S = selected(w);
  out.cert = std::move(w.cert);
  return out;
}

ForestSolution solve_forest(const ForestInstance& inst, const std::vector<double>& a) {
  check_objective(inst, a);
  inst.require_normalized("solve_forest");
  Work w(inst, a);
  ForestSolution out;
  for (Vertex root : inst.roots()) solve_component(w, root, out.cases);
  out.S = selected(w);
  out.z = hull::extreme_point(inst, out.S);
  for (int i = 0; i < inst.size(); ++i) out.objective += a[i] * out.z[i];
  out.cert = std::move(w.cert);
  return out;
}

CertificateCheck verify_certificate(const ForestInstance& inst, const std::vector<double>& a,
                                    const Point& z, const DualCertificate& cert, double tol) {
  const int n = inst.size();
  CertificateCheck chk;
  if (static_cast<int>(a.size()) != n || static_cast<int>(z.size()) != n ||
      static_cast<int>(cert.p.size()) != n + 1 || cert.q.size() != inst.arcs().size() ||
      static_cast<int>(cert.r.size()) != n + 1) {
    chk.max_residual = kInfinity;
    return chk;
  }
  double res = hull::is_member_cz(inst, z, 0.0).max_violation;

  // Dual rows: for every z_i, the multipliers of the rows containing z_i.
  std::vector<double> col(n + 1, 0.0);
  for (Vertex v = 1; v <= n; ++v) {
    res = std::max({res, cert.p[v], inst.in_psi(v) ? cert.r[v] : std::abs(cert.r[v])});
    col[v] += cert.p[v];
    chk.dual += inst.upper(v) * cert.p[v];
  }
  for (std::size_t k = 0; k < inst.arcs().size(); ++k) {
    const Arc& arc = inst.arcs()[k];
    res = std::max(res, cert.q[k]);
    col[arc.from] += cert.q[k];
    col[arc.to] -= cert.q[k];
  }
  for (const LinearCut& row : hull::mir_rows(inst)) {
    Vertex psi = kNone;
    for (Vertex v = 1; v <= n; ++v)
      if (row.coef[v - 1] > 0) psi = v;
    const double r = cert.r[psi];
    for (Vertex v = 1; v <= n; ++v) col[v] += row.coef[v - 1] * r;
    chk.dual += row.rhs * r;
  }
  for (Vertex v = 1; v <= n; ++v) {
    res = std::max(res, col[v] - a[v - 1]);
    chk.primal += a[v - 1] * z[v - 1];
  }
  res = std::max(res, std::abs(chk.primal - chk.dual) / (1.0 + std::abs(chk.primal)));
  chk.max_residual = res;
  chk.ok = res <= tol;
  return chk;
}

}  // namespace drsub::linopt
