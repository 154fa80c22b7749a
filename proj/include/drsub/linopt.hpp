#pragma once

#include <map>
#include <string_view>
#include <vector>

#include "drsub/forest.hpp"

namespace drsub::linopt {

// Which of the four configurations decided the subtree below a psi vertex.
//   C1: psi and its child stay out of S.
//   C2: psi joins S (its region sits at floor(u_psi)).
//   C3, C4: psi's child joins S, and psi too when a_psi < 0.
enum class Case { C1, C2, C3, C4 };
std::string_view to_string(Case c);

// Multipliers of the box rows (p), arc rows (q) and MIR rows (r).
// p and r are indexed by vertex (slot 0 unused, r nonzero only on psi);
// q is indexed like inst.arcs().
struct DualCertificate {
  std::vector<double> p;
  std::vector<double> q;
  std::vector<double> r;

  static DualCertificate zeros(const ForestInstance& inst);
};

// s^i = sum of a_j over sigma_i(S_next), for every vertex of the given depth.
std::map<Vertex, double> s_values(const ForestInstance& inst, const std::vector<double>& a,
                                  const VertexSubset& S_next, int depth_level);
// S^d = { i at depth d : s^i < 0 } united with S_next.
VertexSubset fold_level(const ForestInstance& inst, const std::vector<double>& a,
                        const VertexSubset& S_next, int depth_level);

struct SubtreeSolution {
  VertexSubset S;
  DualCertificate cert;  // entries outside R+(psi) are zero
  Case tag = Case::C1;
  double s_child = 0.0;  // s-value of psi's child against the deeper selections
};

SubtreeSolution solve_subtree_psi(const ForestInstance& inst, const std::vector<double>& a,
                                  Vertex psi);

struct TreeSolution {
  VertexSubset S;
  DualCertificate cert;  // entries outside the component are zero
  std::vector<std::pair<Vertex, Case>> cases;
};

TreeSolution solve_tree(const ForestInstance& inst, const std::vector<double>& a, Vertex root);

struct ForestSolution {
  Point z;
  double objective = 0.0;
  VertexSubset S;
  DualCertificate cert;
  std::vector<std::pair<Vertex, Case>> cases;
};

ForestSolution solve_forest(const ForestInstance& inst, const std::vector<double>& a);

struct CertificateCheck {
  bool ok = false;
  double max_residual = 0.0;
  double primal = 0.0;
  double dual = 0.0;
};

CertificateCheck verify_certificate(const ForestInstance& inst, const std::vector<double>& a,
                                    const Point& z, const DualCertificate& cert,
                                    double tol = 1e-8);

}  // namespace drsub::linopt
