#include <map>

#include "drsub/bruteforce.hpp"
#include "drsub/hull.hpp"
#include "drsub/linopt.hpp"
#include "drsub/lp.hpp"
#include "helpers.hpp"

using namespace drsub;
using linopt::Case;
using testing::code_of;
using testing::fixture;

TEST_SUITE("linopt") {
  TEST_CASE("ten-vertex tree: optimum, cases and quoted multipliers") {
    const auto file = fixture("ten_vertex_linear.json");
    const auto& inst = file.instance;
    const auto& a = file.objective->linear;
    const auto sol = linopt::solve_forest(inst, a);
    CHECK(sol.S == VertexSubset(10, {2, 3, 5, 8, 10}));
    CHECK(testing::max_abs_diff(sol.z, Point{0, 3, 3.5, 3, 4, 3, 4, 9.4, 3, 10}) < 1e-12);
    CHECK(sol.z == hull::extreme_point(inst, sol.S));
    std::map<Vertex, Case> cases(sol.cases.begin(), sol.cases.end());
    CHECK(cases.at(3) == Case::C3);
    CHECK(cases.at(4) == Case::C1);

    const auto sub3 = linopt::solve_subtree_psi(inst, a, 3);
    CHECK(sub3.tag == Case::C3);
    CHECK(sub3.cert.r[3] == doctest::Approx(-3.4));
    CHECK(sub3.cert.p[5] == doctest::Approx(-0.1));
    CHECK(sub3.cert.q[inst.parent_arc(7)] == doctest::Approx(-1.1));

    const auto sub4 = linopt::solve_subtree_psi(inst, a, 4);
    CHECK(sub4.tag == Case::C1);
    CHECK(sub4.S == VertexSubset(10, {8}));
    CHECK(sub4.cert.p[8] == doctest::Approx(-1.0));
    CHECK(sub4.cert.q[inst.parent_arc(6)] == doctest::Approx(-4.0));
    CHECK(sub4.cert.q[inst.parent_arc(9)] == doctest::Approx(-2.5));

    const auto chk = linopt::verify_certificate(inst, a, sol.z, sol.cert);
    CHECK(chk.ok);
    CHECK(chk.primal == doctest::Approx(chk.dual));
    const auto ref = lp::solve_over_cz(inst, a);
    CHECK(std::abs(ref.objective - sol.objective) < 1e-8);
  }

  TEST_CASE("certificates fail when perturbed") {
    const auto file = fixture("ten_vertex_linear.json");
    const auto& a = file.objective->linear;
    auto sol = linopt::solve_forest(file.instance, a);
    auto cert = sol.cert;
    cert.p[2] += 0.5;
    CHECK_FALSE(linopt::verify_certificate(file.instance, a, sol.z, cert).ok);
    cert = sol.cert;
    cert.r[3] = 0.1;
    CHECK_FALSE(linopt::verify_certificate(file.instance, a, sol.z, cert).ok);
    Point off = sol.z;
    off[1] = 2;
    CHECK_FALSE(linopt::verify_certificate(file.instance, a, off, sol.cert).ok);
  }

  TEST_CASE("agrees with the simplex solver on random instances") {
    std::mt19937_64 rng(23);
    std::map<Case, int> seen;
    for (int trial = 0; trial < 300; ++trial) {
      bruteforce::InstanceOptions o;
      o.vertices = 1 + trial % 12;
      o.max_vertices = 12;
      const auto inst = bruteforce::random_instance(rng, o);
      auto a = bruteforce::random_objective(rng, inst.size());
      for (Vertex psi : inst.psi())
        bruteforce::steer_objective(inst, a, psi, static_cast<Case>(trial % 4), rng);
      const auto sol = linopt::solve_forest(inst, a);
      const auto ref = lp::solve_over_cz(inst, a);
      CHECK(std::abs(sol.objective - ref.objective) <= 1e-8);
      const auto chk = linopt::verify_certificate(inst, a, sol.z, sol.cert);
      CHECK_MESSAGE(chk.ok, "residual ", chk.max_residual);
      for (auto [psi, c] : sol.cases) ++seen[c];
    }
    for (Case c : {Case::C1, Case::C2, Case::C3, Case::C4}) CHECK(seen[c] >= 10);
  }

  TEST_CASE("steering hits the requested case") {
    std::mt19937_64 rng(29);
    int done = 0;
    for (int trial = 0; trial < 200 && done < 80; ++trial) {
      bruteforce::InstanceOptions o;
      o.vertices = 3 + trial % 6;
      const auto inst = bruteforce::random_instance(rng, o);
      if (inst.psi().empty()) continue;
      const Vertex psi = inst.psi().front();
      auto a = bruteforce::random_objective(rng, inst.size());
      const Case want = static_cast<Case>(done % 4);
      bruteforce::steer_objective(inst, a, psi, want, rng);
      CHECK(linopt::solve_subtree_psi(inst, a, psi).tag == want);
      ++done;
    }
    CHECK(done == 80);
  }

  TEST_CASE("level folding reproduces the selection without psi vertices") {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 100; ++trial) {
      bruteforce::InstanceOptions o;
      o.vertices = 1 + trial % 10;
      o.integer_probability = 0.0;
      o.psi_child_probability = 0.0;
      const auto inst = bruteforce::random_instance(rng, o);
      REQUIRE(inst.psi().empty());
      const auto a = bruteforce::random_objective(rng, inst.size());
      int max_depth = 0;
      for (Vertex v = 1; v <= inst.size(); ++v) max_depth = std::max(max_depth, inst.depth(v));
      VertexSubset S(inst.size());
      for (int d = max_depth; d >= 0; --d) S = linopt::fold_level(inst, a, S, d);
      CHECK(S == linopt::solve_forest(inst, a).S);
    }
  }

  TEST_CASE("errors") {
    const auto file = fixture("ten_vertex_linear.json");
    const auto& a = file.objective->linear;
    CHECK(code_of([&] { linopt::solve_subtree_psi(file.instance, a, 2); }) == ErrorCode::NotAPsiRoot);
    CHECK(code_of([&] { linopt::solve_forest(file.instance, {1, 2}); }) ==
          ErrorCode::InvalidArgument);
    const auto six = fixture("six_vertex.json").instance;
    CHECK(code_of([&] { linopt::solve_forest(six, std::vector<double>(6, 1.0)); }) ==
          ErrorCode::AssumptionViolated);
  }
}
