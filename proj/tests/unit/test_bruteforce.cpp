#include "drsub/bruteforce.hpp"
#include "drsub/hull.hpp"
#include "helpers.hpp"

using namespace drsub;
using testing::code_of;
using testing::fixture;

TEST_SUITE("bruteforce") {
  TEST_CASE("extreme-point minimum of the two-variable quadratic") {
    const auto file = fixture("two_var_quadratic.json");
    const auto best = bruteforce::min_over_extreme_points(file.instance, file.objective->oracle(2));
    CHECK(best.value == doctest::Approx(-600));
    CHECK(best.z == Point{10, 10});
    CHECK(best.S == VertexSubset(2, {1, 2}));
  }

  TEST_CASE("budgets") {
    const auto file = fixture("two_var_quadratic.json");
    const auto f = file.objective->oracle(2);
    bruteforce::Budget tiny;
    tiny.subsets = 2;
    CHECK(code_of([&] { bruteforce::min_over_extreme_points(file.instance, f, tiny); }) ==
          ErrorCode::BudgetExceeded);
    tiny.lattice_points = 0;
    CHECK(code_of([&] { bruteforce::min_over_lattice(file.instance, f, 1.0, tiny); }) ==
          ErrorCode::BudgetExceeded);
    tiny.lattice_points = 50;
    CHECK(code_of([&] { bruteforce::min_over_lattice(file.instance, f, 1.0, tiny); }) ==
          ErrorCode::BudgetExceeded);
    tiny.permutations = 1;
    CHECK(code_of([&] {
            bruteforce::max_violation_over_permutations(file.instance, f, Point{1, 1}, 0.0, tiny);
          }) == ErrorCode::BudgetExceeded);
    CHECK(code_of([&] { bruteforce::min_over_lattice(file.instance, f, 0.0); }) ==
          ErrorCode::InvalidArgument);
  }

  TEST_CASE("lattice and extreme-point minima agree on all-integer instances") {
    std::mt19937_64 rng(101);
    for (int trial = 0; trial < 30; ++trial) {
      bruteforce::InstanceOptions o;
      o.vertices = 1 + trial % 5;
      const auto base = bruteforce::random_instance(rng, o);
      // Same forest with every bound rounded up and every vertex integer.
      std::vector<double> u;
      std::vector<Vertex> ints;
      for (Vertex v = 1; v <= base.size(); ++v) {
        u.push_back(std::ceil(base.upper(v)));
        ints.push_back(v);
      }
      const auto inst = ForestInstance::build(
          base.size(), {base.arcs().begin(), base.arcs().end()}, u, ints);
      const auto f = ValueOracle::quadratic(bruteforce::random_dr_quadratic(rng, inst.size()));
      const auto lat = bruteforce::min_over_lattice(inst, f, 1.0);
      const auto ext = bruteforce::min_over_extreme_points(inst, f);
      CHECK(lat.value == doctest::Approx(ext.value).epsilon(1e-9));
    }
  }

  TEST_CASE("generators") {
    std::mt19937_64 a(7), b(7);
    bruteforce::InstanceOptions o;
    o.vertices = 9;
    const auto i1 = bruteforce::random_instance(a, o);
    const auto i2 = bruteforce::random_instance(b, o);
    CHECK(i1.upper_bounds() == i2.upper_bounds());
    CHECK(i1.integer_vertices() == i2.integer_vertices());

    std::mt19937_64 rng(13);
    const auto q = bruteforce::random_dr_quadratic(rng, 6);
    CHECK(q.Q.maxCoeff() <= 0.0);
    CHECK((q.Q - q.Q.transpose()).cwiseAbs().maxCoeff() == 0.0);

    for (int trial = 0; trial < 50; ++trial) {
      o.vertices = 1 + trial % 10;
      const auto inst = bruteforce::random_instance(rng, o);
      CHECK(hull::is_member_cz(inst, bruteforce::random_hull_point(inst, rng)).member);
    }

    o.max_vertices = 5;
    o.vertices = 5;
    for (int trial = 0; trial < 20; ++trial) CHECK(bruteforce::random_instance(rng, o).size() <= 5);
  }
}
