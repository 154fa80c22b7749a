#include <algorithm>
#include <set>

#include "drsub/bruteforce.hpp"
#include "drsub/normalize.hpp"
#include "helpers.hpp"

using namespace drsub;
using testing::code_of;
using testing::fixture;

TEST_SUITE("forest") {
  TEST_CASE("rejects malformed forests and bounds") {
    CHECK(code_of([] { ForestInstance::build(3, {{1, 2}, {3, 2}}, {1, 1, 1}, {}); }) ==
          ErrorCode::NotAForest);
    CHECK(code_of([] { ForestInstance::build(2, {{1, 1}}, {1, 1}, {}); }) == ErrorCode::NotAForest);
    CHECK(code_of([] { ForestInstance::build(3, {{1, 2}, {2, 3}, {3, 1}}, {1, 1, 1}, {}); }) ==
          ErrorCode::NotAForest);
    CHECK(code_of([] { ForestInstance::build(2, {{1, 2}}, {3, 2}, {}); }) ==
          ErrorCode::NonMonotoneBounds);
    CHECK(code_of([] { ForestInstance::build(2, {}, {0, 2}, {}); }) == ErrorCode::NonPositiveBound);
    CHECK(code_of([] { ForestInstance::build(2, {}, {0.5, 2}, {1}); }) ==
          ErrorCode::NonPositiveBound);
    CHECK(code_of([] { ForestInstance::build(2, {{1, 3}}, {1, 2}, {}); }) ==
          ErrorCode::InvalidArgument);
    CHECK(code_of([] { fixture("not_forest.json"); }) == ErrorCode::NotAForest);
  }

  TEST_CASE("integer bounds are rounded down") {
    auto inst = ForestInstance::build(2, {{1, 2}}, {1.5, 2.7}, {2});
    CHECK(inst.upper(2) == 2.0);
    CHECK(inst.upper(1) == 1.5);
  }

  TEST_CASE("structure queries") {
    const auto inst = fixture("twelve_vertex.json").instance;
    CHECK(inst.roots() == std::vector<Vertex>{1, 5, 6, 7, 8});
    CHECK(inst.parent(12) == 7);
    CHECK(inst.parent(7) == kNone);
    CHECK(inst.depth(11) == 3);
    CHECK(inst.reaches(8, 11));
    CHECK(inst.reaches(9, 9));
    CHECK_FALSE(inst.reaches(11, 8));
    CHECK_FALSE(inst.reaches(1, 8));
    CHECK(inst.descendants(8) == std::vector<Vertex>{8, 9, 10, 11});
    CHECK(inst.ascendants(11) == std::vector<Vertex>{11, 10, 9, 8});
    auto rs = reach_sets(inst);
    CHECK(rs.descendants[2] == std::vector<Vertex>{2, 3, 4});
    CHECK(rs.ascendants[4] == std::vector<Vertex>{1, 2, 3, 4});
  }

  TEST_CASE("psi set and assumptions on the twelve-vertex forest") {
    const auto inst = fixture("twelve_vertex.json").instance;
    CHECK(inst.psi() == std::vector<Vertex>{1, 9});
    CHECK(inst.psi_child(9) == 10);
    CHECK(inst.psi_floor(9) == 10.0);
    CHECK(inst.psi_floor(1) == 0.0);
    CHECK(inst.assumption1());
    CHECK(inst.property1());
    CHECK(inst.assumption2());
  }

  TEST_CASE("assumption checks report witnesses") {
    // Two fractional vertices with integer descendants on one path.
    auto a = ForestInstance::build(3, {{1, 2}, {2, 3}}, {0.5, 1.5, 2}, {3});
    auto c1 = check_assumption1(a);
    CHECK_FALSE(c1.ok);
    CHECK(c1.witness == std::vector<Vertex>{1, 2});

    // Continuous child below psi.
    auto b = ForestInstance::build(3, {{1, 2}, {2, 3}}, {0.5, 1, 1}, {3});
    auto c2 = check_assumption1(b);
    CHECK_FALSE(c2.ok);
    CHECK(c2.witness == std::vector<Vertex>{1, 2});

    const auto bad2 = fixture("a2_violation.json").instance;
    CHECK(bad2.assumption1());
    CHECK(bad2.property1());
    auto c3 = check_assumption2(bad2);
    CHECK_FALSE(c3.ok);
    CHECK(c3.witness == std::vector<Vertex>{1, 3});

    const auto six = fixture("six_vertex.json").instance;
    CHECK(six.assumption1());
    CHECK_FALSE(six.property1());
    CHECK(six.assumption2());
    CHECK(code_of([&] { six.require_normalized("test"); }) == ErrorCode::AssumptionViolated);
  }

  TEST_CASE("feasibility test") {
    const auto inst = fixture("twelve_vertex.json").instance;
    Point z(12, 0.0);
    CHECK(in_feasible_set(inst, z, true));
    z[1] = 1;  // z_2 = 1 needs z_3, z_4 >= 1
    CHECK_FALSE(in_feasible_set(inst, z, true));
    z[2] = 1;
    z[3] = 1;
    CHECK(in_feasible_set(inst, z, true));
    z[2] = 1.5;
    z[3] = 1.5;
    CHECK(in_feasible_set(inst, z, false));
    CHECK_FALSE(in_feasible_set(inst, z, true));
    z[2] = 9;
    CHECK_FALSE(in_feasible_set(inst, z, false));
  }

  TEST_CASE("infinite bounds are replaced top-down") {
    const auto inst = fixture("unbounded.json").instance;
    CHECK(inst.has_infinite_bounds());
    auto fin = finitize_bounds(inst);
    CHECK_FALSE(fin.instance.has_infinite_bounds());
    CHECK(fin.defaulted.empty());
    CHECK(fin.instance.upper(2) == 3.0);
    CHECK(fin.instance.upper(3) == 3.0);

    auto root_inf = ForestInstance::build(2, {{1, 2}}, {kInfinity, kInfinity}, {2});
    auto fin2 = finitize_bounds(root_inf, 4.0);
    CHECK(fin2.defaulted == std::vector<Vertex>{1});
    CHECK(fin2.instance.upper(1) == 4.0);
    CHECK(fin2.instance.upper(2) == 4.0);
  }

  TEST_CASE("normalization inserts the integer child") {
    const auto six = fixture("six_vertex.json").instance;
    const auto ext = fixture("seven_vertex_extended.json").instance;
    const auto norm = normalize_property1(six);
    REQUIRE(norm.instance.size() == 7);
    CHECK(norm.inserted == std::vector<std::pair<Vertex, Vertex>>{{1, 7}});
    CHECK(norm.original_of[7] == kNone);
    CHECK(norm.original_of[3] == 3);
    std::set<std::pair<int, int>> got, want;
    for (auto a : norm.instance.arcs()) got.insert({a.from, a.to});
    for (auto a : ext.arcs()) want.insert({a.from, a.to});
    CHECK(got == want);
    CHECK(norm.instance.upper_bounds() == ext.upper_bounds());
    CHECK(norm.instance.integer_vertices() == ext.integer_vertices());
    CHECK(norm.instance.property1());

    Point z{0.2, 1, 3, 3, 4.5, 3};
    auto x = lift_solution(z, norm, six);
    CHECK(x.back() == 1.0);
    CHECK(map_solution_back(x, norm) == z);
    CHECK(code_of([&] { lift_solution(Point{0.2, 0.5, 3, 3, 4, 3}, norm, six); }) ==
          ErrorCode::InfeasibleInput);

    auto h = lift_hull_point(Point{0.1, 0.5, 0.7, 1, 1, 1}, norm);
    CHECK(h.back() == doctest::Approx(0.5));

    auto bad = ForestInstance::build(3, {{1, 2}, {2, 3}}, {0.5, 1.5, 2}, {3});
    CHECK(code_of([&] { normalize_property1(bad); }) == ErrorCode::Assumption1Violated);
  }

  TEST_CASE("lifted oracle ignores inserted coordinates") {
    const auto six = fixture("six_vertex.json").instance;
    auto f = ValueOracle([](std::span<const double> z) { return z[0] + 2 * z[5] + 1; }, 6);
    const auto norm = normalize_property1(six, f);
    CHECK(norm.oracle.dimension() == 7);
    CHECK(norm.oracle(Point{0.2, 0, 0, 0, 0, 1, 1}) == doctest::Approx(2.2));
  }

  TEST_CASE("random instances satisfy the standing assumptions") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 300; ++trial) {
      bruteforce::InstanceOptions o;
      o.vertices = 1 + trial % 10;
      auto inst = bruteforce::random_instance(rng, o);
      CHECK(inst.assumption1());
      CHECK(inst.property1());
      CHECK(inst.assumption2());
      for (Vertex v = 1; v <= inst.size(); ++v)
        if (inst.is_integer(v)) CHECK(is_integral(inst.upper(v)));
    }
  }

  TEST_CASE("subset helpers") {
    VertexSubset s(70, {1, 64, 70});
    CHECK(s.count() == 3);
    CHECK(s.contains(64));
    s.erase(64);
    CHECK(s.to_string() == "{1,70}");
    CHECK(VertexSubset::from_mask(4, 0b1010).members() == std::vector<Vertex>{2, 4});
  }
}
