#include <algorithm>
#include <numeric>
#include <set>

#include "drsub/bruteforce.hpp"
#include "drsub/hull.hpp"
#include "drsub/perm.hpp"
#include "helpers.hpp"

using namespace drsub;
using perm::Permutation;
using testing::code_of;
using testing::fixture;

namespace {

const Permutation kDelta({6, 4, 7, 5, 2, 3, 9, 1, 11, 8, 10, 12});

}  // namespace

TEST_SUITE("perm") {
  TEST_CASE("prefix points of the twelve-vertex example") {
    const auto inst = fixture("twelve_vertex.json").instance;
    const std::vector<Point> table{
        {0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0},
        {0, 0, 0, 0, 0, 9, 0, 0, 0, 0, 0, 0},
        {0, 0, 0, 8, 0, 9, 0, 0, 0, 0, 0, 0},
        {0, 0, 0, 8, 0, 9, 12, 0, 0, 0, 0, 12},
        {0, 0, 0, 8, 11.75, 9, 12, 0, 0, 0, 0, 12},
        {0, 1, 1, 8, 11.75, 9, 12, 0, 0, 0, 0, 12},
        {0, 1, 8, 8, 11.75, 9, 12, 0, 0, 0, 0, 12},
        {0, 1, 8, 8, 11.75, 9, 12, 0, 10, 10, 10, 12},
        {0.1, 1, 8, 8, 11.75, 9, 12, 0, 10, 10, 10, 12},
        {0.1, 1, 8, 8, 11.75, 9, 12, 0, 10, 10, 11, 12},
        {0.1, 1, 8, 8, 11.75, 9, 12, 10, 10, 10, 11, 12},
        {0.1, 1, 8, 8, 11.75, 9, 12, 10, 10.5, 11, 11, 12},
        {0.1, 1, 8, 8, 11.75, 9, 12, 10, 10.5, 11, 11, 19.9}};
    const auto pts = perm::prefix_points(inst, kDelta);
    REQUIRE(pts.size() == 13);
    for (int k = 0; k <= 12; ++k) CHECK(testing::max_abs_diff(pts[k], table[k]) <= 1e-12);
  }

  TEST_CASE("t-values match the closed forms") {
    const auto inst = fixture("twelve_vertex.json").instance;
    std::mt19937_64 rng(2);
    for (int trial = 0; trial < 20; ++trial) {
      const Point z = bruteforce::random_hull_point(inst, rng, 4);
      auto Z = [&](int i) { return z[i - 1]; };
      const std::vector<double> want{Z(6) / 9,
                                     Z(4) / 8,
                                     Z(7) / 12,
                                     Z(5) / 11.75,
                                     Z(2),
                                     (Z(3) - Z(2)) / 7,
                                     (Z(9) - 0.5 * Z(10)) / 5,
                                     10 * Z(1),
                                     Z(11) - 2 * Z(9) + Z(10),
                                     Z(8) / 10,
                                     2 * Z(10) - 2 * Z(9),
                                     (Z(12) - Z(7)) / 7.9};
      CHECK(testing::max_abs_diff(perm::t_vector(inst, kDelta, z), want) <= 1e-10);
      CHECK(perm::eta(inst, 9, z) == doctest::Approx(2 * Z(9) - Z(10)));
      const auto rows = perm::t_rows(inst, kDelta);
      for (int k = 0; k < 12; ++k) CHECK(std::abs(rows[k].dot(z) - want[k]) <= 1e-10);
    }
  }

  TEST_CASE("validity conditions") {
    const auto inst = fixture("twelve_vertex.json").instance;
    Permutation tau({1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12});
    auto v = perm::is_valid_permutation(inst, tau);
    CHECK_FALSE(v.valid);
    CHECK(v.violated == std::vector<int>{1, 2, 3});
    CHECK(perm::is_valid_permutation(inst, kDelta).valid);
  }

  TEST_CASE("backtracking enumeration equals filtering all orderings") {
    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 40; ++trial) {
      bruteforce::InstanceOptions o;
      o.vertices = 2 + trial % 5;
      o.max_vertices = 7;
      const auto inst = bruteforce::random_instance(rng, o);
      std::vector<Vertex> order(inst.size());
      std::iota(order.begin(), order.end(), 1);
      std::set<std::vector<Vertex>> filtered, enumerated;
      do {
        if (perm::is_valid_permutation(inst, Permutation(order)).valid) filtered.insert(order);
      } while (std::next_permutation(order.begin(), order.end()));
      for (const auto& p : perm::enumerate_valid_permutations(inst)) enumerated.insert(p.order());
      CHECK(filtered == enumerated);
      CHECK_FALSE(filtered.empty());
    }
  }

  TEST_CASE("T and D are inverse") {
    std::mt19937_64 rng(43);
    for (int trial = 0; trial < 60; ++trial) {
      bruteforce::InstanceOptions o;
      o.vertices = 1 + trial % 8;
      o.max_vertices = 8;
      const auto inst = bruteforce::random_instance(rng, o);
      const auto delta = perm::random_valid_permutation(inst, rng);
      CHECK(perm::is_valid_permutation(inst, delta).valid);
      const auto T = perm::t_matrix(inst, delta);
      const auto D = perm::d_matrix(inst, delta);
      const auto I = Eigen::MatrixXd::Identity(inst.size(), inst.size());
      CHECK((T * D - I).cwiseAbs().maxCoeff() <= 1e-9);
      CHECK((D * T - I).cwiseAbs().maxCoeff() <= 1e-9);
    }
  }

  TEST_CASE("direct and sparse t agree on random valid permutations") {
    std::mt19937_64 rng(47);
    for (int trial = 0; trial < 100; ++trial) {
      bruteforce::InstanceOptions o;
      o.vertices = 1 + trial % 12;
      const auto inst = bruteforce::random_instance(rng, o);
      const auto delta = perm::random_valid_permutation(inst, rng);
      const Point z = bruteforce::random_hull_point(inst, rng);
      const auto direct = perm::t_vector(inst, delta, z);
      const auto rows = perm::t_rows(inst, delta);
      for (int k = 0; k < inst.size(); ++k) CHECK(std::abs(rows[k].dot(z) - direct[k]) <= 1e-10);
    }
  }

  TEST_CASE("decomposition of hull points") {
    std::mt19937_64 rng(53);
    for (int trial = 0; trial < 200; ++trial) {
      bruteforce::InstanceOptions o;
      o.vertices = 1 + trial % 12;
      const auto inst = bruteforce::random_instance(rng, o);
      const Point z = bruteforce::random_hull_point(inst, rng, 1 + trial % 4);
      const auto dec = perm::decompose(inst, z);
      const int n = inst.size();
      CHECK(perm::is_valid_permutation(inst, dec.perm).valid);
      double sum = 0.0;
      for (double l : dec.lambda) {
        CHECK(l >= -1e-9);
        sum += l;
      }
      CHECK(std::abs(sum - 1.0) <= 1e-9);
      CHECK(dec.residual <= 1e-9);
      Point back(n, 0.0);
      for (int k = 0; k <= n; ++k)
        for (int i = 0; i < n; ++i) back[i] += dec.lambda[k] * dec.points[k][i];
      CHECK(testing::max_abs_diff(back, z) <= 1e-9);
      CHECK(dec.t.front() <= 1 + 1e-9);
      CHECK(dec.t.back() >= -1e-9);
      for (int k = 1; k < n; ++k) CHECK(dec.t[k] <= dec.t[k - 1] + 1e-9);
    }
  }

  TEST_CASE("extreme points decompose onto themselves") {
    const auto inst = fixture("twelve_vertex.json").instance;
    const Point p = hull::extreme_point(inst, VertexSubset(12, {2, 9, 7}));
    const auto dec = perm::decompose(inst, p);
    int hits = 0;
    for (int k = 0; k <= 12; ++k)
      if (dec.lambda[k] > 1e-12) {
        ++hits;
        CHECK(dec.lambda[k] == doctest::Approx(1.0));
        CHECK(testing::max_abs_diff(dec.points[k], p) <= 1e-12);
      }
    CHECK(hits == 1);
  }

  TEST_CASE("binary instances order by descending value") {
    std::mt19937_64 rng(59);
    std::uniform_real_distribution<double> unit(0, 1);
    for (int trial = 0; trial < 50; ++trial) {
      const int n = 2 + trial % 9;
      std::vector<Vertex> ints(n);
      std::iota(ints.begin(), ints.end(), 1);
      const auto inst = ForestInstance::build(n, {}, std::vector<double>(n, 1.0), ints);
      Point z(n);
      for (double& x : z) x = std::round(unit(rng) * 8) / 8;
      std::vector<Vertex> want = ints;
      std::stable_sort(want.begin(), want.end(),
                       [&](Vertex a, Vertex b) { return z[a - 1] > z[b - 1]; });
      CHECK(perm::permutation_finder(inst, z).order() == want);
    }
  }

  TEST_CASE("errors") {
    const auto inst = fixture("twelve_vertex.json").instance;
    CHECK(code_of([] { Permutation({1, 1, 2}); }) == ErrorCode::NotAPermutation);
    CHECK(code_of([] { Permutation({1, 3}); }) == ErrorCode::NotAPermutation);
    CHECK(code_of([&] {
            perm::t_rows(inst, Permutation({1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12}));
          }) == ErrorCode::InvalidPermutation);
    const std::vector<Vertex> bad_prefix{1};
    CHECK(code_of([&] { perm::valid_candidates(inst, bad_prefix); }) == ErrorCode::InvalidPartial);
    CHECK(code_of([&] { perm::t_value(inst, bad_prefix, 1, Point(12, 0.0)); }) ==
          ErrorCode::InvalidPrefix);
    Point outside(12, 0.0);
    outside[0] = 0.05;
    outside[1] = outside[2] = outside[3] = 0.4;
    CHECK(code_of([&] { perm::permutation_finder(inst, outside); }) == ErrorCode::NotInHull);
    CHECK(code_of([&] { perm::enumerate_valid_permutations(inst); }) == ErrorCode::TooLarge);
  }
}
