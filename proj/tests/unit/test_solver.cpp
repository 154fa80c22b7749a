#include <bit>

#include "drsub/bruteforce.hpp"
#include "drsub/normalize.hpp"
#include "drsub/solver.hpp"
#include "helpers.hpp"

using namespace drsub;
using testing::code_of;
using testing::fixture;

TEST_SUITE("solver") {
  TEST_CASE("two-variable quadratic") {
    const auto file = fixture("two_var_quadratic.json");
    const auto f = file.objective->oracle(2);
    const auto brute = bruteforce::min_over_extreme_points(file.instance, f);
    CHECK(brute.value == doctest::Approx(-600));
    const auto rep = solver::minimize(file.instance, f);
    CHECK(rep.status == solver::Status::Optimal);
    CHECK(rep.value == doctest::Approx(-600).epsilon(1e-12));
    CHECK(rep.z == Point{10, 10});
    CHECK(rep.bound <= rep.value + 1e-7);
  }

  TEST_CASE("zero objective stops after one master solve") {
    const auto inst = fixture("twelve_vertex.json").instance;
    const auto rep = solver::minimize(inst, ValueOracle::zero(12));
    CHECK(rep.value == 0.0);
    CHECK(rep.z == Point(12, 0.0));
    CHECK(rep.iterations == 1);
    CHECK(rep.cuts == 1);
  }

  TEST_CASE("random DR quadratics match exhaustive search") {
    std::mt19937_64 rng(79);
    for (int trial = 0; trial < 40; ++trial) {
      bruteforce::InstanceOptions o;
      o.vertices = 1 + trial % 9;
      o.max_vertices = 10;
      const auto inst = bruteforce::random_instance(rng, o);
      const auto f = ValueOracle::quadratic(bruteforce::random_dr_quadratic(rng, inst.size()));
      solver::Options opts;
      opts.seed = trial % 2 ? solver::SeedPoint::Upper : solver::SeedPoint::Zero;
      const auto rep = solver::minimize(inst, f, opts);
      const auto brute = bruteforce::min_over_extreme_points(inst, f);
      CHECK(std::abs(rep.value - brute.value) <= 1e-6);
      CHECK(in_feasible_set(inst, rep.z, true, 0.0));
      CHECK(rep.value <= rep.bound + 1e-7 + 1e-9 * std::abs(rep.bound));
      for (std::size_t k = 1; k < rep.bound_history.size(); ++k)
        CHECK(rep.bound_history[k] >= rep.bound_history[k - 1] - 1e-9);
    }
  }

  TEST_CASE("normalization is handled internally") {
    const auto six = fixture("six_vertex.json").instance;
    std::mt19937_64 rng(83);
    for (int trial = 0; trial < 10; ++trial) {
      const auto f = ValueOracle::quadratic(bruteforce::random_dr_quadratic(rng, 6));
      const auto rep = solver::minimize(six, f);
      REQUIRE(rep.z.size() == 6);
      CHECK(rep.inserted_vertices == 1);
      CHECK(in_feasible_set(six, rep.z, true, 0.0));
      const auto norm = normalize_property1(six, f);
      const auto brute = bruteforce::min_over_extreme_points(norm.instance, norm.oracle);
      CHECK(std::abs(rep.value - brute.value) <= 1e-6);
    }
  }

  TEST_CASE("set functions") {
    auto card = [](const std::vector<int>& S) { return double(S.size()); };
    auto r1 = solver::minimize_set_function(card, 5);
    CHECK(r1.members.empty());
    CHECK(r1.value == 0.0);
    auto neg = [](const std::vector<int>& S) { return -double(S.size()); };
    auto r2 = solver::minimize_set_function(neg, 5);
    CHECK(r2.members == std::vector<int>{1, 2, 3, 4, 5});
    CHECK(r2.value == -5.0);

    // Weighted coverage minus modular costs.
    std::mt19937_64 rng(89);
    std::uniform_real_distribution<double> unit(0, 1);
    for (int trial = 0; trial < 15; ++trial) {
      const int n = 3 + trial % 8;
      std::vector<std::uint32_t> covers(n);
      std::vector<double> weight(16), cost(n);
      for (auto& c : covers) c = static_cast<std::uint32_t>(rng() & 0xFFFF);
      for (auto& w : weight) w = unit(rng);
      for (auto& c : cost) c = 2.5 * unit(rng);
      auto f = [&](const std::vector<int>& S) {
        std::uint32_t mask = 0;
        double v = 0;
        for (int i : S) {
          mask |= covers[i - 1];
          v -= cost[i - 1];
        }
        for (int b = 0; b < 16; ++b)
          if (mask >> b & 1) v += weight[b];
        return v;
      };
      double best = 0;
      for (std::uint32_t m = 0; m < (1u << n); ++m) {
        std::vector<int> S;
        for (int i = 0; i < n; ++i)
          if (m >> i & 1) S.push_back(i + 1);
        best = std::min(best, f(S));
      }
      auto r = solver::minimize_set_function(f, n);
      CHECK(r.value == doctest::Approx(best).epsilon(1e-9));
      CHECK(f(r.members) == doctest::Approx(r.value));
    }
  }

  TEST_CASE("assumption failures and degraded mode") {
    const auto file = fixture("a2_violation.json");
    const auto f = file.objective->oracle(3);
    CHECK(code_of([&] { solver::minimize(file.instance, f); }) == ErrorCode::AssumptionViolated);
    solver::Options o;
    o.allow_degraded = true;
    const auto rep = solver::minimize(file.instance, f, o);
    CHECK(rep.status == solver::Status::BoundOnly);
    CHECK(rep.relaxed == std::vector<Vertex>{1});
    REQUIRE(rep.upper_bound.has_value());
    CHECK(in_feasible_set(file.instance, rep.z, true, 0.0));
    CHECK(rep.bound <= *rep.upper_bound + 1e-9);
    // Every lattice point of the original is at least the bound.
    const auto lattice = bruteforce::min_over_lattice(file.instance, f, 0.125);
    CHECK(lattice.value + f.base_value() >= rep.bound - 1e-7);
    CHECK(rep.value <= lattice.value + f.base_value() + 1e-7);

    auto inf = ForestInstance::build(1, {}, {kInfinity}, {});
    CHECK(code_of([&] { solver::minimize(inf, ValueOracle::zero(1)); }) ==
          ErrorCode::AssumptionViolated);
  }

  TEST_CASE("optional checks and limits") {
    const auto inst = ForestInstance::build(2, {}, {3, 3}, {1, 2});
    QuadraticSpec bad{Eigen::MatrixXd::Zero(2, 2), Eigen::VectorXd::Constant(2, -1.0)};
    bad.Q(0, 1) = bad.Q(1, 0) = 1.0;
    solver::Options o;
    o.check_dr = true;
    CHECK(code_of([&] { solver::minimize(inst, ValueOracle::quadratic(bad), o); }) ==
          ErrorCode::NonDRSubmodularDetected);

    const auto file = fixture("two_var_quadratic.json");
    solver::Options capped;
    capped.max_iterations = 1;
    CHECK(code_of([&] { solver::minimize(file.instance, file.objective->oracle(2), capped); }) ==
          ErrorCode::IterationLimit);
  }

  TEST_CASE("recorded cuts are valid") {
    std::mt19937_64 rng(97);
    for (int trial = 0; trial < 10; ++trial) {
      bruteforce::InstanceOptions io;
      io.vertices = 2 + trial % 6;
      io.max_vertices = 8;
      const auto inst = bruteforce::random_instance(rng, io);
      const auto f = ValueOracle::quadratic(bruteforce::random_dr_quadratic(rng, inst.size()));
      solver::Options o;
      o.record_cuts = true;
      const auto rep = solver::minimize(inst, f, o);
      CHECK(static_cast<int>(rep.cut_pool.size()) == rep.cuts);
      for (const auto& cut : rep.cut_pool) CHECK(cuts::validate_cut_on_extremes(inst, f, cut).valid);
    }
  }
}
