#include "regression_values.hpp"
#include <atomic>

#include "doctest.h"
#include "sscfl/backend.hpp"
#include "test_helpers.hpp"

using namespace sscfl;

TEST_CASE("lp relaxation of the 1x1 instance") {
  const auto inst = testing::tiny_instance();
  const LpResult r = solve_lp(build_full(inst, true));
  REQUIRE(r.status == LpStatus::Optimal);
  CHECK(r.objective == doctest::Approx(10.0).epsilon(1e-9));
  CHECK(r.y[0] == doctest::Approx(0.4).epsilon(1e-9));
  CHECK(r.x_at(0, 0, 1) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("solve_lp rejects binary models and vice versa") {
  const auto inst = testing::tiny_instance();
  CHECK_THROWS_AS(solve_lp(build_full(inst, false)), SolverError);
  CHECK_THROWS_AS(solve_mip(build_full(inst, true), Budget::unlimited()),
                  SolverError);
}

TEST_CASE("empty keep set yields an infeasible relaxation") {
  const auto inst = testing::tiny_instance();
  const LpResult r = solve_lp(build_full(inst, true).restricted({}, {}));
  CHECK(r.status == LpStatus::Infeasible);
}

TEST_CASE("optimal relaxations satisfy the assignment rows") {
  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    const auto inst = testing::generated(8, 14, 2.0, seed);
    const LpResult r = solve_lp(build_full(inst, true));
    REQUIRE(r.status == LpStatus::Optimal);
    std::vector<double> row(inst->num_customers, 0.0);
    for (const auto& [key, value] : r.x_nonzeros)
      row[key % inst->num_customers] += value;
    for (int j = 0; j < inst->num_customers; ++j)
      CHECK(row[j] == doctest::Approx(1.0).epsilon(1e-7));
  }
}

TEST_CASE("reduced costs of basic variables vanish") {
  const auto inst = testing::generated(6, 12, 2.0, 5);
  const LpResult r = solve_lp(build_full(inst, true), true);
  REQUIRE(r.status == LpStatus::Optimal);
  REQUIRE_FALSE(r.reduced_costs_x.empty());
  for (const auto& [key, value] : r.x_nonzeros) {
    if (value > 1e-7 && value < 1.0 - 1e-7)  // strictly between bounds: basic
      CHECK(std::abs(r.reduced_costs_x[key]) < 1e-7);
  }
}

TEST_CASE("branch and bound solves the 1x1 instance") {
  const auto inst = testing::tiny_instance();
  const MipResult r = solve_exact(*inst, Budget::unlimited());
  REQUIRE(r.status == MipStatus::Optimal);
  CHECK(r.incumbent->objective == doctest::Approx(13.0));
  CHECK(std::abs(r.incumbent->objective - r.bound) <=
        1e-6 * std::max(1.0, std::abs(r.bound)));
}

TEST_CASE("an instance with too little capacity is infeasible") {
  const auto inst = testing::make_instance({5, 5}, {4}, {1}, {{1, 1}});
  const MipResult r = solve_exact(*inst, Budget::unlimited());
  CHECK(r.status == MipStatus::Infeasible);
}

TEST_CASE("regression optimum of the 10x25 seed-7 instance") {
  // Frozen from the exhaustive enumeration oracle (see acceptance suite).
  const auto inst = testing::generated(10, 25, 2.0, 7);
  const MipResult r = solve_exact(*inst, Budget::unlimited());
  REQUIRE(r.status == MipStatus::Optimal);
  CHECK(r.incumbent->objective ==
        doctest::Approx(REGRESSION_10x25_SEED7).epsilon(1e-9));
  CHECK(check_feasible(*inst, *r.incumbent).feasible());
}

TEST_CASE("weak duality on time-limited runs") {
  const auto inst = testing::generated(12, 30, 2.0, 13);
  Budget budget;
  budget.node_limit = 3;
  const MipResult r = solve_mip(build_full(inst, false).with_all_vi_pairs(),
                                budget);
  if (r.incumbent) CHECK(r.bound <= r.incumbent->objective + 1e-9);
}

TEST_CASE("node-limited runs are deterministic") {
  const auto inst = testing::generated(10, 20, 2.0, 21);
  Budget budget;
  budget.node_limit = 25;
  const ModelSpec spec = build_full(inst, false).with_all_vi_pairs();
  const MipResult a = solve_mip(spec, budget);
  const MipResult b = solve_mip(spec, budget);
  CHECK(a.nodes == b.nodes);
  CHECK(a.status == b.status);
  CHECK(a.bound == b.bound);
  CHECK(a.incumbent.has_value() == b.incumbent.has_value());
  if (a.incumbent) CHECK(a.incumbent->objective == b.incumbent->objective);
}

TEST_CASE("stop signal cancels at a node boundary") {
  const auto inst = testing::generated(12, 30, 2.0, 43);
  std::atomic<bool> stop{true};
  Budget budget;
  budget.stop = &stop;
  const MipResult r = solve_mip(build_full(inst, false), budget);
  CHECK((r.status == MipStatus::NoSolutionTimeLimit ||
         r.status == MipStatus::FeasibleTimeLimit));
}

TEST_CASE("exact backend matches exhaustive enumeration on small instances") {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const auto inst = testing::generated(8, 16, seed % 2 ? 5.0 : 2.0, 100 + seed);
    const MipResult fast = solve_exact(*inst, Budget::unlimited());
    const MipResult slow = testing::enumerate_exact(*inst);
    REQUIRE(fast.status == MipStatus::Optimal);
    REQUIRE(slow.status == MipStatus::Optimal);
    CHECK(fast.incumbent->objective ==
          doctest::Approx(slow.incumbent->objective).epsilon(1e-9));
  }
}
