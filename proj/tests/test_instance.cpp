#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "sscfl/generator.hpp"
#include "sscfl/instance.hpp"
#include "sscfl/instance_io.hpp"
#include "sscfl/random.hpp"
#include "test_helpers.hpp"

using namespace sscfl;

namespace {

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  out << text;
}

}  // namespace

TEST_CASE("native json round trip is exact") {
  const auto inst = testing::generated(6, 11, 3.0, 42);
  const std::string path = temp_path("sscfl_roundtrip.json");
  save_instance(*inst, path);
  const Instance back = load_instance(path, FileFormat::NativeJson);
  CHECK(back.name == inst->name);
  CHECK(back.demand == inst->demand);
  CHECK(back.capacity == inst->capacity);
  CHECK(back.fixed_cost == inst->fixed_cost);
  CHECK(back.unit_cost == inst->unit_cost);
  std::remove(path.c_str());
}

TEST_CASE("native json with two locations and three customers") {
  const std::string path = temp_path("sscfl_native.json");
  write_text(path, R"({
    "name": "mini",
    "capacities": [10, 12],
    "fixed_costs": [3, 4],
    "demands": [2, 5, 1],
    "unit_costs": [[1, 2, 3], [4, 5, 6]]
  })");
  const Instance inst = load_instance(path, FileFormat::NativeJson);
  CHECK(inst.num_locations == 2);
  CHECK(inst.num_customers == 3);
  CHECK(inst.cost(1, 2) == 6.0);
  std::remove(path.c_str());
}

TEST_CASE("zero demand is rejected with the customer index") {
  const std::string path = temp_path("sscfl_bad.json");
  write_text(path, R"({
    "name": "bad",
    "capacities": [10],
    "fixed_costs": [3],
    "demands": [2, 0],
    "unit_costs": [[1, 2]]
  })");
  CHECK_THROWS_WITH_AS(load_instance(path, FileFormat::NativeJson),
                       doctest::Contains("customer 1"), DataError);
  std::remove(path.c_str());
}

TEST_CASE("orlib costs are per-customer totals and are normalized") {
  // 2x2, demands 4 and 5; the file stores d_j * c_ij.
  const std::string path = temp_path("sscfl_orlib.txt");
  write_text(path,
             "2 2\n"
             "10 7.5\n"
             "12 9\n"
             "4 8 12\n"
             "5 10 35\n");
  const Instance inst = load_instance(path, FileFormat::OrlibCap);
  CHECK(inst.capacity == std::vector<double>{10, 12});
  CHECK(inst.fixed_cost == std::vector<double>{7.5, 9});
  CHECK(inst.cost(0, 0) == doctest::Approx(8.0 / 4).epsilon(1e-12));
  CHECK(inst.cost(1, 0) == doctest::Approx(12.0 / 4).epsilon(1e-12));
  CHECK(inst.cost(0, 1) == doctest::Approx(10.0 / 5).epsilon(1e-12));
  CHECK(inst.cost(1, 1) == doctest::Approx(35.0 / 5).epsilon(1e-12));
  std::remove(path.c_str());
}

TEST_CASE("testbed format reads per-unit costs directly") {
  const std::string path = temp_path("sscfl_avella.txt");
  write_text(path,
             "3 2\n"        // customers locations
             "4 5 6\n"      // demands
             "20 30\n"      // capacities
             "7 8\n"        // fixed costs
             "1 2 3\n"      // costs of location 0
             "4 5 6\n");    // costs of location 1
  const Instance inst = load_instance(path, FileFormat::AvellaTxt);
  CHECK(inst.num_locations == 2);
  CHECK(inst.num_customers == 3);
  CHECK(inst.demand == std::vector<double>{4, 5, 6});
  CHECK(inst.cost(1, 0) == 4.0);
  std::remove(path.c_str());
}

TEST_CASE("capacity demand ratio") {
  const auto inst = testing::make_instance({4, 3, 3, 5}, {10, 10}, {1, 1},
                                           {{0, 0, 0, 0}, {0, 0, 0, 0}});
  CHECK(inst->capacity_demand_ratio() == doctest::Approx(20.0 / 15).epsilon(1e-12));

  const auto balanced = testing::make_instance({2, 3}, {2, 3}, {1, 1},
                                               {{0, 0}, {0, 0}});
  CHECK(balanced->capacity_demand_ratio() == doctest::Approx(1.0));
}

TEST_CASE("generator is deterministic and hits the target ratio") {
  GeneratorConfig cfg;
  cfg.num_locations = 8;
  cfg.num_customers = 20;
  cfg.target_ratio = 5.0;
  cfg.seed = 123;
  const Instance a = generate(cfg);
  const Instance b = generate(cfg);
  CHECK(instance_to_json(a) == instance_to_json(b));
  CHECK(a.capacity_demand_ratio() == doctest::Approx(5.0).epsilon(1e-7));
  for (double d : a.demand) CHECK(d == std::floor(d));
  for (double q : a.capacity) CHECK(q == std::floor(q));

  cfg.seed = 124;
  const Instance c = generate(cfg);
  CHECK(instance_to_json(a) != instance_to_json(c));
}

TEST_CASE("generator rejects a ratio at or below one") {
  GeneratorConfig cfg;
  cfg.target_ratio = 1.0;
  CHECK_THROWS_AS(generate(cfg), DataError);
}

TEST_CASE("generated capacity covers the scaled demand") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    GeneratorConfig cfg;
    cfg.num_locations = 7;
    cfg.num_customers = 19;
    cfg.target_ratio = 2.0;
    cfg.seed = seed;
    const Instance inst = generate(cfg);
    CHECK(inst.total_capacity() >=
          cfg.target_ratio * inst.total_demand() - 1e-6 * inst.total_demand());
  }
}

TEST_CASE("check_feasible reports constructed violations") {
  const auto inst = testing::make_instance(
      {6, 5}, {10, 10}, {3, 4}, {{1, 1}, {2, 2}}, "check");

  BinarySolution ok;
  ok.open = {true, false};
  ok.assign = {0, 0};  // loads 11 > 10: capacity violation of 1
  ok.objective = 3 + 6 * 1 + 5 * 1;

  SUBCASE("capacity excess with amount") {
    auto report = check_feasible(*inst, ok);
    REQUIRE(report.violations.size() == 1);
    CHECK(report.violations[0].kind == ViolationKind::CapacityExceeded);
    CHECK(report.violations[0].index == 0);
    CHECK(report.violations[0].amount == doctest::Approx(1.0));
  }

  SUBCASE("objective mismatch beyond the relative tolerance") {
    BinarySolution sol;
    sol.open = {true, true};
    sol.assign = {0, 1};
    sol.objective = (3 + 4 + 6 * 1 + 5 * 2) * 1.01;
    auto report = check_feasible(*inst, sol);
    REQUIRE(report.violations.size() == 1);
    CHECK(report.violations[0].kind == ViolationKind::ObjectiveMismatch);
  }

  SUBCASE("closed location and unassigned customer") {
    BinarySolution sol;
    sol.open = {false, true};
    sol.assign = {0, -1};
    sol.objective = 0;
    auto report = check_feasible(*inst, sol);
    bool closed = false, unassigned = false;
    for (const auto& v : report.violations) {
      closed |= v.kind == ViolationKind::ClosedLocationAssignment;
      unassigned |= v.kind == ViolationKind::UnassignedCustomer;
    }
    CHECK(closed);
    CHECK(unassigned);
  }
}

TEST_CASE("check_feasible agrees with a brute-force re-evaluation") {
  const auto inst = testing::generated(10, 20, 2.0, 7);
  Rng rng(99);
  for (int trial = 0; trial < 200; ++trial) {
    BinarySolution sol;
    sol.open.assign(inst->num_locations, false);
    for (int i = 0; i < inst->num_locations; ++i)
      sol.open[i] = rng.next_double() < 0.5;
    sol.assign.assign(inst->num_customers, -1);
    for (int j = 0; j < inst->num_customers; ++j)
      sol.assign[j] =
          static_cast<int>(rng.next_int(0, inst->num_locations - 1));
    sol.objective = sol.evaluate(*inst);
    if (rng.next_double() < 0.3) sol.objective *= 1.05;

    // Direct constraint re-evaluation.
    bool brute_ok = true;
    std::vector<double> load(inst->num_locations, 0.0);
    for (int j = 0; j < inst->num_customers; ++j) {
      const int i = sol.assign[j];
      if (i < 0) {
        brute_ok = false;
        continue;
      }
      if (!sol.open[i]) brute_ok = false;
      load[i] += inst->demand[j];
    }
    for (int i = 0; i < inst->num_locations; ++i)
      if (load[i] > inst->capacity[i]) brute_ok = false;
    if (std::abs(sol.objective - sol.evaluate(*inst)) >
        1e-6 * std::max(1.0, sol.evaluate(*inst)))
      brute_ok = false;

    CHECK(check_feasible(*inst, sol).feasible() == brute_ok);
  }
}

TEST_CASE("solution files round trip") {
  BinarySolution sol;
  sol.open = {true, false, true};
  sol.assign = {2, 0, 0, 2};
  sol.objective = 123.5;
  const std::string path = temp_path("sscfl_sol.json");
  save_solution(sol, path);
  const BinarySolution back = load_solution(path);
  CHECK(back.open == sol.open);
  CHECK(back.assign == sol.assign);
  CHECK(back.objective == sol.objective);
  std::remove(path.c_str());
}
