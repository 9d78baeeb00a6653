#pragma once

#include <memory>
#include <vector>

#include "sscfl/backend.hpp"
#include "sscfl/generator.hpp"
#include "sscfl/instance.hpp"
#include "sscfl/model.hpp"

namespace sscfl::testing {

inline std::shared_ptr<const Instance> make_instance(
    std::vector<double> demand, std::vector<double> capacity,
    std::vector<double> fixed_cost, std::vector<std::vector<double>> cost,
    std::string name = "test") {
  auto inst = std::make_shared<Instance>();
  inst->name = std::move(name);
  inst->num_locations = static_cast<int>(capacity.size());
  inst->num_customers = static_cast<int>(demand.size());
  inst->demand = std::move(demand);
  inst->capacity = std::move(capacity);
  inst->fixed_cost = std::move(fixed_cost);
  for (const auto& row : cost)
    inst->unit_cost.insert(inst->unit_cost.end(), row.begin(), row.end());
  inst->validate();
  return inst;
}

// The 1x1 workhorse: f=5, q=10, d=4, c=2. Binary optimum 13, relaxed 10.
inline std::shared_ptr<const Instance> tiny_instance() {
  return make_instance({4.0}, {10.0}, {5.0}, {{2.0}}, "tiny");
}

inline std::shared_ptr<const Instance> generated(int locations, int customers,
                                                 double ratio,
                                                 std::uint64_t seed) {
  GeneratorConfig cfg;
  cfg.num_locations = locations;
  cfg.num_customers = customers;
  cfg.target_ratio = ratio;
  cfg.seed = seed;
  return std::make_shared<Instance>(generate(cfg));
}

// Exhaustive reference: enumerate every open set; the assignment subproblem
// for a fixed open set is solved through the backend on a zero-fixed-cost
// copy whose min-open constraint pins every kept location open. Independent
// of the branch-and-bound path over the y variables.
inline MipResult enumerate_exact(const Instance& inst) {
  const int m = inst.num_locations;
  const double total_demand = inst.total_demand();
  MipResult best;
  best.status = MipStatus::Infeasible;
  best.bound = std::numeric_limits<double>::infinity();

  for (unsigned mask = 1; mask < (1u << m); ++mask) {
    double fixed = 0.0, capacity = 0.0;
    std::vector<int> open_set;
    for (int i = 0; i < m; ++i) {
      if (mask & (1u << i)) {
        fixed += inst.fixed_cost[i];
        capacity += inst.capacity[i];
        open_set.push_back(i);
      }
    }
    if (capacity < total_demand) continue;
    if (best.incumbent && fixed >= best.incumbent->objective) continue;

    auto sub = std::make_shared<Instance>(inst);
    sub->name = inst.name + "_sub";
    sub->num_locations = static_cast<int>(open_set.size());
    sub->capacity.clear();
    sub->fixed_cost.clear();
    sub->unit_cost.clear();
    for (int i : open_set) {
      sub->capacity.push_back(inst.capacity[i]);
      sub->fixed_cost.push_back(1.0);  // constant; paid via min_open below
      for (int j = 0; j < inst.num_customers; ++j)
        sub->unit_cost.push_back(inst.cost(i, j));
    }
    const ModelSpec assignment =
        build_full(sub, /*relaxed=*/false)
            .with_all_vi_pairs()
            .with_min_open(static_cast<double>(open_set.size()));
    const MipResult r = solve_mip(assignment, Budget::unlimited());
    if (r.status != MipStatus::Optimal) continue;
    const double assign_cost =
        r.incumbent->objective - static_cast<double>(open_set.size());
    const double total = fixed + assign_cost;
    if (!best.incumbent || total < best.incumbent->objective) {
      BinarySolution sol;
      sol.open.assign(m, false);
      for (int i : open_set) sol.open[i] = true;
      sol.assign.assign(inst.num_customers, -1);
      for (int j = 0; j < inst.num_customers; ++j)
        sol.assign[j] = open_set[r.incumbent->assign[j]];
      sol.objective = sol.evaluate(inst);
      best.incumbent = std::move(sol);
      best.status = MipStatus::Optimal;
      best.bound = best.incumbent->objective;
    }
  }
  return best;
}

}  // namespace sscfl::testing
