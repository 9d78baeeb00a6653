#include "sscfl/instance.hpp"

#include <cmath>
#include <cstddef>

namespace sscfl {

namespace {
constexpr double kObjectiveRelTol = 1e-6;
constexpr double kCapacityTol = 1e-6;
}  // namespace

void Instance::validate() const {
  if (num_locations <= 0) throw DataError("instance has no locations");
  if (num_customers <= 0) throw DataError("instance has no customers");
  auto check_size = [&](std::size_t got, std::size_t want, const char* what) {
    if (got != want)
      throw DataError(std::string(what) + " has size " + std::to_string(got) +
                      ", expected " + std::to_string(want));
  };
  check_size(demand.size(), static_cast<std::size_t>(num_customers), "demand");
  check_size(capacity.size(), static_cast<std::size_t>(num_locations),
             "capacity");
  check_size(fixed_cost.size(), static_cast<std::size_t>(num_locations),
             "fixed_cost");
  check_size(unit_cost.size(),
             static_cast<std::size_t>(num_locations) * num_customers,
             "unit_cost");
  for (int j = 0; j < num_customers; ++j) {
    if (!(demand[j] > 0.0))
      throw DataError("demand of customer " + std::to_string(j) +
                      " is not positive");
  }
  for (int i = 0; i < num_locations; ++i) {
    if (!(capacity[i] > 0.0))
      throw DataError("capacity of location " + std::to_string(i) +
                      " is not positive");
    if (!(fixed_cost[i] > 0.0))
      throw DataError("fixed cost of location " + std::to_string(i) +
                      " is not positive");
  }
  for (int i = 0; i < num_locations; ++i)
    for (int j = 0; j < num_customers; ++j)
      if (!(cost(i, j) >= 0.0))
        throw DataError("unit cost (" + std::to_string(i) + ", " +
                        std::to_string(j) + ") is negative");
}

double Instance::total_demand() const {
  double s = 0.0;
  for (double d : demand) s += d;
  return s;
}

double Instance::total_capacity() const {
  double s = 0.0;
  for (double q : capacity) s += q;
  return s;
}

double Instance::capacity_demand_ratio() const {
  return total_capacity() / total_demand();
}

double BinarySolution::evaluate(const Instance& inst) const {
  double z = 0.0;
  for (int i = 0; i < inst.num_locations; ++i)
    if (open[i]) z += inst.fixed_cost[i];
  for (int j = 0; j < inst.num_customers; ++j) {
    const int i = assign[j];
    if (i >= 0) z += inst.demand[j] * inst.cost(i, j);
  }
  return z;
}

FeasibilityReport check_feasible(const Instance& inst,
                                 const BinarySolution& sol) {
  if (static_cast<int>(sol.open.size()) != inst.num_locations ||
      static_cast<int>(sol.assign.size()) != inst.num_customers)
    throw DataError("solution dimensions do not match instance");

  FeasibilityReport report;
  std::vector<double> load(inst.num_locations, 0.0);
  for (int j = 0; j < inst.num_customers; ++j) {
    const int i = sol.assign[j];
    if (i < 0 || i >= inst.num_locations) {
      report.violations.push_back({ViolationKind::UnassignedCustomer, j, 0.0,
                                   "customer " + std::to_string(j) +
                                       " is not assigned to any location"});
      continue;
    }
    load[i] += inst.demand[j];
    if (!sol.open[i])
      report.violations.push_back(
          {ViolationKind::ClosedLocationAssignment, j, 0.0,
           "customer " + std::to_string(j) + " assigned to closed location " +
               std::to_string(i)});
  }
  for (int i = 0; i < inst.num_locations; ++i) {
    const double excess = load[i] - inst.capacity[i];
    if (excess > kCapacityTol * std::max(1.0, inst.capacity[i]))
      report.violations.push_back(
          {ViolationKind::CapacityExceeded, i, excess,
           "location " + std::to_string(i) + " exceeds capacity by " +
               std::to_string(excess)});
  }
  const double computed = sol.evaluate(inst);
  const double delta = std::abs(sol.objective - computed);
  if (delta > kObjectiveRelTol * std::max(1.0, std::abs(computed)))
    report.violations.push_back(
        {ViolationKind::ObjectiveMismatch, -1, sol.objective - computed,
         "stated objective " + std::to_string(sol.objective) +
             " differs from recomputed " + std::to_string(computed)});
  return report;
}

}  // namespace sscfl
