#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace sscfl {

/// Error thrown on invalid data or unparsable files. `what()` carries a
/// line/field diagnostic where one is available.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A single-source capacitated facility location instance.
///
/// Costs are stored per demand unit: serving customer j from location i costs
/// demand[j] * unit_cost(i, j). File formats that store total assignment
/// costs are normalized at parse time.
struct Instance {
  std::string name;
  int num_locations = 0;
  int num_customers = 0;
  std::vector<double> demand;      // per customer, > 0
  std::vector<double> capacity;    // per location, > 0
  std::vector<double> fixed_cost;  // per location, > 0
  std::vector<double> unit_cost;   // row-major (location, customer), >= 0

  double cost(int location, int customer) const {
    return unit_cost[static_cast<std::size_t>(location) * num_customers +
                     customer];
  }

  /// Throws DataError naming the offending index on any violated assumption.
  void validate() const;

  /// Total capacity over total demand (rho).
  double capacity_demand_ratio() const;

  double total_demand() const;
  double total_capacity() const;
};

/// An integer solution: open locations plus one serving location per
/// customer. `assign[j] == -1` marks an unassigned customer so that corrupt
/// solution files can still be represented and reported on.
struct BinarySolution {
  std::vector<bool> open;  // per location
  std::vector<int> assign;  // per customer, serving location or -1
  double objective = 0.0;

  /// Objective recomputed from instance data.
  double evaluate(const Instance& inst) const;
};

enum class ViolationKind {
  UnassignedCustomer,
  ClosedLocationAssignment,
  CapacityExceeded,
  ObjectiveMismatch,
};

struct Violation {
  ViolationKind kind;
  int index = -1;       // customer or location, depending on kind
  double amount = 0.0;  // capacity excess or objective delta
  std::string message;
};

struct FeasibilityReport {
  std::vector<Violation> violations;
  bool feasible() const { return violations.empty(); }
};

/// Reports every violated constraint of `sol` against `inst`. Dimension
/// mismatches throw DataError; violations are report content, not errors.
FeasibilityReport check_feasible(const Instance& inst,
                                 const BinarySolution& sol);

}  // namespace sscfl
