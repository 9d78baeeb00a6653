#pragma once

#include <cstdint>

#include "sscfl/instance.hpp"

namespace sscfl {

/// Configuration for the Euclidean test-instance generator. Locations and
/// customers are placed uniformly in the unit square; capacities are drawn
/// and then rescaled so that the capacity/demand ratio hits target_ratio.
struct GeneratorConfig {
  int num_locations = 10;
  int num_customers = 25;
  double target_ratio = 2.0;  // must be > 1
  int demand_min = 5;
  int demand_max = 35;
  double cost_scale = 10.0;
  double fixed_cost_scale = 100.0;
  std::uint64_t seed = 0;
};

/// Deterministic in the seed: the same config yields a byte-identical
/// instance. Demands are integers; capacities are integers whenever
/// target_ratio * total demand is integral (one capacity absorbs the
/// fractional residue otherwise, keeping the ratio exact).
Instance generate(const GeneratorConfig& cfg);

}  // namespace sscfl
