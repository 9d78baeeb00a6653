#include "sscfl/generator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "sscfl/random.hpp"

namespace sscfl {

Instance generate(const GeneratorConfig& cfg) {
  if (cfg.num_locations <= 0 || cfg.num_customers <= 0)
    throw DataError("generator: counts must be positive");
  if (!(cfg.target_ratio > 1.0))
    throw DataError("generator: target_ratio must exceed 1");
  if (cfg.demand_min <= 0 || cfg.demand_max < cfg.demand_min)
    throw DataError("generator: invalid demand range");
  if (!(cfg.cost_scale > 0.0) || !(cfg.fixed_cost_scale > 0.0))
    throw DataError("generator: scales must be positive");

  Rng rng(cfg.seed);
  const int m = cfg.num_locations;
  const int n = cfg.num_customers;

  std::vector<double> lx(m), ly(m), cx(n), cy(n);
  for (int i = 0; i < m; ++i) {
    lx[i] = rng.next_double();
    ly[i] = rng.next_double();
  }
  for (int j = 0; j < n; ++j) {
    cx[j] = rng.next_double();
    cy[j] = rng.next_double();
  }

  Instance inst;
  inst.name = "gen_i" + std::to_string(m) + "_j" + std::to_string(n) + "_s" +
              std::to_string(cfg.seed);
  inst.num_locations = m;
  inst.num_customers = n;

  inst.demand.resize(n);
  for (int j = 0; j < n; ++j)
    inst.demand[j] =
        static_cast<double>(rng.next_int(cfg.demand_min, cfg.demand_max));
  const double total_demand =
      std::accumulate(inst.demand.begin(), inst.demand.end(), 0.0);

  // Raw draws fix the capacity proportions; the block below rescales them to
  // hit the target total exactly.
  std::vector<double> raw(m);
  for (int i = 0; i < m; ++i)
    raw[i] = static_cast<double>(rng.next_int(50, 100));
  const double raw_sum = std::accumulate(raw.begin(), raw.end(), 0.0);

  const double want_total = cfg.target_ratio * total_demand;
  inst.capacity.resize(m);
  double floored_sum = 0.0;
  std::vector<std::pair<double, int>> remainder(m);
  for (int i = 0; i < m; ++i) {
    const double exact = raw[i] / raw_sum * want_total;
    inst.capacity[i] = std::floor(exact);
    floored_sum += inst.capacity[i];
    remainder[i] = {exact - inst.capacity[i], i};
  }
  const double target_int = std::round(want_total);
  if (std::abs(want_total - target_int) <= 1e-9 * std::max(1.0, want_total)) {
    // Integral target: largest-remainder apportionment keeps every capacity
    // an integer while the total matches exactly.
    long leftover = static_cast<long>(target_int - floored_sum);
    std::sort(remainder.begin(), remainder.end(),
              [](const auto& a, const auto& b) {
                if (a.first != b.first) return a.first > b.first;
                return a.second < b.second;
              });
    for (long k = 0; k < leftover; ++k)
      inst.capacity[remainder[k % m].second] += 1.0;
  } else {
    inst.capacity[0] += want_total - floored_sum;
  }

  const double max_cap =
      *std::max_element(inst.capacity.begin(), inst.capacity.end());
  inst.fixed_cost.resize(m);
  for (int i = 0; i < m; ++i)
    inst.fixed_cost[i] =
        cfg.fixed_cost_scale * (0.5 + inst.capacity[i] / max_cap);

  inst.unit_cost.resize(static_cast<std::size_t>(m) * n);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j)
      inst.unit_cost[static_cast<std::size_t>(i) * n + j] =
          cfg.cost_scale * std::hypot(lx[i] - cx[j], ly[i] - cy[j]);

  inst.validate();
  const double ratio = inst.capacity_demand_ratio();
  if (std::abs(ratio - cfg.target_ratio) > 1e-6)
    throw DataError("generator: capacity rescaling missed the target ratio");
  return inst;
}

}  // namespace sscfl
