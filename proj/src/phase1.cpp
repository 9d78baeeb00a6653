#include "sscfl/phase1.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "json.hpp"
#include "sscfl/biclustering.hpp"
#include "sscfl/random.hpp"

namespace sscfl {

namespace {

constexpr double kNonzeroTol = 1e-7;

int open_support_count(const FractionalSolution& s) {
  int count = 0;
  for (double v : s.y)
    if (v > kNonzeroTol) ++count;
  return count;
}

void trace_lp(TraceSink* trace, const char* step, const ModelSpec& model,
              const FractionalSolution& s, int open_count, int index = -1) {
  if (!trace || !trace->enabled()) return;
  nlohmann::json rec;
  rec["phase"] = "phase1";
  rec["step"] = step;
  if (index >= 0) rec["index"] = index;
  rec["vars"] = model.num_free_variables();
  rec["status"] = s.status == LpStatus::Optimal
                      ? "optimal"
                      : (s.status == LpStatus::Infeasible ? "infeasible"
                                                          : "unbounded");
  if (s.status == LpStatus::Optimal) {
    rec["objective"] = s.objective;
    rec["open_support"] = open_count;
  }
  trace->emit(rec.dump());
}

}  // namespace

RootRelaxation root_relaxation(std::shared_ptr<const Instance> inst,
                               const Phase1Config& cfg, TraceSink* trace) {
  if (cfg.num_perturbations < 1 || cfg.max_vi_rounds < 0 ||
      !(cfg.epsilon > 0.0) || !(cfg.theta > 0.0 && cfg.theta < 1.0))
    throw DataError("invalid phase 1 configuration");

  ModelSpec model = build_full(inst, /*relaxed=*/true);
  FractionalSolution current = solve_lp(model, /*want_reduced_costs=*/true);
  int open_count = open_support_count(current);
  trace_lp(trace, "root", model, current, open_count);
  if (current.status != LpStatus::Optimal)
    throw SolverError("root relaxation of " + inst->name + " is " +
                      (current.status == LpStatus::Infeasible ? "infeasible"
                                                              : "unbounded"));

  const double rho = inst->capacity_demand_ratio();
  const double open_estimate = inst->num_locations / rho;  // I*

  RootRelaxation out{std::move(current), model, 0};
  if (open_count < open_estimate) {
    // Too few locations open: enforce the estimate and re-solve.
    out.model = out.model.with_min_open(open_estimate);
    out.solution = solve_lp(out.model, true);
    trace_lp(trace, "min_open", out.model, out.solution,
             open_support_count(out.solution));
    if (out.solution.status != LpStatus::Optimal)
      throw SolverError("min-open relaxation failed on " + inst->name);
    return out;
  }

  while (open_count > (1.0 + cfg.epsilon) * open_estimate &&
         out.vi_rounds_used < cfg.max_vi_rounds) {
    std::vector<std::pair<int, int>> pairs;
    for (const auto& [key, value] : out.solution.x_nonzeros) {
      if (value > kNonzeroTol)
        pairs.push_back({static_cast<int>(key / inst->num_customers),
                         static_cast<int>(key % inst->num_customers)});
    }
    out.model = out.model.with_vi_pairs(pairs);
    out.solution = solve_lp(out.model, true);
    ++out.vi_rounds_used;
    open_count = open_support_count(out.solution);
    trace_lp(trace, "vi_round", out.model, out.solution, open_count,
             out.vi_rounds_used);
    if (out.solution.status != LpStatus::Optimal)
      throw SolverError("strengthened relaxation failed on " + inst->name);
  }
  return out;
}

int perturbation_size(const Instance& inst, const FractionalSolution& s1,
                      int num_perturbations) {
  std::vector<int> support;
  for (int i = 0; i < inst.num_locations; ++i)
    if (s1.y[i] > kNonzeroTol) support.push_back(i);
  const int support_size = static_cast<int>(support.size());
  if (support_size == 0) return 0;

  const double rho = inst.capacity_demand_ratio();
  const int denom =
      std::min(static_cast<int>(std::ceil(rho)), num_perturbations);
  int alpha = static_cast<int>(
      std::ceil(static_cast<double>(support_size) / std::max(denom, 1)));
  alpha = std::min(alpha, support_size);

  // Capacity safeguard: removing the alpha largest-capacity support
  // locations must leave enough total capacity for the whole demand.
  std::vector<int> by_capacity = support;
  std::sort(by_capacity.begin(), by_capacity.end(), [&](int a, int b) {
    if (inst.capacity[a] != inst.capacity[b])
      return inst.capacity[a] > inst.capacity[b];
    return a < b;
  });
  const double total_capacity = inst.total_capacity();
  const double total_demand = inst.total_demand();
  while (alpha > 1) {
    double removed = 0.0;
    for (int k = 0; k < alpha; ++k) removed += inst.capacity[by_capacity[k]];
    if (total_capacity - removed >= total_demand) break;
    --alpha;
  }
  return alpha;
}

SolutionPool perturbed_solutions(std::shared_ptr<const Instance> inst,
                                 const RootRelaxation& root,
                                 const Phase1Config& cfg, TraceSink* trace) {
  const Instance& instance = *inst;
  SolutionPool pool;
  pool.solutions.push_back(root.solution);

  std::vector<int> support;
  for (int i = 0; i < instance.num_locations; ++i)
    if (root.solution.y[i] > kNonzeroTol) support.push_back(i);
  const int alpha = perturbation_size(instance, root.solution,
                                      cfg.num_perturbations);
  if (alpha <= 0) return pool;

  std::vector<int> all_y(instance.num_locations);
  std::iota(all_y.begin(), all_y.end(), 0);

  Rng base(cfg.seed);
  for (int n = 1; n <= cfg.num_perturbations; ++n) {
    // Per-index substream: results do not depend on evaluation order.
    Rng rng = base.substream(static_cast<std::uint64_t>(n));
    std::vector<int> candidates = support;
    std::vector<int> removed;
    for (int k = 0; k < alpha; ++k) {
      const int pick = static_cast<int>(
          rng.next_int(0, static_cast<std::int64_t>(candidates.size()) - 1));
      removed.push_back(candidates[pick]);
      candidates.erase(candidates.begin() + pick);
    }
    std::vector<char> drop(instance.num_locations, 0);
    for (int i : removed) drop[i] = 1;

    std::vector<int> keep_y;
    std::vector<std::pair<int, int>> keep_x;
    for (int i = 0; i < instance.num_locations; ++i) {
      if (drop[i]) continue;
      keep_y.push_back(i);
      for (int j = 0; j < instance.num_customers; ++j) keep_x.push_back({i, j});
    }
    const ModelSpec restricted = root.model.restricted(keep_y, keep_x);
    FractionalSolution s = solve_lp(restricted);
    trace_lp(trace, "perturbed", restricted, s, open_support_count(s), n);
    if (s.status == LpStatus::Optimal) pool.solutions.push_back(std::move(s));
    // Infeasible perturbations are skipped; the pool just ends up smaller.
  }
  return pool;
}

FeatureMatrix feature_matrix(const SolutionPool& pool, int num_locations,
                             int num_customers) {
  if (pool.solutions.empty()) throw DataError("empty solution pool");
  std::vector<int> full(static_cast<std::size_t>(num_locations) * num_customers,
                        0);
  for (const FractionalSolution& s : pool.solutions)
    for (const auto& [key, value] : s.x_nonzeros)
      if (value > kNonzeroTol) ++full[key];

  FeatureMatrix out;
  out.num_customers = num_customers;
  for (int i = 0; i < num_locations; ++i) {
    long row_sum = 0;
    for (int j = 0; j < num_customers; ++j)
      row_sum += full[static_cast<std::size_t>(i) * num_customers + j];
    if (row_sum > 0)
      out.surviving.push_back(i);
    else
      out.discarded.push_back(i);
  }
  out.counts.reserve(out.surviving.size() * num_customers);
  for (int i : out.surviving)
    for (int j = 0; j < num_customers; ++j)
      out.counts.push_back(full[static_cast<std::size_t>(i) * num_customers + j]);
  return out;
}

RegionSet derive_regions(const FeatureMatrix& A, const Phase1Config& cfg) {
  RegionSet accepted;
  Region all;
  all.locations = A.surviving;
  all.customers.resize(A.num_customers);
  std::iota(all.customers.begin(), all.customers.end(), 0);
  accepted.regions.push_back(std::move(all));
  accepted.inter_loss = 0.0;

  const int cap = std::min({A.rows(), A.num_customers, 16});
  for (int r = 2; r <= cap; ++r) {
    const CoclusterResult cc = spectral_cocluster(A, r, cfg.seed);
    RegionSet candidate;
    candidate.regions.assign(r, {});
    for (int row = 0; row < A.rows(); ++row)
      candidate.regions[cc.row_labels[row]].locations.push_back(
          A.surviving[row]);
    for (int j = 0; j < A.num_customers; ++j)
      candidate.regions[cc.col_labels[j]].customers.push_back(j);

    bool all_nonempty = true;
    for (const Region& region : candidate.regions)
      if (region.locations.empty() || region.customers.empty())
        all_nonempty = false;
    if (!all_nonempty) break;

    candidate.inter_loss = inter_region_loss(candidate, A);
    if (candidate.inter_loss >= cfg.theta) break;
    accepted = std::move(candidate);
  }
  return accepted;
}

}  // namespace sscfl
