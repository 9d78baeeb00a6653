#include "sscfl/phase2.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

#include "json.hpp"

namespace sscfl {

namespace {

constexpr double kNonzeroTol = 1e-7;

double now_seconds() {
  using clock = std::chrono::steady_clock;
  return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

double lower_median(std::vector<double> values) {
  if (values.empty()) throw DataError("median of an empty set");
  const std::size_t idx = (values.size() - 1) / 2;
  std::nth_element(values.begin(), values.begin() + idx, values.end());
  return values[idx];
}

const char* mip_status_name(MipStatus status) {
  switch (status) {
    case MipStatus::Optimal: return "optimal";
    case MipStatus::FeasibleTimeLimit: return "feasible_time_limit";
    case MipStatus::Infeasible: return "infeasible";
    case MipStatus::NoSolutionTimeLimit: return "no_solution_time_limit";
  }
  return "?";
}

// Score ranking used everywhere: higher score first, then cheaper to open,
// then lower index.
std::vector<int> rank_by_score(std::vector<int> locations,
                               const ScoreVector& scores,
                               const Instance& inst) {
  std::sort(locations.begin(), locations.end(), [&](int a, int b) {
    if (scores.w[a] != scores.w[b]) return scores.w[a] > scores.w[b];
    if (inst.fixed_cost[a] != inst.fixed_cost[b])
      return inst.fixed_cost[a] < inst.fixed_cost[b];
    return a < b;
  });
  return locations;
}

// Assignment variables admitted for location i: intra-regional under the
// reduced-cost median, cross-regional additionally under the per-customer
// cost median (gray zone). region_of[j] < 0 marks the single-region case.
void collect_assign_vars(const Instance& inst, int location,
                         const std::vector<int>& region_of_customer,
                         int location_region, const FractionalSolution& s1,
                         const GrayZoneThresholds& thresholds,
                         std::vector<std::pair<int, int>>& out) {
  const int n = inst.num_customers;
  for (int j = 0; j < n; ++j) {
    const double rc =
        s1.reduced_costs_x[static_cast<std::size_t>(location) * n + j];
    if (rc > thresholds.reduced_cost_median) continue;
    const bool intra =
        location_region < 0 || region_of_customer[j] == location_region;
    if (intra) {
      out.push_back({location, j});
    } else if (inst.cost(location, j) <= thresholds.column_cost_median[j]) {
      out.push_back({location, j});
    }
  }
}

struct RestrictedSolve {
  MipResult result;
  std::int64_t model_vars = 0;
};

RestrictedSolve solve_restricted(std::shared_ptr<const Instance> inst,
                                 const Kernel& kernel, const Bucket* bucket,
                                 std::optional<double> cutoff, bool add_cover,
                                 const KernelSearchConfig& cfg,
                                 double wall_budget) {
  const Instance& instance = *inst;
  std::vector<int> keep_y;
  std::vector<std::pair<int, int>> keep_x;
  for (int i = 0; i < instance.num_locations; ++i)
    if (kernel.open_vars[i]) keep_y.push_back(i);
  for (int i = 0; i < instance.num_locations; ++i) {
    if (!kernel.open_vars[i]) continue;
    const std::size_t base =
        static_cast<std::size_t>(i) * instance.num_customers;
    for (int j = 0; j < instance.num_customers; ++j)
      if (kernel.assign_vars[base + j]) keep_x.push_back({i, j});
  }
  if (bucket) {
    keep_y.insert(keep_y.end(), bucket->open_vars.begin(),
                  bucket->open_vars.end());
    keep_x.insert(keep_x.end(), bucket->assign_vars.begin(),
                  bucket->assign_vars.end());
  }

  ModelSpec spec = build_full(inst, /*relaxed=*/false)
                       .restricted(keep_y, keep_x)
                       .with_vi_pairs(keep_x);  // tightens the node bounds
  if (cutoff) spec = spec.with_cutoff(*cutoff, cfg.cutoff_delta);
  if (add_cover && bucket && !bucket->open_vars.empty())
    spec = spec.with_bucket_cover(bucket->open_vars);

  Budget budget;
  budget.wall_seconds = wall_budget;
  budget.node_limit = cfg.node_limit;
  RestrictedSolve out;
  out.model_vars = spec.num_free_variables();
  out.result = solve_mip(spec, budget);
  return out;
}

void trace_iteration(TraceSink* trace, const IterationRecord& rec,
                     const Kernel& kernel) {
  if (!trace || !trace->enabled()) return;
  nlohmann::json doc;
  doc["phase"] = "phase2";
  doc["bucket"] = rec.bucket;
  doc["status"] = rec.status;
  if (rec.objective) doc["objective"] = *rec.objective;
  doc["model_vars"] = rec.model_vars;
  doc["kernel_open_before"] = rec.kernel_open_before;
  doc["kernel_open_after"] = rec.kernel_open_after;
  doc["kernel_assign"] = kernel.assign_count();
  doc["seconds"] = rec.seconds;
  trace->emit(doc.dump());
}

}  // namespace

int Kernel::open_count() const {
  int c = 0;
  for (std::uint8_t b : open_vars) c += b;
  return c;
}

long Kernel::assign_count() const {
  long c = 0;
  for (std::uint8_t b : assign_vars) c += b;
  return c;
}

ScoreVector location_scores(const SolutionPool& pool,
                            const std::vector<double>& lambda,
                            const Instance& inst) {
  if (lambda.size() != pool.solutions.size())
    throw DataError("lambda length " + std::to_string(lambda.size()) +
                    " does not match pool size " +
                    std::to_string(pool.solutions.size()));
  ScoreVector scores;
  scores.w.assign(inst.num_locations, 0.0);
  for (std::size_t s = 0; s < pool.solutions.size(); ++s) {
    if (lambda[s] == 0.0) continue;
    for (const auto& [key, value] : pool.solutions[s].x_nonzeros) {
      const int i = static_cast<int>(key / inst.num_customers);
      const int j = static_cast<int>(key % inst.num_customers);
      scores.w[i] += lambda[s] * inst.demand[j] * value;
    }
  }
  return scores;
}

GrayZoneThresholds gray_zone_thresholds(const Instance& inst,
                                        const FractionalSolution& s1) {
  if (s1.reduced_costs_x.empty())
    throw DataError("root solution carries no reduced costs");
  GrayZoneThresholds out;
  out.reduced_cost_median = lower_median(s1.reduced_costs_x);
  out.column_cost_median.resize(inst.num_customers);
  std::vector<double> column(inst.num_locations);
  for (int j = 0; j < inst.num_customers; ++j) {
    for (int i = 0; i < inst.num_locations; ++i) column[i] = inst.cost(i, j);
    out.column_cost_median[j] = lower_median(column);
  }
  return out;
}

std::pair<Kernel, std::vector<Bucket>> build_kernel_and_buckets(
    const Instance& inst, const SolutionPool& pool, const RegionSet& regions,
    const ScoreVector& scores, const GrayZoneThresholds& thresholds) {
  const FractionalSolution& s1 = pool.solutions.front();
  const int m = inst.num_locations;
  const int n = inst.num_customers;

  std::vector<int> region_of_customer(n, -1);
  for (std::size_t r = 0; r < regions.regions.size(); ++r)
    for (int j : regions.regions[r].customers)
      region_of_customer[j] = static_cast<int>(r);
  const bool single_region = regions.regions.size() == 1;

  Kernel kernel;
  kernel.num_customers = n;
  kernel.open_vars.assign(m, 0);
  kernel.assign_vars.assign(static_cast<std::size_t>(m) * n, 0);
  kernel.last_selected.assign(m, -1);

  std::vector<Bucket> buckets;
  std::vector<int> kernel_regions(m, -1);
  for (std::size_t r = 0; r < regions.regions.size(); ++r) {
    const std::vector<int> ranked =
        rank_by_score(regions.regions[r].locations, scores, inst);
    int in_root = 0;
    for (int i : regions.regions[r].locations)
      if (s1.y[i] > kNonzeroTol) ++in_root;
    Bucket bucket;
    bucket.region = static_cast<int>(r);
    for (std::size_t pos = 0; pos < ranked.size(); ++pos) {
      const int i = ranked[pos];
      if (static_cast<int>(pos) < in_root) {
        kernel.open_vars[i] = 1;
        kernel.last_selected[i] = 0;
        kernel_regions[i] = static_cast<int>(r);
      } else if (scores.w[i] > 0.0) {
        bucket.open_vars.push_back(i);
      }
    }
    buckets.push_back(std::move(bucket));
  }

  // Assignment variables for the kernel.
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < m; ++i) {
    if (!kernel.open_vars[i]) continue;
    pairs.clear();
    collect_assign_vars(inst, i, region_of_customer,
                        single_region ? -1 : kernel_regions[i], s1, thresholds,
                        pairs);
    for (const auto& [pi, pj] : pairs)
      kernel.assign_vars[static_cast<std::size_t>(pi) * n + pj] = 1;
  }
  // And for each bucket.
  for (Bucket& bucket : buckets) {
    for (int i : bucket.open_vars) {
      pairs.clear();
      collect_assign_vars(inst, i, region_of_customer,
                          single_region ? -1 : bucket.region, s1, thresholds,
                          pairs);
      bucket.assign_vars.insert(bucket.assign_vars.end(), pairs.begin(),
                                pairs.end());
    }
  }

  std::stable_sort(buckets.begin(), buckets.end(),
                   [](const Bucket& a, const Bucket& b) {
                     if (a.open_vars.size() != b.open_vars.size())
                       return a.open_vars.size() > b.open_vars.size();
                     return a.region < b.region;
                   });
  // The search stops at the last nonempty bucket anyway.
  while (!buckets.empty() && buckets.back().open_vars.empty())
    buckets.pop_back();
  return {std::move(kernel), std::move(buckets)};
}

std::pair<Kernel, std::vector<Bucket>> build_classic_kernel_and_buckets(
    const Instance& inst, const SolutionPool& pool, const ScoreVector& scores,
    const GrayZoneThresholds& thresholds) {
  const FractionalSolution& s1 = pool.solutions.front();
  const int m = inst.num_locations;
  const int n = inst.num_customers;

  std::vector<int> all(m);
  std::iota(all.begin(), all.end(), 0);
  const std::vector<int> ranked = rank_by_score(all, scores, inst);
  int in_root = 0;
  for (int i = 0; i < m; ++i)
    if (s1.y[i] > kNonzeroTol) ++in_root;
  in_root = std::max(in_root, 1);

  Kernel kernel;
  kernel.num_customers = n;
  kernel.open_vars.assign(m, 0);
  kernel.assign_vars.assign(static_cast<std::size_t>(m) * n, 0);
  kernel.last_selected.assign(m, -1);

  const std::vector<int> no_regions(n, -1);
  std::vector<std::pair<int, int>> pairs;
  std::vector<Bucket> buckets;
  for (std::size_t pos = 0; pos < ranked.size(); ++pos) {
    const int i = ranked[pos];
    pairs.clear();
    collect_assign_vars(inst, i, no_regions, -1, s1, thresholds, pairs);
    if (static_cast<int>(pos) < in_root) {
      kernel.open_vars[i] = 1;
      kernel.last_selected[i] = 0;
      for (const auto& [pi, pj] : pairs)
        kernel.assign_vars[static_cast<std::size_t>(pi) * n + pj] = 1;
    } else {
      // Every remaining location is bucketed in score order: the baseline
      // removes no variables permanently.
      const std::size_t chunk = (pos - in_root) / in_root;
      if (buckets.size() <= chunk) {
        Bucket b;
        b.region = static_cast<int>(chunk);
        buckets.push_back(std::move(b));
      }
      buckets[chunk].open_vars.push_back(i);
      buckets[chunk].assign_vars.insert(buckets[chunk].assign_vars.end(),
                                        pairs.begin(), pairs.end());
    }
  }
  return {std::move(kernel), std::move(buckets)};
}

RunResult optimize(std::shared_ptr<const Instance> inst, Kernel kernel,
                   std::vector<Bucket> buckets, const KernelSearchConfig& cfg,
                   double deadline, TraceSink* trace) {
  const Instance& instance = *inst;
  RunResult run;
  long iteration = 0;  // counts improving iterations

  auto remaining_budget = [&](std::size_t pending_solves) {
    const double remaining = deadline - now_seconds();
    return remaining / static_cast<double>(std::max<std::size_t>(1, pending_solves));
  };
  auto merge_bucket = [&](const Bucket& bucket) {
    for (int i : bucket.open_vars) {
      kernel.open_vars[i] = 1;
      if (kernel.last_selected[i] < 0) kernel.last_selected[i] = iteration;
    }
    for (const auto& [i, j] : bucket.assign_vars)
      kernel.assign_vars[static_cast<std::size_t>(i) * instance.num_customers +
                         j] = 1;
  };

  // Initial feasible solution: solve the kernel program, widening the kernel
  // with the next bucket while it stays infeasible.
  std::size_t next_bucket = 0;
  std::optional<BinarySolution> incumbent;
  bool previous_optimal = false;
  for (;;) {
    const double budget = remaining_budget(1 + buckets.size() - next_bucket);
    if (budget <= 0.0) break;
    IterationRecord rec;
    rec.bucket = next_bucket == 0 ? -1
                                  : buckets[next_bucket - 1].region;
    rec.kernel_open_before = kernel.open_count();
    const double t0 = now_seconds();
    RestrictedSolve solve = solve_restricted(inst, kernel, nullptr,
                                             std::nullopt, false, cfg, budget);
    rec.seconds = now_seconds() - t0;
    rec.model_vars = solve.model_vars;
    rec.status = mip_status_name(solve.result.status);
    if (solve.result.incumbent) rec.objective = solve.result.incumbent->objective;
    rec.kernel_open_after = kernel.open_count();
    run.iterations.push_back(rec);
    trace_iteration(trace, rec, kernel);

    if (solve.result.incumbent) {
      incumbent = std::move(solve.result.incumbent);
      previous_optimal = solve.result.status == MipStatus::Optimal;
      for (int i = 0; i < instance.num_locations; ++i)
        if (incumbent->open[i]) kernel.last_selected[i] = iteration;
      break;
    }
    if (next_bucket >= buckets.size()) break;  // nothing left to merge
    merge_bucket(buckets[next_bucket]);
    ++next_bucket;
  }

  if (!incumbent) {
    run.failed = true;
    return run;
  }

  // Bucket loop: one cutoff-constrained program per remaining bucket. The
  // pending count shrinks as buckets retire, so unused time automatically
  // spreads over the solves still to come.
  for (std::size_t b = next_bucket; b < buckets.size(); ++b) {
    const Bucket& bucket = buckets[b];
    if (deadline - now_seconds() <= 0.0) break;
    const double budget = remaining_budget(buckets.size() - b);

    IterationRecord rec;
    rec.bucket = bucket.region;
    rec.kernel_open_before = kernel.open_count();
    const double t0 = now_seconds();
    RestrictedSolve solve =
        solve_restricted(inst, kernel, &bucket, incumbent->objective,
                         /*add_cover=*/previous_optimal, cfg, budget);
    rec.seconds = now_seconds() - t0;
    rec.model_vars = solve.model_vars;
    rec.status = mip_status_name(solve.result.status);

    if (solve.result.incumbent) {
      // The cutoff makes any solution strictly improving.
      BinarySolution improved = std::move(*solve.result.incumbent);
      ++iteration;
      for (int i : bucket.open_vars) {
        if (!improved.open[i]) continue;
        kernel.open_vars[i] = 1;
        for (const auto& [pi, pj] : bucket.assign_vars)
          if (pi == i)
            kernel.assign_vars[static_cast<std::size_t>(pi) *
                                   instance.num_customers +
                               pj] = 1;
      }
      for (int i = 0; i < instance.num_locations; ++i)
        if (kernel.open_vars[i] && improved.open[i])
          kernel.last_selected[i] = iteration;
      if (cfg.remove_stale) {
        for (int i = 0; i < instance.num_locations; ++i) {
          if (!kernel.open_vars[i]) continue;
          if (improved.open[i]) continue;  // never drop the incumbent support
          if (iteration - kernel.last_selected[i] >= cfg.removal_patience) {
            kernel.open_vars[i] = 0;
            const std::size_t base =
                static_cast<std::size_t>(i) * instance.num_customers;
            for (int j = 0; j < instance.num_customers; ++j)
              kernel.assign_vars[base + j] = 0;
          }
        }
      }
      incumbent = std::move(improved);
      rec.objective = incumbent->objective;
    }
    previous_optimal = solve.result.status == MipStatus::Optimal;

    rec.kernel_open_after = kernel.open_count();
    run.iterations.push_back(rec);
    trace_iteration(trace, rec, kernel);
  }

  run.best = std::move(incumbent);
  run.failed = false;
  return run;
}

}  // namespace sscfl
