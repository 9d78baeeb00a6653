#include "sscfl/solver.hpp"

#include <chrono>
#include <fstream>

#include "json.hpp"
#include "sscfl/backend.hpp"
#include "sscfl/biclustering.hpp"
#include "sscfl/phase1.hpp"

namespace sscfl {

namespace {

double now_seconds() {
  using clock = std::chrono::steady_clock;
  return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

std::vector<double> lambda_for(const std::string& mode, int num_perturbations,
                               std::size_t pool_size) {
  std::vector<double> lambda(pool_size, 0.0);
  if (pool_size == 0) return lambda;
  lambda[0] = 1.0;
  if (mode == "paks") {
    for (std::size_t s = 1; s < pool_size; ++s)
      lambda[s] = 1.0 / std::max(num_perturbations, 1);
  } else if (mode != "classic") {
    throw DataError("unknown lambda_mode: " + mode);
  }
  return lambda;
}

SolveOutcome outcome_from_mip(const MipResult& mip, double seconds) {
  SolveOutcome out;
  out.seconds = seconds;
  out.nodes = mip.nodes;
  out.bound = mip.bound;
  switch (mip.status) {
    case MipStatus::Optimal: out.status = "optimal"; break;
    case MipStatus::FeasibleTimeLimit: out.status = "feasible"; break;
    case MipStatus::Infeasible: out.status = "infeasible"; break;
    case MipStatus::NoSolutionTimeLimit: out.status = "no_solution"; break;
  }
  if (mip.incumbent) {
    out.best = *mip.incumbent;
    out.failed = false;
  }
  return out;
}

}  // namespace

Method parse_method(const std::string& name) {
  if (name == "paks") return Method::Paks;
  if (name == "ks-classic") return Method::KsClassic;
  if (name == "exact") return Method::Exact;
  throw DataError("unknown method: " + name);
}

std::string method_name(Method method) {
  switch (method) {
    case Method::Paks: return "paks";
    case Method::KsClassic: return "ks-classic";
    case Method::Exact: return "exact";
  }
  return "?";
}

ParamConfig params_from_json(const std::string& text) {
  nlohmann::json doc = nlohmann::json::parse(text, nullptr, false);
  if (doc.is_discarded() || !doc.is_object())
    throw DataError("configuration is not a JSON object");
  ParamConfig cfg;
  for (const auto& [key, value] : doc.items()) {
    if (key == "N") cfg.N = value.get<int>();
    else if (key == "vi_rounds") cfg.vi_rounds = value.get<int>();
    else if (key == "theta") cfg.theta = value.get<double>();
    else if (key == "epsilon") cfg.epsilon = value.get<double>();
    else if (key == "lambda_mode") cfg.lambda_mode = value.get<std::string>();
    else if (key == "p") cfg.p = value.get<int>();
    else if (key == "delta") cfg.delta = value.get<double>();
    else throw DataError("unknown configuration key: " + key);
  }
  if (cfg.N < 1 || cfg.vi_rounds < 0 || !(cfg.theta > 0.0 && cfg.theta < 1.0) ||
      !(cfg.epsilon > 0.0) || cfg.p < 1)
    throw DataError("configuration values out of range");
  return cfg;
}

SolveOutcome run_solver(std::shared_ptr<const Instance> inst,
                        const SolveOptions& options) {
  inst->validate();
  const double t0 = now_seconds();
  const double deadline = t0 + options.time_limit;

  if (!options.dump_lp_path.empty()) {
    std::ofstream out(options.dump_lp_path);
    if (!out) throw DataError("cannot write " + options.dump_lp_path);
    out << build_full(inst, /*relaxed=*/false).to_lp_text();
  }

  if (options.method == Method::Exact) {
    Budget budget;
    budget.wall_seconds = options.time_limit;
    budget.node_limit = options.node_limit;
    const MipResult mip = solve_exact(*inst, budget);
    return outcome_from_mip(mip, now_seconds() - t0);
  }

  TraceSink trace(options.trace_path);
  Phase1Config p1;
  p1.num_perturbations = options.params.N;
  p1.max_vi_rounds = options.params.vi_rounds;
  p1.epsilon = options.params.epsilon;
  p1.theta = options.params.theta;
  p1.seed = options.seed;

  KernelSearchConfig ks;
  ks.removal_patience = options.params.p;
  ks.cutoff_delta = options.params.delta;
  ks.node_limit = options.node_limit;

  SolveOutcome out;
  RunResult run;
  if (options.method == Method::Paks) {
    const RootRelaxation root = root_relaxation(inst, p1, &trace);
    const SolutionPool pool = perturbed_solutions(inst, root, p1, &trace);
    const FeatureMatrix features =
        feature_matrix(pool, inst->num_locations, inst->num_customers);
    const RegionSet regions = derive_regions(features, p1);
    ks.lambda = lambda_for(options.params.lambda_mode, options.params.N,
                           pool.solutions.size());
    const ScoreVector scores = location_scores(pool, ks.lambda, *inst);
    const GrayZoneThresholds thresholds =
        gray_zone_thresholds(*inst, pool.solutions.front());
    auto [kernel, buckets] = build_kernel_and_buckets(*inst, pool, regions,
                                                      scores, thresholds);
    run = optimize(inst, std::move(kernel), std::move(buckets), ks, deadline,
                   &trace);
  } else {
    // Classic baseline: root relaxation only, a single implicit region,
    // demand-served scores, equal-length buckets, no kernel removal.
    const RootRelaxation root = root_relaxation(inst, p1, &trace);
    SolutionPool pool;
    pool.solutions.push_back(root.solution);
    ks.lambda = {1.0};
    ks.remove_stale = false;
    const ScoreVector scores = location_scores(pool, ks.lambda, *inst);
    const GrayZoneThresholds thresholds =
        gray_zone_thresholds(*inst, pool.solutions.front());
    auto [kernel, buckets] =
        build_classic_kernel_and_buckets(*inst, pool, scores, thresholds);
    run = optimize(inst, std::move(kernel), std::move(buckets), ks, deadline,
                   &trace);
  }

  out.seconds = now_seconds() - t0;
  out.failed = run.failed || !run.best;
  if (run.best) {
    out.best = std::move(run.best);
    out.status = "feasible";
  } else {
    out.status = run.failed ? "no_solution" : "infeasible";
  }
  return out;
}

}  // namespace sscfl
