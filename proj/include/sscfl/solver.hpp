#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>

#include "sscfl/instance.hpp"
#include "sscfl/phase2.hpp"

namespace sscfl {

enum class Method { Paks, KsClassic, Exact };

Method parse_method(const std::string& name);
std::string method_name(Method method);

/// Search parameters; names follow the configuration file keys.
struct ParamConfig {
  int N = 10;          // perturbed relaxations in phase 1
  int vi_rounds = 5;   // max strengthening rounds on the root relaxation
  double theta = 0.05; // inter-region loss ceiling
  double epsilon = 0.1;
  std::string lambda_mode = "paks";  // "paks": (1, 1/N, ...); "classic": (1, 0, ...)
  int p = 2;           // kernel removal patience
  double delta = -1.0; // objective cutoff margin; < 0 selects the relative rule
};

/// Parses a JSON configuration document; unknown keys are rejected.
ParamConfig params_from_json(const std::string& text);

struct SolveOptions {
  Method method = Method::Paks;
  double time_limit = 60.0;
  std::optional<long> node_limit;  // per restricted solve; makes runs reproducible
  std::uint64_t seed = 0;
  ParamConfig params;
  std::string trace_path;
  std::string dump_lp_path;
};

struct SolveOutcome {
  bool failed = true;
  std::optional<BinarySolution> best;
  std::optional<double> bound;  // exact method only
  std::string status;  // optimal | feasible | infeasible | no_solution
  double seconds = 0.0;
  long nodes = 0;
};

/// Runs one method on one instance. Thread-safe for concurrent calls with
/// distinct instances/options.
SolveOutcome run_solver(std::shared_ptr<const Instance> inst,
                        const SolveOptions& options);

}  // namespace sscfl
