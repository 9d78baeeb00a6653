#pragma once

#include <atomic>
#include <cstdint>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "sscfl/instance.hpp"
#include "sscfl/model.hpp"

namespace sscfl {

/// Thrown on unrecoverable numerical trouble. The solver never reports a
/// questionable point as Optimal; it raises this instead.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

/// LP relaxation solution. x values are stored sparsely (an optimal basic
/// solution has at most one nonzero per row); reduced costs are dense and
/// only filled when requested.
struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  double objective = 0.0;
  std::vector<double> y;  // per location
  std::vector<std::pair<std::int64_t, double>> x_nonzeros;  // key i*|J|+j
  std::vector<double> reduced_costs_x;  // dense (i, j), row-major; may be empty
  long iterations = 0;

  double x_at(int i, int j, int num_customers) const;
};

using FractionalSolution = LpResult;

enum class MipStatus { Optimal, FeasibleTimeLimit, Infeasible, NoSolutionTimeLimit };

struct MipResult {
  MipStatus status = MipStatus::Infeasible;
  std::optional<BinarySolution> incumbent;
  double bound = std::numeric_limits<double>::infinity();  // valid lower bound
  long nodes = 0;
};

/// Solve limits. The wall clock is checked at node boundaries, so it is
/// honored within a small grace margin. With a node limit and no wall limit
/// results are bit-reproducible.
struct Budget {
  double wall_seconds = std::numeric_limits<double>::infinity();
  std::optional<long> node_limit;
  const std::atomic<bool>* stop = nullptr;  // optional cancellation flag

  static Budget unlimited() { return Budget{}; }
  static Budget seconds(double s) { return Budget{s, std::nullopt, nullptr}; }
};

/// Solves the LP relaxation of `m` (which must be relaxed). Deterministic
/// given identical input. The strengthening rows in the spec are activated
/// lazily inside the solve; the returned optimum, duals and reduced costs are
/// those of the model with every listed pair enforced.
LpResult solve_lp(const ModelSpec& m, bool want_reduced_costs = false);

/// Branch and bound over the LP relaxation: best-bound node selection,
/// branching on the most fractional open variable first, then the most
/// fractional assignment variable. The incumbent always satisfies the
/// original constraints; `bound` is a valid lower bound even on early exit.
MipResult solve_mip(const ModelSpec& m, const Budget& budget);

/// Exact solve of the full model with every strengthening pair included.
/// Intended as a desk-scale reference for |I| up to ~25.
MipResult solve_exact(const Instance& inst, const Budget& budget);

}  // namespace sscfl
