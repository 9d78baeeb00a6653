#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "sscfl/backend.hpp"
#include "sscfl/model.hpp"
#include "sscfl/trace.hpp"

namespace sscfl {

struct Phase1Config {
  int num_perturbations = 10;  // N; the pool holds up to N + 1 solutions
  int max_vi_rounds = 5;
  double epsilon = 0.1;  // slack on the open-count estimate in the VI loop
  double theta = 0.05;   // ceiling on the inter-region loss
  std::uint64_t seed = 0;
};

/// Root relaxation plus the perturbed relaxations derived from it. The first
/// entry is always the root solution; perturbed solves that come back
/// infeasible are skipped, so the pool may hold fewer than N + 1 entries.
struct SolutionPool {
  std::vector<FractionalSolution> solutions;
};

/// Aggregated allocation counts across the pool. Rows of locations that no
/// solution ever used carry no information; they are dropped here and stay
/// fixed to zero for the rest of the search.
struct FeatureMatrix {
  std::vector<int> counts;      // surviving row-major (survivor, customer)
  std::vector<int> surviving;   // original location id per row
  std::vector<int> discarded;   // I0
  int num_customers = 0;

  int rows() const { return static_cast<int>(surviving.size()); }
  int at(int row, int j) const { return counts[static_cast<std::size_t>(row) * num_customers + j]; }
};

struct Region {
  std::vector<int> locations;  // original ids
  std::vector<int> customers;
};

struct RegionSet {
  std::vector<Region> regions;
  double inter_loss = 0.0;
};

struct RootRelaxation {
  FractionalSolution solution;  // s1, with reduced costs
  ModelSpec model;              // accumulated strengthening rows / min-open
  int vi_rounds_used = 0;
};

/// Solves the relaxation without strengthening rows, then either enforces a
/// minimum open count (when too few locations open) or lazily strengthens
/// the relaxation until the open support shrinks near |I|/rho. Throws
/// SolverError when the root relaxation is infeasible.
RootRelaxation root_relaxation(std::shared_ptr<const Instance> inst,
                               const Phase1Config& cfg,
                               TraceSink* trace = nullptr);

/// The N perturbed relaxations: each fixes a random sample of the root
/// support to zero, forcing other locations to take over.
SolutionPool perturbed_solutions(std::shared_ptr<const Instance> inst,
                                 const RootRelaxation& root,
                                 const Phase1Config& cfg,
                                 TraceSink* trace = nullptr);

/// Number of locations to remove per perturbed solve, after the capacity
/// safeguard. Exposed for tests.
int perturbation_size(const Instance& inst, const FractionalSolution& s1,
                      int num_perturbations);

FeatureMatrix feature_matrix(const SolutionPool& pool, int num_locations,
                             int num_customers);

/// Grows the region count while every region stays nonempty on both sides
/// and the inter-region loss stays under theta; returns the last acceptable
/// clustering (the single-region split always qualifies).
RegionSet derive_regions(const FeatureMatrix& A, const Phase1Config& cfg);

}  // namespace sscfl
