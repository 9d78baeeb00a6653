#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "sscfl/backend.hpp"
#include "sscfl/phase1.hpp"
#include "sscfl/trace.hpp"

namespace sscfl {

struct ScoreVector {
  std::vector<double> w;  // per location; zero for locations no solution used
};

/// The evolving set of promising variables. Restricted programs are built
/// over the kernel plus one bucket. last_selected records the improving
/// iteration in which a location was last opened (or entered the kernel) and
/// drives the stale-location removal.
struct Kernel {
  std::vector<std::uint8_t> open_vars;    // mask per location
  std::vector<std::uint8_t> assign_vars;  // mask per (i, j), row-major
  std::vector<long> last_selected;        // per location, -1 if absent

  int num_customers = 0;
  int open_count() const;
  long assign_count() const;
};

struct Bucket {
  int region = -1;
  std::vector<int> open_vars;
  std::vector<std::pair<int, int>> assign_vars;
};

struct KernelSearchConfig {
  std::vector<double> lambda;     // per pool entry
  int removal_patience = 2;       // p
  bool remove_stale = true;       // off in the classic baseline
  double cutoff_delta = -1.0;     // < 0 selects the relative rule
  std::optional<long> node_limit; // per restricted solve, for reproducibility
};

struct IterationRecord {
  int bucket = -1;  // -1 for the plain kernel program
  std::string status;
  std::optional<double> objective;
  int kernel_open_before = 0;
  int kernel_open_after = 0;
  std::int64_t model_vars = 0;
  double seconds = 0.0;
};

struct RunResult {
  std::optional<BinarySolution> best;
  std::vector<IterationRecord> iterations;
  bool failed = false;
};

struct GrayZoneThresholds {
  double reduced_cost_median = 0.0;        // gamma hat
  std::vector<double> column_cost_median;  // gamma_j per customer
};

/// w_i = sum_s lambda_s * (demand served by i in solution s).
ScoreVector location_scores(const SolutionPool& pool,
                            const std::vector<double>& lambda,
                            const Instance& inst);

/// Medians that gate assignment variables: the reduced-cost median over all
/// pairs of the root solution, and per customer the median unit cost over
/// all locations. Even counts take the lower of the two middle values.
GrayZoneThresholds gray_zone_thresholds(const Instance& inst,
                                        const FractionalSolution& s1);

/// Kernel and bucket construction over the region structure. Per region the
/// locations are ranked by score (ties: lower fixed cost, then index); as
/// many enter the kernel as the root solution opens in that region, the rest
/// with positive score form the region's bucket. Assignment variables join
/// when intra-regional under the reduced-cost median, or cross-regional under
/// both the reduced-cost and the unit-cost median (gray zones). Everything
/// else stays fixed to zero for the entire search.
std::pair<Kernel, std::vector<Bucket>> build_kernel_and_buckets(
    const Instance& inst, const SolutionPool& pool, const RegionSet& regions,
    const ScoreVector& scores, const GrayZoneThresholds& thresholds);

/// Baseline construction: single region, kernel = root support, equal-length
/// buckets over every remaining location in score order, no permanent
/// exclusion of zero-score locations.
std::pair<Kernel, std::vector<Bucket>> build_classic_kernel_and_buckets(
    const Instance& inst, const SolutionPool& pool, const ScoreVector& scores,
    const GrayZoneThresholds& thresholds);

/// The optimization loop: solve the kernel program (merging buckets while it
/// is infeasible), then one cutoff-constrained program per remaining bucket,
/// learning and adjusting the kernel after every improvement. `deadline` is
/// an absolute steady-clock second count; the remaining time is split equally
/// over the pending solves and leftovers are redistributed.
RunResult optimize(std::shared_ptr<const Instance> inst, Kernel kernel,
                   std::vector<Bucket> buckets, const KernelSearchConfig& cfg,
                   double deadline, TraceSink* trace = nullptr);

}  // namespace sscfl
