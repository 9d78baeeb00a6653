#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace sscfl {

struct ExperimentRecord {
  std::string instance;
  std::string method;
  std::uint64_t seed = 0;
  std::optional<double> objective;  // present iff not failed
  std::optional<double> bound;
  double seconds = 0.0;
  bool failed = false;
};

/// 100 * (zH - zUB) / zUB. Throws on a non-positive reference.
double ub_gap(double zh, double zub);
/// 100 * (zH - zLB) / zLB. Throws on a non-positive reference.
double lb_gap(double zh, double zlb);

struct MethodSummary {
  std::string method;
  int instances = 0;
  int best = 0;       // times the method matched the per-instance minimum
  double mean_gap = 0.0;
  double mean_seconds = 0.0;
  int fails = 0;
};

struct AggregateReport {
  std::vector<MethodSummary> rows;
  std::string to_csv() const;
  std::string to_table() const;
};

/// Per-method comparison over a shared instance set: #Best counts matches of
/// the per-instance minimum objective (ties count for every method), gaps are
/// measured against that per-instance best.
AggregateReport aggregate(const std::vector<ExperimentRecord>& records);

/// Record CSV with the canonical column set and ordering (sorted by
/// instance, then method), independent of how the records were produced.
std::string records_to_csv(std::vector<ExperimentRecord> records);

std::vector<ExperimentRecord> records_from_json(const std::string& text);

}  // namespace sscfl
