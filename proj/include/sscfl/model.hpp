#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sscfl/instance.hpp"

namespace sscfl {

enum class VarKind { Open, Assign };

struct VariableId {
  VarKind kind;
  int location = -1;
  int customer = -1;  // meaningful iff kind == Assign
};

/// Declarative description of the facility location program and of every
/// restricted or augmented variant the search needs. Values are immutable;
/// the derivation operations return new specs, so specs can be built
/// concurrently from a shared instance.
///
/// The base constraints are the assignment equalities and the
/// capacity-linking rows. The strengthening inequalities x_ij <= y_i are kept
/// as an explicit pair set and are NOT part of the base model: the search
/// adds them lazily, and the full set is too expensive to carry at scale.
class ModelSpec {
 public:
  ModelSpec(std::shared_ptr<const Instance> inst, bool relaxed);

  const Instance& instance() const { return *inst_; }
  std::shared_ptr<const Instance> instance_ptr() const { return inst_; }
  bool relaxed() const { return relaxed_; }

  bool y_fixed_zero(int i) const { return y_zero_[i] != 0; }
  bool x_fixed_zero(int i, int j) const { return x_zero_[xi(i, j)] != 0; }
  bool has_vi(int i, int j) const { return vi_[xi(i, j)] != 0; }
  std::int64_t num_vi_pairs() const { return num_vi_; }
  std::optional<double> min_open() const { return min_open_; }
  std::optional<double> cutoff() const { return cutoff_; }
  const std::optional<std::vector<int>>& bucket_cover() const {
    return bucket_cover_;
  }

  /// Number of variables the backend will actually see.
  std::int64_t num_free_variables() const;

  ModelSpec with_relaxed(bool relaxed) const;

  /// Adds x_ij <= y_i rows for the given pairs. Grows monotonically;
  /// duplicates are ignored. Throws DataError on an out-of-bounds pair.
  ModelSpec with_vi_pairs(const std::vector<std::pair<int, int>>& pairs) const;
  ModelSpec with_all_vi_pairs() const;

  /// Adds the lower bound `lower` on the number of open locations.
  ModelSpec with_min_open(double lower) const;

  /// Keeps only the given variables; everything else is fixed to zero and
  /// eliminated before the solve. An x variable whose location is dropped is
  /// dropped as well (the capacity row forces it to zero anyway).
  ModelSpec restricted(const std::vector<int>& keep_y,
                       const std::vector<std::pair<int, int>>& keep_x) const;

  /// Objective cutoff with strict-improvement semantics: solutions with value
  /// worse than or equal to the incumbent are cut off. delta < 0 selects the
  /// default max(1e-6 * |incumbent|, 1e-9); with integer-valued cost data a
  /// fixed delta such as 0.5 may be configured instead. A +infinity incumbent
  /// is a no-op sentinel.
  ModelSpec with_cutoff(double incumbent, double delta = -1.0) const;

  /// Requires at least one of `locs` to be open. Throws on an empty set.
  ModelSpec with_bucket_cover(const std::vector<int>& locs) const;

  /// CPLEX-style LP text of the model, for debugging against other solvers.
  std::string to_lp_text() const;

 private:
  std::size_t xi(int i, int j) const {
    return static_cast<std::size_t>(i) * inst_->num_customers + j;
  }
  void check_location(int i) const;
  void check_pair(int i, int j) const;

  std::shared_ptr<const Instance> inst_;
  bool relaxed_ = false;
  std::vector<std::uint8_t> y_zero_;
  std::vector<std::uint8_t> x_zero_;
  std::vector<std::uint8_t> vi_;
  std::int64_t num_vi_ = 0;
  std::optional<double> min_open_;
  std::optional<double> cutoff_;
  std::optional<std::vector<int>> bucket_cover_;
};

ModelSpec build_full(std::shared_ptr<const Instance> inst, bool relaxed);

}  // namespace sscfl
