#pragma once

#include <cstdint>
#include <vector>

#include "compiled_lp.hpp"

namespace sscfl::detail {

enum class SimplexStatus { Optimal, Infeasible, Unbounded, Numerical };

struct SimplexBasis {
  std::vector<std::uint8_t> state;  // per column: 0 lower, 1 upper, 2 basic
  bool valid = false;
};

// Bounded-variable revised primal simplex with a dense explicit basis
// inverse. Phase 1 minimizes the total bound infeasibility of the basic
// variables (no artificial columns), which serves cold starts and warm starts
// after bound changes or row additions alike. All pivoting rules carry
// explicit tie-breaks, so runs are deterministic.
class Simplex {
 public:
  explicit Simplex(CompiledLp& lp) : lp_(lp) {}

  // Appends x - y <= 0 rows. Existing basis stays valid: the new logicals
  // enter as basic carriers of the (possibly violated) new rows.
  void add_vi_rows(const std::vector<std::pair<int, int>>& pairs);

  // Drops appended rows (indices >= first_row) whose logicals are basic,
  // i.e. rows that are not binding at the current basis. Removing a row
  // together with its basic logical keeps the basis square. Returns one flag
  // per appended row: true if kept. The caller re-adds a dropped row when it
  // is violated again.
  std::vector<std::uint8_t> purge_nonbinding_rows(int first_row);

  // Solves from the internal basis when one exists, from the slack basis
  // otherwise. Bounds in lp_ may have changed between calls.
  SimplexStatus solve();

  void set_basis(const SimplexBasis& basis);
  SimplexBasis basis_snapshot() const;
  void reset_basis();

  double objective() const;
  double col_value(int c) const { return value_[c]; }
  // Reduced cost of a structural column at the final basis.
  double reduced_cost(int c) const { return reduced_cost_[c]; }
  long iterations() const { return total_iterations_; }

 private:
  int total_cols() const { return lp_.num_cols + lp_.num_rows(); }
  double lower_of(int c) const {
    return c < lp_.num_cols ? lp_.col_lower[c] : lp_.row_lower[c - lp_.num_cols];
  }
  double upper_of(int c) const {
    return c < lp_.num_cols ? lp_.col_upper[c] : lp_.row_upper[c - lp_.num_cols];
  }
  double cost_of(int c) const { return c < lp_.num_cols ? lp_.obj[c] : 0.0; }

  void build_slack_basis();
  bool refactorize();          // recomputes binv_t_ from the basic set
  void compute_basic_values();
  void ftran(int col, std::vector<double>& out) const;
  void price(const std::vector<double>& pi, std::vector<double>& d) const;
  void compute_duals_from(const std::vector<double>& row_cost,
                          std::vector<double>& pi) const;

  // One phase of primal iterations; phase1 selects composite infeasibility
  // costs. Returns Optimal when no eligible entering column remains.
  SimplexStatus iterate(bool phase1);

  double infeasibility(int c) const;
  double total_infeasibility() const;
  bool run_checks_at_optimum();

  CompiledLp& lp_;
  std::vector<std::uint8_t> state_;  // 0 lower, 1 upper, 2 basic
  std::vector<int> basic_cols_;      // per row
  std::vector<int> in_basis_;        // per column: row or -1
  std::vector<double> value_;        // per column
  std::vector<double> binv_t_;       // row-major transpose of the inverse
  std::vector<double> reduced_cost_;
  bool factorized_ = false;
  long updates_since_refactor_ = 0;
  long total_iterations_ = 0;
  bool cold_retry_used_ = false;
};

}  // namespace sscfl::detail
