#pragma once

#include <cstdint>
#include <limits>
#include <utility>
#include <vector>

#include "sscfl/model.hpp"

namespace sscfl::detail {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Bound-constrained LP in computational form. Columns are the free structural
// variables of a ModelSpec (fixed-to-zero variables are eliminated here, so
// restricted models are genuinely small). Rows hold their right-hand sides as
// activity ranges; strengthening rows are appended on demand by the solver.
struct CompiledLp {
  int num_cols = 0;
  std::vector<double> obj;
  std::vector<double> col_lower, col_upper;
  std::vector<std::vector<std::pair<int, double>>> cols;  // per-column (row, coef)

  std::vector<double> row_lower, row_upper;

  // Mapping between model variables and columns (-1 when eliminated).
  std::vector<int> y_col;                 // per location
  std::vector<int> x_col;                 // per (i, j), row-major
  std::vector<VariableId> col_var;        // per column

  int num_rows() const { return static_cast<int>(row_lower.size()); }

  int add_row(double lo, double hi) {
    row_lower.push_back(lo);
    row_upper.push_back(hi);
    return num_rows() - 1;
  }

  void add_entry(int col, int row, double coef) {
    cols[col].push_back({row, coef});
  }
};

// Builds the computational form of a spec: assignment equalities, capacity
// linking rows, then any side constraints. The x <= y pairs are NOT compiled
// into rows; they are listed in `vi_pair_cols` for lazy activation.
struct CompiledModel {
  CompiledLp lp;
  std::vector<std::pair<int, int>> vi_pair_cols;  // (x col, y col) candidates
};

CompiledModel compile(const ModelSpec& spec);

}  // namespace sscfl::detail
