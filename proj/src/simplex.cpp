#include "simplex.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

namespace sscfl::detail {

namespace {
constexpr double kFeasTol = 1e-9;
constexpr double kDualTol = 1e-9;
constexpr double kPivotTol = 1e-10;
constexpr double kZeroTol = 1e-12;
constexpr long kRefactorInterval = 100;
constexpr long kDegenerateStreakForBland = 200;
}  // namespace

void Simplex::add_vi_rows(const std::vector<std::pair<int, int>>& pairs) {
  for (const auto& [xc, yc] : pairs) {
    const int r = lp_.add_row(-kInf, 0.0);
    lp_.add_entry(xc, r, 1.0);
    lp_.add_entry(yc, r, -1.0);
  }
  if (!state_.empty()) {
    // New logicals carry their rows as basic variables.
    for (std::size_t k = 0; k < pairs.size(); ++k) state_.push_back(2);
    factorized_ = false;
  }
}

std::vector<std::uint8_t> Simplex::purge_nonbinding_rows(int first_row) {
  const int old_rows = lp_.num_rows();
  std::vector<std::uint8_t> keep_flags(
      static_cast<std::size_t>(old_rows - first_row), 1);
  if (state_.empty()) return keep_flags;

  std::vector<int> new_row_of(old_rows, -1);
  int next = 0;
  for (int r = 0; r < old_rows; ++r) {
    const bool drop = r >= first_row && state_[lp_.num_cols + r] == 2;
    if (drop)
      keep_flags[r - first_row] = 0;
    else
      new_row_of[r] = next++;
  }
  if (next == old_rows) return keep_flags;

  for (int c = 0; c < lp_.num_cols; ++c) {
    auto& col = lp_.cols[c];
    std::size_t w = 0;
    for (const auto& [r, v] : col)
      if (new_row_of[r] >= 0) col[w++] = {new_row_of[r], v};
    col.resize(w);
  }
  std::vector<std::uint8_t> new_state(lp_.num_cols + next);
  std::copy_n(state_.begin(), lp_.num_cols, new_state.begin());
  for (int r = 0; r < old_rows; ++r) {
    if (new_row_of[r] < 0) continue;
    new_state[lp_.num_cols + new_row_of[r]] = state_[lp_.num_cols + r];
    lp_.row_lower[new_row_of[r]] = lp_.row_lower[r];
    lp_.row_upper[new_row_of[r]] = lp_.row_upper[r];
  }
  lp_.row_lower.resize(next);
  lp_.row_upper.resize(next);
  state_ = std::move(new_state);
  factorized_ = false;
  return keep_flags;
}

void Simplex::reset_basis() {
  state_.clear();
  basic_cols_.clear();
  in_basis_.clear();
  factorized_ = false;
}

void Simplex::set_basis(const SimplexBasis& basis) {
  if (!basis.valid || static_cast<int>(basis.state.size()) > total_cols()) {
    reset_basis();
    return;
  }
  state_ = basis.state;
  // Rows appended after the snapshot keep their logicals basic.
  state_.resize(total_cols(), 2);
  factorized_ = false;
}

SimplexBasis Simplex::basis_snapshot() const {
  SimplexBasis b;
  b.state = state_;
  b.valid = !state_.empty();
  return b;
}

void Simplex::build_slack_basis() {
  const int n = total_cols();
  state_.assign(n, 0);
  for (int c = 0; c < lp_.num_cols; ++c)
    state_[c] = std::isfinite(lower_of(c)) || !std::isfinite(upper_of(c)) ? 0 : 1;
  for (int r = 0; r < lp_.num_rows(); ++r) state_[lp_.num_cols + r] = 2;
  factorized_ = false;
}

bool Simplex::refactorize() {
  const int m = lp_.num_rows();
  const int n = total_cols();
  basic_cols_.clear();
  for (int c = 0; c < n; ++c)
    if (state_[c] == 2) basic_cols_.push_back(c);
  if (static_cast<int>(basic_cols_.size()) != m) return false;
  in_basis_.assign(n, -1);
  for (int r = 0; r < m; ++r) in_basis_[basic_cols_[r]] = r;

  // Gauss-Jordan with partial pivoting on [B | I]; ends with [I | B^-1].
  std::vector<double> work(static_cast<std::size_t>(m) * m, 0.0);
  auto at = [&](int r, int c) -> double& {
    return work[static_cast<std::size_t>(r) * m + c];
  };
  for (int k = 0; k < m; ++k) {
    const int c = basic_cols_[k];
    if (c < lp_.num_cols) {
      for (const auto& [r, v] : lp_.cols[c]) at(r, k) = v;
    } else {
      at(c - lp_.num_cols, k) = -1.0;
    }
  }
  binv_t_.assign(static_cast<std::size_t>(m) * m, 0.0);
  // inv(r, c) == element (r, c) of the right block == Binv[r][c]; stored
  // transposed so that column r of Binv is the contiguous slice binv_t_[r*m..].
  auto inv = [&](int r, int c) -> double& {
    return binv_t_[static_cast<std::size_t>(c) * m + r];
  };
  for (int k = 0; k < m; ++k) inv(k, k) = 1.0;

  for (int k = 0; k < m; ++k) {
    int piv = -1;
    double best = kPivotTol;
    for (int r = k; r < m; ++r) {
      if (std::abs(at(r, k)) > best) {
        best = std::abs(at(r, k));
        piv = r;
      }
    }
    if (piv < 0) return false;  // singular basis
    if (piv != k) {
      for (int c = 0; c < m; ++c) std::swap(at(piv, c), at(k, c));
      for (int c = 0; c < m; ++c) std::swap(inv(piv, c), inv(k, c));
    }
    const double p = at(k, k);
    for (int c = 0; c < m; ++c) at(k, c) /= p;
    for (int c = 0; c < m; ++c) inv(k, c) /= p;
    for (int r = 0; r < m; ++r) {
      if (r == k) continue;
      const double f = at(r, k);
      if (f == 0.0) continue;
      for (int c = k; c < m; ++c) at(r, c) -= f * at(k, c);
      for (int c = 0; c < m; ++c) inv(r, c) -= f * inv(k, c);
    }
  }
  factorized_ = true;
  updates_since_refactor_ = 0;
  return true;
}

void Simplex::ftran(int col, std::vector<double>& out) const {
  const int m = lp_.num_rows();
  out.assign(m, 0.0);
  if (col < lp_.num_cols) {
    for (const auto& [r, v] : lp_.cols[col]) {
      const double* brow = &binv_t_[static_cast<std::size_t>(r) * m];
      for (int k = 0; k < m; ++k) out[k] += v * brow[k];
    }
  } else {
    const int r = col - lp_.num_cols;
    const double* brow = &binv_t_[static_cast<std::size_t>(r) * m];
    for (int k = 0; k < m; ++k) out[k] -= brow[k];
  }
}

void Simplex::compute_duals_from(const std::vector<double>& basic_cost,
                                 std::vector<double>& pi) const {
  const int m = lp_.num_rows();
  pi.assign(m, 0.0);
  for (int r = 0; r < m; ++r) {
    const double* brow = &binv_t_[static_cast<std::size_t>(r) * m];
    double s = 0.0;
    for (int k = 0; k < m; ++k) s += brow[k] * basic_cost[k];
    pi[r] = s;
  }
}

void Simplex::compute_basic_values() {
  const int m = lp_.num_rows();
  const int n = total_cols();
  value_.assign(n, 0.0);
  std::vector<double> rhs(m, 0.0);
  for (int c = 0; c < n; ++c) {
    if (state_[c] == 2) continue;
    double v = state_[c] == 1 ? upper_of(c) : lower_of(c);
    if (!std::isfinite(v)) v = 0.0;
    value_[c] = v;
    if (v == 0.0) continue;
    if (c < lp_.num_cols) {
      for (const auto& [r, coef] : lp_.cols[c]) rhs[r] -= coef * v;
    } else {
      rhs[c - lp_.num_cols] += v;
    }
  }
  for (int k = 0; k < m; ++k) {
    double s = 0.0;
    for (int r = 0; r < m; ++r)
      s += binv_t_[static_cast<std::size_t>(r) * m + k] * rhs[r];
    value_[basic_cols_[k]] = s;
  }
}

double Simplex::infeasibility(int c) const {
  const double v = value_[c];
  const double lo = lower_of(c), hi = upper_of(c);
  if (v < lo - kFeasTol) return v - lo;  // negative: below its range
  if (v > hi + kFeasTol) return v - hi;  // positive: above its range
  return 0.0;
}

double Simplex::total_infeasibility() const {
  double s = 0.0;
  for (int k = 0; k < lp_.num_rows(); ++k)
    s += std::abs(infeasibility(basic_cols_[k]));
  return s;
}

SimplexStatus Simplex::iterate(bool phase1) {
  const int m = lp_.num_rows();
  const int n = total_cols();
  const long iter_limit = 20000 + 50L * (m + n);
  long degenerate_streak = 0;
  std::vector<double> basic_cost(m), pi, alpha;

  for (long iter = 0;; ++iter) {
    if (iter > iter_limit) return SimplexStatus::Numerical;
    ++total_iterations_;
    if (updates_since_refactor_ >= kRefactorInterval) {
      if (!refactorize()) return SimplexStatus::Numerical;
      compute_basic_values();
    }

    bool any_infeasible = false;
    for (int k = 0; k < m; ++k) {
      const int c = basic_cols_[k];
      const double inf = infeasibility(c);
      basic_cost[k] = phase1 ? (inf > 0.0 ? 1.0 : (inf < 0.0 ? -1.0 : 0.0))
                             : cost_of(c);
      if (inf != 0.0) any_infeasible = true;
    }
    if (phase1 && !any_infeasible) return SimplexStatus::Optimal;
    if (!phase1 && any_infeasible) return SimplexStatus::Numerical;

    compute_duals_from(basic_cost, pi);

    // Pricing. Phase-1 costs live on the basics only, so a nonbasic column
    // prices as -pi . a_c there and as c_c - pi . a_c in phase 2.
    int enter = -1;
    double enter_d = 0.0;
    double best_merit = kDualTol;
    const bool bland = degenerate_streak >= kDegenerateStreakForBland;
    for (int c = 0; c < n; ++c) {
      if (state_[c] == 2) continue;
      const double lo = lower_of(c), hi = upper_of(c);
      if (lo == hi) continue;  // fixed, never enters
      double dc;
      if (c < lp_.num_cols) {
        double s = 0.0;
        for (const auto& [r, v] : lp_.cols[c]) s += pi[r] * v;
        dc = (phase1 ? 0.0 : lp_.obj[c]) - s;
      } else {
        dc = pi[c - lp_.num_cols];
      }
      double merit = 0.0;
      if (state_[c] == 0 && dc < -kDualTol) merit = -dc;
      if (state_[c] == 1 && dc > kDualTol) merit = dc;
      if (merit > best_merit) {
        best_merit = merit;
        enter = c;
        enter_d = dc;
        if (bland) break;  // smallest eligible index wins
      }
    }
    (void)enter_d;
    if (enter < 0) {
      return phase1 ? SimplexStatus::Infeasible : SimplexStatus::Optimal;
    }

    const double sigma = state_[enter] == 0 ? 1.0 : -1.0;
    ftran(enter, alpha);

    // Bounded ratio test, first breakpoint. A basic variable beyond one of
    // its bounds blocks when it reaches that bound (its phase-1 cost slope
    // flattens there); one moving deeper into violation never blocks, its
    // growth is already priced into the reduced cost.
    const double span = upper_of(enter) - lower_of(enter);
    double limit = std::isfinite(span) ? span : kInf;
    int leave_row = -1;
    bool leave_to_upper = false;

    for (int k = 0; k < m; ++k) {
      const double delta = -sigma * alpha[k];
      if (std::abs(delta) <= kPivotTol) continue;
      const int c = basic_cols_[k];
      const double v = value_[c];
      const double lo = lower_of(c), hi = upper_of(c);
      const bool below = phase1 && v < lo - kFeasTol;
      const bool above = phase1 && v > hi + kFeasTol;
      double target;
      bool to_upper;
      if (delta > 0.0) {
        if (above) continue;
        target = below ? lo : hi;
        to_upper = !below;
      } else {
        if (below) continue;
        target = above ? hi : lo;
        to_upper = above;
      }
      if (!std::isfinite(target)) continue;
      double t = (target - v) / delta;
      if (t < 0.0) t = 0.0;  // within tolerance of the bound: degenerate
      const bool take =
          t < limit - 1e-12 ||
          (leave_row >= 0 && t <= limit + 1e-12 &&
           std::abs(alpha[k]) > std::abs(alpha[leave_row]) + 1e-12);
      if (take) {
        limit = std::min(limit, t);
        leave_row = k;
        leave_to_upper = to_upper;
      }
    }

    if (!std::isfinite(limit))
      return phase1 ? SimplexStatus::Numerical : SimplexStatus::Unbounded;

    if (limit <= kZeroTol)
      ++degenerate_streak;
    else
      degenerate_streak = 0;

    if (limit > 0.0)
      for (int k = 0; k < m; ++k)
        value_[basic_cols_[k]] -= sigma * limit * alpha[k];

    if (leave_row < 0) {
      // Bound flip; snap exactly onto the other bound.
      state_[enter] = state_[enter] == 0 ? 1 : 0;
      value_[enter] = state_[enter] == 1 ? upper_of(enter) : lower_of(enter);
      continue;
    }
    value_[enter] = (state_[enter] == 0 ? lower_of(enter) : upper_of(enter)) +
                    sigma * limit;

    const int leave_col = basic_cols_[leave_row];
    const double pivot = alpha[leave_row];
    if (std::abs(pivot) < kPivotTol) {
      if (!refactorize()) return SimplexStatus::Numerical;
      compute_basic_values();
      continue;
    }

    // Snap the leaving variable onto its bound to stop error accumulation.
    value_[leave_col] =
        leave_to_upper ? upper_of(leave_col) : lower_of(leave_col);
    state_[leave_col] = leave_to_upper ? 1 : 0;
    state_[enter] = 2;
    basic_cols_[leave_row] = enter;
    in_basis_[leave_col] = -1;
    in_basis_[enter] = leave_row;

    // Product-form update of the stored transpose: for every column c of
    // Binv, scale the leave_row entry and sweep it through the rest.
    for (int c = 0; c < m; ++c) {
      double* brow = &binv_t_[static_cast<std::size_t>(c) * m];
      const double t = brow[leave_row] / pivot;
      if (t == 0.0) continue;
      brow[leave_row] = t;
      for (int k = 0; k < m; ++k) {
        if (k == leave_row) continue;
        brow[k] -= alpha[k] * t;
      }
    }
    ++updates_since_refactor_;
  }
}

bool Simplex::run_checks_at_optimum() {
  const int m = lp_.num_rows();
  std::vector<double> act(m, 0.0);
  for (int c = 0; c < lp_.num_cols; ++c) {
    const double v = value_[c];
    if (v == 0.0) continue;
    for (const auto& [r, coef] : lp_.cols[c]) act[r] += coef * v;
  }
  double scale = 1.0;
  for (int c = 0; c < lp_.num_cols; ++c)
    scale = std::max(scale, std::abs(value_[c]));
  for (int r = 0; r < m; ++r) {
    const double s = value_[lp_.num_cols + r];
    if (std::abs(act[r] - s) > 1e-7 * scale) return false;
    if (s < lp_.row_lower[r] - 1e-7 * scale) return false;
    if (s > lp_.row_upper[r] + 1e-7 * scale) return false;
  }
  for (int c = 0; c < lp_.num_cols; ++c) {
    if (value_[c] < lp_.col_lower[c] - 1e-7) return false;
    if (value_[c] > lp_.col_upper[c] + 1e-7) return false;
  }
  return true;
}

SimplexStatus Simplex::solve() {
  if (lp_.num_rows() == 0) {
    value_.assign(total_cols(), 0.0);
    reduced_cost_.assign(lp_.num_cols, 0.0);
    for (int c = 0; c < lp_.num_cols; ++c) {
      value_[c] = lp_.obj[c] >= 0.0 ? lp_.col_lower[c] : lp_.col_upper[c];
      reduced_cost_[c] = lp_.obj[c];
    }
    return SimplexStatus::Optimal;
  }

  if (static_cast<int>(state_.size()) != total_cols()) build_slack_basis();

  cold_retry_used_ = false;
  for (int attempt = 0; attempt < 6; ++attempt) {
    if (!factorized_) {
      if (!refactorize()) {
        if (cold_retry_used_) return SimplexStatus::Numerical;
        cold_retry_used_ = true;
        build_slack_basis();
        if (!refactorize()) return SimplexStatus::Numerical;
      }
    }
    compute_basic_values();

    SimplexStatus st = iterate(/*phase1=*/true);
    if (st == SimplexStatus::Optimal) {
      st = iterate(/*phase1=*/false);
      if (st == SimplexStatus::Numerical && total_infeasibility() > 0.0) {
        // Drifted out of bounds mid-phase-2; repair and resume.
        if (!refactorize()) st = SimplexStatus::Numerical;
        else {
          compute_basic_values();
          continue;
        }
      }
    }

    if (st == SimplexStatus::Optimal && !run_checks_at_optimum())
      st = SimplexStatus::Numerical;

    if (st == SimplexStatus::Numerical && !cold_retry_used_) {
      cold_retry_used_ = true;
      build_slack_basis();
      continue;
    }

    if (st == SimplexStatus::Optimal) {
      const int m = lp_.num_rows();
      std::vector<double> basic_cost(m), pi;
      for (int k = 0; k < m; ++k) basic_cost[k] = cost_of(basic_cols_[k]);
      compute_duals_from(basic_cost, pi);
      reduced_cost_.assign(lp_.num_cols, 0.0);
      for (int c = 0; c < lp_.num_cols; ++c) {
        if (state_[c] == 2) continue;  // basic: exactly zero by construction
        double s = 0.0;
        for (const auto& [r, v] : lp_.cols[c]) s += pi[r] * v;
        reduced_cost_[c] = lp_.obj[c] - s;
      }
    }
    return st;
  }
  return SimplexStatus::Numerical;
}

double Simplex::objective() const {
  double z = 0.0;
  for (int c = 0; c < lp_.num_cols; ++c) z += lp_.obj[c] * value_[c];
  return z;
}

}  // namespace sscfl::detail
