#include "sscfl/backend.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <memory>
#include <numeric>
#include <queue>

#include "compiled_lp.hpp"
#include "simplex.hpp"

namespace sscfl {

namespace detail {

CompiledModel compile(const ModelSpec& spec) {
  const Instance& inst = spec.instance();
  const int m = inst.num_locations;
  const int n = inst.num_customers;

  CompiledModel out;
  CompiledLp& lp = out.lp;
  lp.y_col.assign(m, -1);
  lp.x_col.assign(static_cast<std::size_t>(m) * n, -1);

  for (int i = 0; i < m; ++i) {
    if (spec.y_fixed_zero(i)) continue;
    lp.y_col[i] = lp.num_cols++;
    lp.obj.push_back(inst.fixed_cost[i]);
    lp.col_var.push_back({VarKind::Open, i, -1});
  }
  for (int i = 0; i < m; ++i) {
    if (spec.y_fixed_zero(i)) continue;
    for (int j = 0; j < n; ++j) {
      if (spec.x_fixed_zero(i, j)) continue;
      lp.x_col[static_cast<std::size_t>(i) * n + j] = lp.num_cols++;
      lp.obj.push_back(inst.demand[j] * inst.cost(i, j));
      lp.col_var.push_back({VarKind::Assign, i, j});
    }
  }
  lp.col_lower.assign(lp.num_cols, 0.0);
  lp.col_upper.assign(lp.num_cols, 1.0);
  lp.cols.assign(lp.num_cols, {});

  for (int j = 0; j < n; ++j) {
    const int r = lp.add_row(1.0, 1.0);
    for (int i = 0; i < m; ++i) {
      const int c = lp.x_col[static_cast<std::size_t>(i) * n + j];
      if (c >= 0) lp.add_entry(c, r, 1.0);
    }
  }
  for (int i = 0; i < m; ++i) {
    if (lp.y_col[i] < 0) continue;
    const int r = lp.add_row(-kInf, 0.0);
    for (int j = 0; j < n; ++j) {
      const int c = lp.x_col[static_cast<std::size_t>(i) * n + j];
      if (c >= 0) lp.add_entry(c, r, inst.demand[j]);
    }
    lp.add_entry(lp.y_col[i], r, -inst.capacity[i]);
  }
  if (spec.min_open()) {
    const int r = lp.add_row(*spec.min_open(), kInf);
    for (int i = 0; i < m; ++i)
      if (lp.y_col[i] >= 0) lp.add_entry(lp.y_col[i], r, 1.0);
  }
  if (spec.bucket_cover()) {
    const int r = lp.add_row(1.0, kInf);
    for (int i : *spec.bucket_cover())
      if (lp.y_col[i] >= 0) lp.add_entry(lp.y_col[i], r, 1.0);
  }
  if (spec.cutoff()) {
    const int r = lp.add_row(-kInf, *spec.cutoff());
    for (int c = 0; c < lp.num_cols; ++c) lp.add_entry(c, r, lp.obj[c]);
  }

  if (spec.num_vi_pairs() > 0) {
    for (int i = 0; i < m; ++i) {
      const int yc = lp.y_col[i];
      if (yc < 0) continue;
      for (int j = 0; j < n; ++j) {
        const int xc = lp.x_col[static_cast<std::size_t>(i) * n + j];
        if (xc >= 0 && spec.has_vi(i, j)) out.vi_pair_cols.push_back({xc, yc});
      }
    }
  }
  return out;
}

namespace {

double now_seconds() {
  using clock = std::chrono::steady_clock;
  return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

// Solves to LP optimality with lazy activation of the x <= y rows: rows
// violated at the current optimum are appended and the solve resumes from the
// same basis. At exit every listed pair is satisfied, so the result matches
// the model with all rows present (absent rows carry zero duals).
SimplexStatus solve_with_lazy_vi(Simplex& simplex, CompiledModel& model,
                                 std::vector<std::uint8_t>& vi_added) {
  for (;;) {
    const SimplexStatus st = simplex.solve();
    if (st != SimplexStatus::Optimal) return st;
    std::vector<std::pair<int, int>> violated;
    for (std::size_t k = 0; k < model.vi_pair_cols.size(); ++k) {
      if (vi_added[k]) continue;
      const auto& [xc, yc] = model.vi_pair_cols[k];
      if (simplex.col_value(xc) > simplex.col_value(yc) + 1e-9) {
        violated.push_back({xc, yc});
        vi_added[k] = 1;
      }
    }
    if (violated.empty()) return st;
    simplex.add_vi_rows(violated);
  }
}

struct SearchNode {
  double bound;
  long id;
  std::vector<std::pair<int, double>> fixings;
};

struct NodeOrder {
  const std::vector<SearchNode>* arena;
  bool operator()(int a, int b) const {
    const SearchNode& na = (*arena)[a];
    const SearchNode& nb = (*arena)[b];
    if (na.bound != nb.bound) return na.bound > nb.bound;  // min-heap
    return na.id > nb.id;
  }
};

// Greedy rounding of a node relaxation into a single-source solution:
// locations are opened in decreasing LP-value order, customers assigned by
// decreasing demand to the cheapest admissible open location. Only columns
// the model actually has are used, so permanently fixed variables never
// appear. Returns a solution satisfying every model row, or nothing.
std::optional<BinarySolution> round_to_feasible(const Instance& inst,
                                                const ModelSpec& spec,
                                                const CompiledLp& lp,
                                                const Simplex& simplex) {
  const int m = inst.num_locations;
  const int n = inst.num_customers;

  std::vector<int> priority;
  for (int i = 0; i < m; ++i)
    if (lp.y_col[i] >= 0) priority.push_back(i);
  std::vector<double> yval(m, 0.0);
  for (int i : priority) yval[i] = simplex.col_value(lp.y_col[i]);
  std::sort(priority.begin(), priority.end(), [&](int a, int b) {
    if (yval[a] != yval[b]) return yval[a] > yval[b];
    if (inst.capacity[a] != inst.capacity[b])
      return inst.capacity[a] > inst.capacity[b];
    return a < b;
  });

  std::vector<char> open(m, 0);
  std::vector<double> slack(m, 0.0);
  std::size_t opened = 0;
  auto open_next = [&]() -> bool {
    while (opened < priority.size()) {
      const int i = priority[opened++];
      open[i] = 1;
      slack[i] = inst.capacity[i];
      return true;
    }
    return false;
  };
  for (std::size_t k = 0; k < priority.size() && yval[priority[k]] >= 0.5; ++k)
    open_next();

  std::vector<int> customers(n);
  std::iota(customers.begin(), customers.end(), 0);
  std::sort(customers.begin(), customers.end(), [&](int a, int b) {
    if (inst.demand[a] != inst.demand[b])
      return inst.demand[a] > inst.demand[b];
    return a < b;
  });

  std::vector<int> assign(n, -1);
  for (int j : customers) {
    for (;;) {
      int best = -1;
      double best_cost = 0.0;
      for (int i = 0; i < m; ++i) {
        if (!open[i] || slack[i] < inst.demand[j]) continue;
        if (lp.x_col[static_cast<std::size_t>(i) * n + j] < 0) continue;
        const double c = inst.cost(i, j);
        if (best < 0 || c < best_cost) {
          best = i;
          best_cost = c;
        }
      }
      if (best >= 0) {
        assign[j] = best;
        slack[best] -= inst.demand[j];
        break;
      }
      if (!open_next()) return std::nullopt;
    }
  }

  // Unused locations only cost money; keep them only while a minimum open
  // count requires it.
  int open_count = 0;
  for (int i = 0; i < m; ++i) open_count += open[i];
  const double min_open = spec.min_open() ? *spec.min_open() : 0.0;
  for (int i = 0; i < m; ++i) {
    if (!open[i] || slack[i] != inst.capacity[i]) continue;
    if (open_count - 1 < min_open) break;
    open[i] = 0;
    --open_count;
  }

  // One cheap improvement sweep: move customers to cheaper open locations.
  for (int j = 0; j < n; ++j) {
    const int cur = assign[j];
    for (int i = 0; i < m; ++i) {
      if (!open[i] || i == cur || slack[i] < inst.demand[j]) continue;
      if (lp.x_col[static_cast<std::size_t>(i) * n + j] < 0) continue;
      if (inst.cost(i, j) < inst.cost(cur, j)) {
        slack[i] -= inst.demand[j];
        slack[cur] += inst.demand[j];
        assign[j] = i;
        break;
      }
    }
  }

  BinarySolution sol;
  sol.open.assign(m, false);
  for (int i = 0; i < m; ++i) sol.open[i] = open[i] != 0;
  sol.assign = std::move(assign);
  sol.objective = sol.evaluate(inst);
  if (!check_feasible(inst, sol).feasible()) return std::nullopt;
  if (spec.cutoff() && sol.objective > *spec.cutoff()) return std::nullopt;
  if (spec.bucket_cover()) {
    bool covered = false;
    for (int i : *spec.bucket_cover()) covered |= sol.open[i];
    if (!covered) return std::nullopt;
  }
  if (min_open > 0.0) {
    int count = 0;
    for (int i = 0; i < m; ++i) count += sol.open[i];
    if (count < min_open) return std::nullopt;
  }
  return sol;
}

}  // namespace

}  // namespace detail

double LpResult::x_at(int i, int j, int num_customers) const {
  const std::int64_t key =
      static_cast<std::int64_t>(i) * num_customers + j;
  auto it = std::lower_bound(
      x_nonzeros.begin(), x_nonzeros.end(), key,
      [](const auto& a, std::int64_t k) { return a.first < k; });
  return it != x_nonzeros.end() && it->first == key ? it->second : 0.0;
}

LpResult solve_lp(const ModelSpec& m, bool want_reduced_costs) {
  using namespace detail;
  if (!m.relaxed())
    throw SolverError("solve_lp requires a relaxed model");
  const Instance& inst = m.instance();
  CompiledModel model = compile(m);
  Simplex simplex(model.lp);
  std::vector<std::uint8_t> vi_added(model.vi_pair_cols.size(), 0);
  const SimplexStatus st = solve_with_lazy_vi(simplex, model, vi_added);

  LpResult out;
  out.iterations = simplex.iterations();
  switch (st) {
    case SimplexStatus::Optimal: out.status = LpStatus::Optimal; break;
    case SimplexStatus::Infeasible: out.status = LpStatus::Infeasible; break;
    case SimplexStatus::Unbounded: out.status = LpStatus::Unbounded; break;
    case SimplexStatus::Numerical:
      throw SolverError("LP solve failed numerically on " + inst.name);
  }
  if (out.status != LpStatus::Optimal) {
    out.objective = std::numeric_limits<double>::infinity();
    return out;
  }
  out.objective = simplex.objective();
  out.y.assign(inst.num_locations, 0.0);
  for (int i = 0; i < inst.num_locations; ++i)
    if (model.lp.y_col[i] >= 0)
      out.y[i] = simplex.col_value(model.lp.y_col[i]);
  const std::size_t mn =
      static_cast<std::size_t>(inst.num_locations) * inst.num_customers;
  for (std::size_t k = 0; k < mn; ++k) {
    const int c = model.lp.x_col[k];
    if (c < 0) continue;
    const double v = simplex.col_value(c);
    if (v > 1e-11) out.x_nonzeros.push_back({static_cast<std::int64_t>(k), v});
  }
  if (want_reduced_costs) {
    out.reduced_costs_x.assign(mn, 0.0);
    for (std::size_t k = 0; k < mn; ++k) {
      const int c = model.lp.x_col[k];
      if (c >= 0) out.reduced_costs_x[k] = simplex.reduced_cost(c);
    }
  }
  return out;
}

MipResult solve_mip(const ModelSpec& m, const Budget& budget) {
  using namespace detail;
  if (m.relaxed())
    throw SolverError("solve_mip requires a binary model");
  const Instance& inst = m.instance();
  const double t_start = now_seconds();

  CompiledModel model = compile(m);
  CompiledLp& lp = model.lp;
  Simplex simplex(lp);
  std::vector<std::uint8_t> vi_added(model.vi_pair_cols.size(), 0);
  const std::vector<double> default_lower = lp.col_lower;
  const std::vector<double> default_upper = lp.col_upper;

  MipResult result;
  std::optional<double> incumbent_obj;

  std::vector<SearchNode> arena;
  std::priority_queue<int, std::vector<int>, NodeOrder> open(
      NodeOrder{&arena});
  arena.push_back({-std::numeric_limits<double>::infinity(), 0, {}});
  open.push(0);
  long next_id = 1;

  auto offer_incumbent = [&](BinarySolution sol) {
    if (!incumbent_obj || sol.objective < *incumbent_obj) {
      incumbent_obj = sol.objective;
      result.incumbent = std::move(sol);
    }
  };

  auto prune_eps = [&]() {
    return incumbent_obj ? 1e-9 * std::max(1.0, std::abs(*incumbent_obj)) : 0.0;
  };
  auto out_of_budget = [&]() {
    if (budget.stop && budget.stop->load(std::memory_order_relaxed))
      return true;
    if (budget.node_limit && result.nodes >= *budget.node_limit) return true;
    if (std::isfinite(budget.wall_seconds) &&
        now_seconds() - t_start > budget.wall_seconds)
      return true;
    return false;
  };

  bool stopped_early = false;
  double open_bound = std::numeric_limits<double>::infinity();

  while (!open.empty()) {
    const int node_idx = open.top();
    // Arena entries are stable; copy out the metadata we need before any push.
    const double node_bound = arena[node_idx].bound;
    if (incumbent_obj && node_bound >= *incumbent_obj - prune_eps()) {
      // Best-bound order: every remaining node is prunable as well.
      open_bound = node_bound;
      while (!open.empty()) open.pop();
      break;
    }
    if (out_of_budget()) {
      stopped_early = true;
      open_bound = node_bound;
      break;
    }
    open.pop();

    lp.col_lower = default_lower;
    lp.col_upper = default_upper;
    for (const auto& [c, v] : arena[node_idx].fixings) {
      lp.col_lower[c] = v;
      lp.col_upper[c] = v;
    }
    // The simplex keeps the previous node's basis as a warm start; phase 1
    // repairs whatever the bound changes broke. Children copy the fixings
    // they need, so the processed entry can release its payload.
    const std::vector<std::pair<int, double>> parent_fixings =
        std::move(arena[node_idx].fixings);
    arena[node_idx].fixings = {};
    ++result.nodes;

    const SimplexStatus st = solve_with_lazy_vi(simplex, model, vi_added);
    if (st == SimplexStatus::Infeasible) continue;
    if (st != SimplexStatus::Optimal)
      throw SolverError("node LP failed (" + inst.name + ")");

    const double lp_obj = simplex.objective();
    if (incumbent_obj && lp_obj >= *incumbent_obj - prune_eps()) continue;

    // Rounding heuristic: cheap incumbents make the best-bound queue prune.
    if (result.nodes == 1 || (!incumbent_obj && result.nodes % 5 == 0) ||
        result.nodes % 25 == 0) {
      if (auto sol = round_to_feasible(inst, m, lp, simplex))
        offer_incumbent(std::move(*sol));
    }

    // Find the branching variable: most fractional open variable first, then
    // the most fractional assignment variable.
    int branch_col = -1;
    double branch_frac = 1e-7;
    for (int c = 0; c < lp.num_cols; ++c) {
      if (lp.col_var[c].kind != VarKind::Open) continue;
      const double v = simplex.col_value(c);
      const double f = std::min(v, 1.0 - v);
      if (f > branch_frac + 1e-12) {
        branch_frac = f;
        branch_col = c;
      }
    }
    if (branch_col < 0) {
      branch_frac = 1e-7;
      for (int c = 0; c < lp.num_cols; ++c) {
        if (lp.col_var[c].kind != VarKind::Assign) continue;
        const double v = simplex.col_value(c);
        const double f = std::min(v, 1.0 - v);
        if (f > branch_frac + 1e-12) {
          branch_frac = f;
          branch_col = c;
        }
      }
    }

    if (branch_col < 0) {
      // Integral point: round and verify against the instance data.
      BinarySolution sol;
      sol.open.assign(inst.num_locations, false);
      sol.assign.assign(inst.num_customers, -1);
      for (int c = 0; c < lp.num_cols; ++c) {
        if (simplex.col_value(c) < 0.5) continue;
        const VariableId& var = lp.col_var[c];
        if (var.kind == VarKind::Open)
          sol.open[var.location] = true;
        else
          sol.assign[var.customer] = var.location;
      }
      sol.objective = sol.evaluate(inst);
      if (!check_feasible(inst, sol).feasible())
        throw SolverError("rounded node solution failed verification (" +
                          inst.name + ")");
      offer_incumbent(std::move(sol));
      continue;
    }

    for (const double v : {1.0, 0.0}) {
      SearchNode child;
      child.bound = lp_obj;
      child.id = next_id++;
      child.fixings = parent_fixings;
      child.fixings.push_back({branch_col, v});
      arena.push_back(std::move(child));
      open.push(static_cast<int>(arena.size()) - 1);
    }
  }

  if (result.incumbent) {
    if (stopped_early || !open.empty()) {
      result.status = MipStatus::FeasibleTimeLimit;
      result.bound = std::min(open_bound, *incumbent_obj);
    } else {
      result.status = MipStatus::Optimal;
      result.bound = std::min(open_bound, *incumbent_obj);
    }
  } else {
    if (stopped_early) {
      result.status = MipStatus::NoSolutionTimeLimit;
      result.bound = open_bound == std::numeric_limits<double>::infinity()
                         ? -std::numeric_limits<double>::infinity()
                         : open_bound;
    } else {
      result.status = MipStatus::Infeasible;
      result.bound = std::numeric_limits<double>::infinity();
    }
  }
  return result;
}

MipResult solve_exact(const Instance& inst, const Budget& budget) {
  auto shared = std::make_shared<Instance>(inst);
  const ModelSpec full =
      build_full(shared, /*relaxed=*/false).with_all_vi_pairs();
  return solve_mip(full, budget);
}

}  // namespace sscfl
