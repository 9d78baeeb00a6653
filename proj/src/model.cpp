#include "sscfl/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace sscfl {

ModelSpec::ModelSpec(std::shared_ptr<const Instance> inst, bool relaxed)
    : inst_(std::move(inst)), relaxed_(relaxed) {
  const std::size_t m = inst_->num_locations;
  const std::size_t mn = m * inst_->num_customers;
  y_zero_.assign(m, 0);
  x_zero_.assign(mn, 0);
  vi_.assign(mn, 0);
}

void ModelSpec::check_location(int i) const {
  if (i < 0 || i >= inst_->num_locations)
    throw DataError("location index " + std::to_string(i) + " out of bounds");
}

void ModelSpec::check_pair(int i, int j) const {
  check_location(i);
  if (j < 0 || j >= inst_->num_customers)
    throw DataError("customer index " + std::to_string(j) + " out of bounds");
}

std::int64_t ModelSpec::num_free_variables() const {
  std::int64_t n = 0;
  for (int i = 0; i < inst_->num_locations; ++i)
    if (!y_fixed_zero(i)) ++n;
  for (int i = 0; i < inst_->num_locations; ++i) {
    if (y_fixed_zero(i)) continue;
    for (int j = 0; j < inst_->num_customers; ++j)
      if (!x_fixed_zero(i, j)) ++n;
  }
  return n;
}

ModelSpec ModelSpec::with_relaxed(bool relaxed) const {
  ModelSpec out = *this;
  out.relaxed_ = relaxed;
  return out;
}

ModelSpec ModelSpec::with_vi_pairs(
    const std::vector<std::pair<int, int>>& pairs) const {
  ModelSpec out = *this;
  for (const auto& [i, j] : pairs) {
    check_pair(i, j);
    if (!out.vi_[xi(i, j)]) {
      out.vi_[xi(i, j)] = 1;
      ++out.num_vi_;
    }
  }
  return out;
}

ModelSpec ModelSpec::with_all_vi_pairs() const {
  ModelSpec out = *this;
  std::fill(out.vi_.begin(), out.vi_.end(), 1);
  out.num_vi_ = static_cast<std::int64_t>(out.vi_.size());
  return out;
}

ModelSpec ModelSpec::with_min_open(double lower) const {
  if (lower < 0.0 || lower > inst_->num_locations)
    throw DataError("min_open bound out of range");
  ModelSpec out = *this;
  out.min_open_ = lower;
  return out;
}

ModelSpec ModelSpec::restricted(
    const std::vector<int>& keep_y,
    const std::vector<std::pair<int, int>>& keep_x) const {
  ModelSpec out = *this;
  std::fill(out.y_zero_.begin(), out.y_zero_.end(), 1);
  std::fill(out.x_zero_.begin(), out.x_zero_.end(), 1);
  for (int i : keep_y) {
    check_location(i);
    out.y_zero_[i] = 0;
  }
  for (const auto& [i, j] : keep_x) {
    check_pair(i, j);
    if (!out.y_zero_[i]) out.x_zero_[xi(i, j)] = 0;
  }
  return out;
}

ModelSpec ModelSpec::with_cutoff(double incumbent, double delta) const {
  ModelSpec out = *this;
  if (!std::isfinite(incumbent)) return out;  // +inf sentinel: no constraint
  const double d =
      delta >= 0.0 ? delta : std::max(1e-6 * std::abs(incumbent), 1e-9);
  out.cutoff_ = incumbent - d;
  return out;
}

ModelSpec ModelSpec::with_bucket_cover(const std::vector<int>& locs) const {
  if (locs.empty()) throw DataError("bucket cover over an empty set");
  for (int i : locs) check_location(i);
  ModelSpec out = *this;
  out.bucket_cover_ = locs;
  return out;
}

ModelSpec build_full(std::shared_ptr<const Instance> inst, bool relaxed) {
  inst->validate();
  return ModelSpec(std::move(inst), relaxed);
}

std::string ModelSpec::to_lp_text() const {
  const Instance& inst = *inst_;
  std::ostringstream out;
  out.precision(17);
  auto yname = [](int i) { return "y_" + std::to_string(i + 1); };
  auto xname = [](int i, int j) {
    return "x_" + std::to_string(i + 1) + "_" + std::to_string(j + 1);
  };

  out << "\\ " << inst.name << "\nMinimize\n obj:";
  for (int i = 0; i < inst.num_locations; ++i)
    if (!y_fixed_zero(i)) out << " + " << inst.fixed_cost[i] << " " << yname(i);
  for (int i = 0; i < inst.num_locations; ++i) {
    if (y_fixed_zero(i)) continue;
    for (int j = 0; j < inst.num_customers; ++j)
      if (!x_fixed_zero(i, j))
        out << " + " << inst.demand[j] * inst.cost(i, j) << " " << xname(i, j);
  }
  out << "\nSubject To\n";
  for (int j = 0; j < inst.num_customers; ++j) {
    out << " assign_" << j + 1 << ":";
    for (int i = 0; i < inst.num_locations; ++i)
      if (!y_fixed_zero(i) && !x_fixed_zero(i, j)) out << " + " << xname(i, j);
    out << " = 1\n";
  }
  for (int i = 0; i < inst.num_locations; ++i) {
    if (y_fixed_zero(i)) continue;
    out << " cap_" << i + 1 << ":";
    for (int j = 0; j < inst.num_customers; ++j)
      if (!x_fixed_zero(i, j))
        out << " + " << inst.demand[j] << " " << xname(i, j);
    out << " - " << inst.capacity[i] << " " << yname(i) << " <= 0\n";
  }
  for (int i = 0; i < inst.num_locations; ++i) {
    if (y_fixed_zero(i)) continue;
    for (int j = 0; j < inst.num_customers; ++j)
      if (has_vi(i, j) && !x_fixed_zero(i, j))
        out << " vi_" << i + 1 << "_" << j + 1 << ": " << xname(i, j) << " - "
            << yname(i) << " <= 0\n";
  }
  if (min_open_) {
    out << " min_open:";
    for (int i = 0; i < inst.num_locations; ++i)
      if (!y_fixed_zero(i)) out << " + " << yname(i);
    out << " >= " << *min_open_ << "\n";
  }
  if (bucket_cover_) {
    out << " cover:";
    for (int i : *bucket_cover_)
      if (!y_fixed_zero(i)) out << " + " << yname(i);
    out << " >= 1\n";
  }
  if (cutoff_) {
    out << " cutoff:";
    for (int i = 0; i < inst.num_locations; ++i)
      if (!y_fixed_zero(i))
        out << " + " << inst.fixed_cost[i] << " " << yname(i);
    for (int i = 0; i < inst.num_locations; ++i) {
      if (y_fixed_zero(i)) continue;
      for (int j = 0; j < inst.num_customers; ++j)
        if (!x_fixed_zero(i, j))
          out << " + " << inst.demand[j] * inst.cost(i, j) << " "
              << xname(i, j);
    }
    out << " <= " << *cutoff_ << "\n";
  }
  out << "Bounds\n";
  for (int i = 0; i < inst.num_locations; ++i)
    if (!y_fixed_zero(i)) out << " 0 <= " << yname(i) << " <= 1\n";
  for (int i = 0; i < inst.num_locations; ++i) {
    if (y_fixed_zero(i)) continue;
    for (int j = 0; j < inst.num_customers; ++j)
      if (!x_fixed_zero(i, j))
        out << " 0 <= " << xname(i, j) << " <= 1\n";
  }
  if (!relaxed_) {
    out << "Binaries\n";
    for (int i = 0; i < inst.num_locations; ++i)
      if (!y_fixed_zero(i)) out << " " << yname(i) << "\n";
    for (int i = 0; i < inst.num_locations; ++i) {
      if (y_fixed_zero(i)) continue;
      for (int j = 0; j < inst.num_customers; ++j)
        if (!x_fixed_zero(i, j)) out << " " << xname(i, j) << "\n";
    }
  }
  out << "End\n";
  return out.str();
}

}  // namespace sscfl
