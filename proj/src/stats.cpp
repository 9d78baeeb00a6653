#include "sscfl/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

#include "json.hpp"
#include "sscfl/instance.hpp"

namespace sscfl {

namespace {

std::string fmt(double v, const char* spec = "%.10g") {
  char buf[64];
  std::snprintf(buf, sizeof(buf), spec, v);
  return buf;
}

}  // namespace

double ub_gap(double zh, double zub) {
  if (!(zub > 0.0)) throw DataError("ub_gap needs a positive reference");
  return 100.0 * (zh - zub) / zub;
}

double lb_gap(double zh, double zlb) {
  if (!(zlb > 0.0)) throw DataError("lb_gap needs a positive reference");
  return 100.0 * (zh - zlb) / zlb;
}

AggregateReport aggregate(const std::vector<ExperimentRecord>& records) {
  std::map<std::string, double> best_by_instance;
  for (const ExperimentRecord& r : records) {
    if (!r.objective) continue;
    auto it = best_by_instance.find(r.instance);
    if (it == best_by_instance.end() || *r.objective < it->second)
      best_by_instance[r.instance] = *r.objective;
  }

  struct Accum {
    int instances = 0, best = 0, fails = 0, gap_count = 0;
    double gap_sum = 0.0, seconds_sum = 0.0;
  };
  std::map<std::string, Accum> by_method;
  for (const ExperimentRecord& r : records) {
    Accum& a = by_method[r.method];
    ++a.instances;
    a.seconds_sum += r.seconds;
    if (!r.objective) {
      ++a.fails;
      continue;
    }
    const double best = best_by_instance.at(r.instance);
    const double tie_tol = 1e-9 * std::max(1.0, std::abs(best));
    if (*r.objective <= best + tie_tol) ++a.best;
    a.gap_sum += ub_gap(*r.objective, best);
    ++a.gap_count;
  }

  AggregateReport report;
  for (const auto& [method, a] : by_method) {
    MethodSummary row;
    row.method = method;
    row.instances = a.instances;
    row.best = a.best;
    row.fails = a.fails;
    row.mean_gap = a.gap_count ? a.gap_sum / a.gap_count : 0.0;
    row.mean_seconds = a.instances ? a.seconds_sum / a.instances : 0.0;
    report.rows.push_back(std::move(row));
  }
  return report;
}

std::string AggregateReport::to_csv() const {
  std::string out = "method,instances,best,mean_gap_pct,mean_seconds,fails\n";
  for (const MethodSummary& row : rows) {
    out += row.method + "," + std::to_string(row.instances) + "," +
           std::to_string(row.best) + "," + fmt(row.mean_gap, "%.4f") + "," +
           fmt(row.mean_seconds, "%.3f") + "," + std::to_string(row.fails) +
           "\n";
  }
  return out;
}

std::string AggregateReport::to_table() const {
  std::ostringstream out;
  char line[160];
  std::snprintf(line, sizeof(line), "%-12s %6s %6s %12s %12s %6s\n", "method",
                "#inst", "#best", "mean gap %", "mean sec", "#fail");
  out << line;
  for (const MethodSummary& row : rows) {
    std::snprintf(line, sizeof(line), "%-12s %6d %6d %12.4f %12.3f %6d\n",
                  row.method.c_str(), row.instances, row.best, row.mean_gap,
                  row.mean_seconds, row.fails);
    out << line;
  }
  return out.str();
}

std::string records_to_csv(std::vector<ExperimentRecord> records) {
  std::sort(records.begin(), records.end(),
            [](const ExperimentRecord& a, const ExperimentRecord& b) {
              if (a.instance != b.instance) return a.instance < b.instance;
              return a.method < b.method;
            });
  std::string out = "instance,method,seed,objective,bound,seconds,failed\n";
  for (const ExperimentRecord& r : records) {
    out += r.instance + "," + r.method + "," + std::to_string(r.seed) + ",";
    if (r.objective) out += fmt(*r.objective);
    out += ",";
    if (r.bound) out += fmt(*r.bound);
    out += "," + fmt(r.seconds, "%.3f") + "," + (r.failed ? "true" : "false") +
           "\n";
  }
  return out;
}

std::vector<ExperimentRecord> records_from_json(const std::string& text) {
  nlohmann::json doc = nlohmann::json::parse(text, nullptr, false);
  if (doc.is_discarded() || !doc.is_array())
    throw DataError("records document must be a JSON array");
  std::vector<ExperimentRecord> records;
  for (const nlohmann::json& item : doc) {
    ExperimentRecord r;
    r.instance = item.at("instance").get<std::string>();
    r.method = item.at("method").get<std::string>();
    r.seed = item.value("seed", 0ULL);
    if (item.contains("objective") && !item["objective"].is_null())
      r.objective = item["objective"].get<double>();
    if (item.contains("bound") && !item["bound"].is_null())
      r.bound = item["bound"].get<double>();
    r.seconds = item.value("seconds", 0.0);
    r.failed = item.value("failed", !r.objective.has_value());
    records.push_back(std::move(r));
  }
  return records;
}

}  // namespace sscfl
