#include "sscfl.h"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <memory>
#include <string>

#include "json.hpp"
#include "sscfl/generator.hpp"
#include "sscfl/instance_io.hpp"
#include "sscfl/solver.hpp"
#include "sscfl/stats.hpp"

#define SSCFL_API __attribute__((visibility("default")))

namespace {

thread_local std::string g_last_error;

int fail(int code, const std::string& message) {
  g_last_error = message;
  return code;
}

int classify(const std::exception& e) {
  if (dynamic_cast<const sscfl::DataError*>(&e))
    return fail(SSCFL_ERROR_DATA, e.what());
  if (dynamic_cast<const sscfl::SolverError*>(&e))
    return fail(SSCFL_ERROR_INTERNAL, e.what());
  return fail(SSCFL_ERROR_INTERNAL, e.what());
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

}  // namespace

struct sscfl_instance_t {
  std::shared_ptr<const sscfl::Instance> inst;
};

struct sscfl_solution_t {
  sscfl::BinarySolution solution;
  double bound = std::nan("");
  std::string status = "loaded";
  int64_t nodes = 0;
};

extern "C" {

SSCFL_API const char* sscfl_version(void) { return "1.0.0"; }

SSCFL_API const char* sscfl_last_error(void) { return g_last_error.c_str(); }

SSCFL_API int sscfl_instance_load(const char* path, const char* format,
                                  sscfl_instance_t** out) {
  if (!path || !out)
    return fail(SSCFL_ERROR_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  try {
    const sscfl::FileFormat fmt =
        sscfl::parse_format(format ? format : "native-json");
    auto inst = std::make_shared<sscfl::Instance>(
        sscfl::load_instance(path, fmt));
    *out = new sscfl_instance_t{std::move(inst)};
    return SSCFL_OK;
  } catch (const sscfl::DataError& e) {
    return fail(SSCFL_ERROR_IO, e.what());
  } catch (const std::exception& e) {
    return classify(e);
  }
}

SSCFL_API int sscfl_instance_save(const sscfl_instance_t* inst,
                                  const char* path) {
  if (!inst || !path)
    return fail(SSCFL_ERROR_INVALID_ARGUMENT, "null argument");
  try {
    sscfl::save_instance(*inst->inst, path);
    return SSCFL_OK;
  } catch (const std::exception& e) {
    return fail(SSCFL_ERROR_IO, e.what());
  }
}

SSCFL_API int sscfl_instance_generate(const char* config_json,
                                      sscfl_instance_t** out) {
  if (!out) return fail(SSCFL_ERROR_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  try {
    sscfl::GeneratorConfig cfg;
    if (config_json && *config_json) {
      nlohmann::json doc = nlohmann::json::parse(config_json, nullptr, false);
      if (doc.is_discarded() || !doc.is_object())
        return fail(SSCFL_ERROR_INVALID_ARGUMENT,
                    "generator config is not a JSON object");
      cfg.num_locations = doc.value("locations", cfg.num_locations);
      cfg.num_customers = doc.value("customers", cfg.num_customers);
      cfg.target_ratio = doc.value("ratio", cfg.target_ratio);
      cfg.demand_min = doc.value("demand_min", cfg.demand_min);
      cfg.demand_max = doc.value("demand_max", cfg.demand_max);
      cfg.cost_scale = doc.value("cost_scale", cfg.cost_scale);
      cfg.fixed_cost_scale =
          doc.value("fixed_cost_scale", cfg.fixed_cost_scale);
      cfg.seed = doc.value("seed", cfg.seed);
    }
    auto inst = std::make_shared<sscfl::Instance>(sscfl::generate(cfg));
    *out = new sscfl_instance_t{std::move(inst)};
    return SSCFL_OK;
  } catch (const std::exception& e) {
    return classify(e);
  }
}

SSCFL_API void sscfl_instance_free(sscfl_instance_t* inst) { delete inst; }

SSCFL_API int sscfl_instance_num_locations(const sscfl_instance_t* inst) {
  return inst ? inst->inst->num_locations : 0;
}

SSCFL_API int sscfl_instance_num_customers(const sscfl_instance_t* inst) {
  return inst ? inst->inst->num_customers : 0;
}

SSCFL_API const char* sscfl_instance_name(const sscfl_instance_t* inst) {
  return inst ? inst->inst->name.c_str() : "";
}

SSCFL_API double sscfl_instance_capacity_demand_ratio(
    const sscfl_instance_t* inst) {
  return inst ? inst->inst->capacity_demand_ratio() : std::nan("");
}

SSCFL_API void sscfl_solve_params_init(sscfl_solve_params_t* params) {
  if (!params) return;
  params->method = "paks";
  params->time_limit_seconds = 60.0;
  params->node_limit = 0;
  params->seed = 0;
  params->config_json = nullptr;
  params->trace_path = nullptr;
  params->dump_lp_path = nullptr;
}

SSCFL_API int sscfl_solve(const sscfl_instance_t* inst,
                          const sscfl_solve_params_t* params,
                          sscfl_solution_t** out) {
  if (!inst || !params || !out)
    return fail(SSCFL_ERROR_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  try {
    sscfl::SolveOptions options;
    options.method = sscfl::parse_method(params->method ? params->method
                                                        : "paks");
    if (params->time_limit_seconds > 0.0)
      options.time_limit = params->time_limit_seconds;
    if (params->node_limit > 0) options.node_limit = params->node_limit;
    options.seed = params->seed;
    if (params->config_json && *params->config_json)
      options.params = sscfl::params_from_json(params->config_json);
    if (params->trace_path) options.trace_path = params->trace_path;
    if (params->dump_lp_path) options.dump_lp_path = params->dump_lp_path;

    const sscfl::SolveOutcome outcome =
        sscfl::run_solver(inst->inst, options);
    if (!outcome.best) {
      return outcome.status == "infeasible"
                 ? fail(SSCFL_ERROR_INFEASIBLE, "instance is infeasible")
                 : fail(SSCFL_ERROR_NO_SOLUTION,
                        "no solution within the budget");
    }
    auto* sol = new sscfl_solution_t;
    sol->solution = *outcome.best;
    sol->status = outcome.status;
    sol->nodes = outcome.nodes;
    if (outcome.bound) sol->bound = *outcome.bound;
    *out = sol;
    return SSCFL_OK;
  } catch (const std::exception& e) {
    return classify(e);
  }
}

SSCFL_API double sscfl_solution_objective(const sscfl_solution_t* sol) {
  return sol ? sol->solution.objective : std::nan("");
}

SSCFL_API double sscfl_solution_bound(const sscfl_solution_t* sol) {
  return sol ? sol->bound : std::nan("");
}

SSCFL_API const char* sscfl_solution_status(const sscfl_solution_t* sol) {
  return sol ? sol->status.c_str() : "";
}

SSCFL_API int64_t sscfl_solution_nodes(const sscfl_solution_t* sol) {
  return sol ? sol->nodes : 0;
}

SSCFL_API int sscfl_solution_is_open(const sscfl_solution_t* sol,
                                     int location) {
  if (!sol || location < 0 ||
      location >= static_cast<int>(sol->solution.open.size()))
    return 0;
  return sol->solution.open[location] ? 1 : 0;
}

SSCFL_API int sscfl_solution_assignment(const sscfl_solution_t* sol,
                                        int customer) {
  if (!sol || customer < 0 ||
      customer >= static_cast<int>(sol->solution.assign.size()))
    return -1;
  return sol->solution.assign[customer];
}

SSCFL_API int sscfl_solution_save(const sscfl_solution_t* sol,
                                  const char* path) {
  if (!sol || !path)
    return fail(SSCFL_ERROR_INVALID_ARGUMENT, "null argument");
  try {
    sscfl::save_solution(sol->solution, path);
    return SSCFL_OK;
  } catch (const std::exception& e) {
    return fail(SSCFL_ERROR_IO, e.what());
  }
}

SSCFL_API int sscfl_solution_load(const char* path, sscfl_solution_t** out) {
  if (!path || !out)
    return fail(SSCFL_ERROR_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  try {
    auto* sol = new sscfl_solution_t;
    sol->solution = sscfl::load_solution(path);
    *out = sol;
    return SSCFL_OK;
  } catch (const std::exception& e) {
    return fail(SSCFL_ERROR_IO, e.what());
  }
}

SSCFL_API void sscfl_solution_free(sscfl_solution_t* sol) { delete sol; }

SSCFL_API int sscfl_check(const sscfl_instance_t* inst,
                          const sscfl_solution_t* sol, char** report_json) {
  if (!inst || !sol || !report_json)
    return fail(SSCFL_ERROR_INVALID_ARGUMENT, "null argument");
  *report_json = nullptr;
  try {
    const sscfl::FeasibilityReport report =
        sscfl::check_feasible(*inst->inst, sol->solution);
    nlohmann::json doc;
    doc["feasible"] = report.feasible();
    nlohmann::json violations = nlohmann::json::array();
    for (const sscfl::Violation& v : report.violations) {
      nlohmann::json item;
      switch (v.kind) {
        case sscfl::ViolationKind::UnassignedCustomer:
          item["kind"] = "unassigned_customer";
          break;
        case sscfl::ViolationKind::ClosedLocationAssignment:
          item["kind"] = "closed_location_assignment";
          break;
        case sscfl::ViolationKind::CapacityExceeded:
          item["kind"] = "capacity_exceeded";
          break;
        case sscfl::ViolationKind::ObjectiveMismatch:
          item["kind"] = "objective_mismatch";
          break;
      }
      item["index"] = v.index;
      item["amount"] = v.amount;
      item["message"] = v.message;
      violations.push_back(std::move(item));
    }
    doc["violations"] = std::move(violations);
    *report_json = dup_string(doc.dump(2));
    return SSCFL_OK;
  } catch (const std::exception& e) {
    return classify(e);
  }
}

SSCFL_API int sscfl_records_csv(const char* records_json, char** csv_out) {
  if (!records_json || !csv_out)
    return fail(SSCFL_ERROR_INVALID_ARGUMENT, "null argument");
  *csv_out = nullptr;
  try {
    *csv_out = dup_string(
        sscfl::records_to_csv(sscfl::records_from_json(records_json)));
    return SSCFL_OK;
  } catch (const std::exception& e) {
    return classify(e);
  }
}

SSCFL_API int sscfl_aggregate(const char* records_json, char** csv_out,
                              char** table_out) {
  if (!records_json)
    return fail(SSCFL_ERROR_INVALID_ARGUMENT, "null argument");
  try {
    const std::vector<sscfl::ExperimentRecord> records =
        sscfl::records_from_json(records_json);
    const sscfl::AggregateReport report = sscfl::aggregate(records);
    if (csv_out) *csv_out = dup_string(report.to_csv());
    if (table_out) *table_out = dup_string(report.to_table());
    return SSCFL_OK;
  } catch (const std::exception& e) {
    return classify(e);
  }
}

SSCFL_API void sscfl_free_string(char* s) { std::free(s); }

}  // extern "C"
