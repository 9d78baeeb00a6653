// Command-line front end. Links the C API only; everything domain-level
// happens behind sscfl.h.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "sscfl.h"

namespace {

using nlohmann::json;

struct InstanceHandle {
  sscfl_instance_t* ptr = nullptr;
  ~InstanceHandle() { sscfl_instance_free(ptr); }
};

struct SolutionHandle {
  sscfl_solution_t* ptr = nullptr;
  ~SolutionHandle() { sscfl_solution_free(ptr); }
};

int io_error(const std::string& context) {
  std::cerr << "error: " << context << ": " << sscfl_last_error() << "\n";
  return 1;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

struct ParamFlags {
  std::string config_path;
  int N = 0;
  int vi_rounds = 0;
  double theta = 0.0;
  double epsilon = 0.0;
  std::string lambda_mode;
  int p = 0;
  double delta = 0.0;

  CLI::Option* opt_N = nullptr;
  CLI::Option* opt_vi = nullptr;
  CLI::Option* opt_theta = nullptr;
  CLI::Option* opt_eps = nullptr;
  CLI::Option* opt_lambda = nullptr;
  CLI::Option* opt_p = nullptr;
  CLI::Option* opt_delta = nullptr;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--config", config_path,
                    "JSON file with search parameters");
    opt_N = cmd->add_option("--N", N, "phase 1 perturbed relaxations");
    opt_vi = cmd->add_option("--vi-rounds", vi_rounds,
                             "max strengthening rounds");
    opt_theta = cmd->add_option("--theta", theta, "inter-region loss ceiling");
    opt_eps = cmd->add_option("--epsilon", epsilon,
                              "open-count slack in the strengthening loop");
    opt_lambda = cmd->add_option("--lambda-mode", lambda_mode,
                                 "solution weights: paks or classic");
    opt_p = cmd->add_option("--p", p, "kernel removal patience");
    opt_delta =
        cmd->add_option("--delta", delta,
                        "cutoff margin (negative: relative default rule)");
  }

  // File values first, explicit flags override.
  std::string merged_json() const {
    json doc = json::object();
    if (!config_path.empty()) {
      doc = json::parse(read_text_file(config_path));
      if (!doc.is_object())
        throw std::runtime_error("config file must hold a JSON object");
    }
    if (opt_N->count()) doc["N"] = N;
    if (opt_vi->count()) doc["vi_rounds"] = vi_rounds;
    if (opt_theta->count()) doc["theta"] = theta;
    if (opt_eps->count()) doc["epsilon"] = epsilon;
    if (opt_lambda->count()) doc["lambda_mode"] = lambda_mode;
    if (opt_p->count()) doc["p"] = p;
    if (opt_delta->count()) doc["delta"] = delta;
    return doc.empty() ? std::string() : doc.dump();
  }
};

int load_instance_or_fail(const std::string& path, const std::string& format,
                          InstanceHandle& handle) {
  if (sscfl_instance_load(path.c_str(), format.c_str(), &handle.ptr) !=
      SSCFL_OK)
    return io_error("loading " + path);
  return 0;
}

struct BenchTask {
  std::string path;
  std::string method;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Single-source capacitated facility location solver"};
  app.require_subcommand(1);

  // ---- solve ----
  auto* solve = app.add_subcommand("solve", "solve one instance");
  std::string solve_path, solve_format = "native-json", solve_method = "paks";
  std::string solve_out, solve_trace, solve_dump_lp;
  double solve_time = 60.0;
  long long solve_nodes = 0;
  std::uint64_t solve_seed = 0;
  ParamFlags solve_params;
  solve->add_option("instance", solve_path, "instance file")->required();
  solve->add_option("--format", solve_format,
                    "native-json | orlib-cap | avella-txt");
  solve->add_option("--method", solve_method, "paks | ks-classic | exact");
  solve->add_option("--time-limit", solve_time, "wall seconds");
  solve->add_option("--node-limit", solve_nodes,
                    "node cap per restricted solve (reproducible runs)");
  solve->add_option("--seed", solve_seed, "random seed");
  solve->add_option("--out", solve_out, "write the solution JSON here");
  solve->add_option("--trace", solve_trace, "JSON-lines trace file");
  solve->add_option("--dump-lp", solve_dump_lp,
                    "write the model in LP format");
  solve_params.add_to(solve);

  // ---- generate ----
  auto* gen = app.add_subcommand("generate", "generate a test instance");
  int gen_locations = 10, gen_customers = 25;
  double gen_ratio = 2.0, gen_cost_scale = 10.0, gen_fixed_scale = 100.0;
  int gen_dmin = 5, gen_dmax = 35;
  std::uint64_t gen_seed = 0;
  std::string gen_out;
  gen->add_option("--locations", gen_locations, "number of locations");
  gen->add_option("--customers", gen_customers, "number of customers");
  gen->add_option("--ratio", gen_ratio, "capacity/demand ratio (> 1)");
  gen->add_option("--demand-min", gen_dmin, "demand lower bound");
  gen->add_option("--demand-max", gen_dmax, "demand upper bound");
  gen->add_option("--cost-scale", gen_cost_scale, "unit cost scale");
  gen->add_option("--fixed-cost-scale", gen_fixed_scale, "fixed cost scale");
  gen->add_option("--seed", gen_seed, "random seed");
  gen->add_option("--out", gen_out, "output file")->required();

  // ---- check ----
  auto* check = app.add_subcommand("check", "verify a solution file");
  std::string check_instance, check_solution, check_format = "native-json";
  check->add_option("instance", check_instance, "instance file")->required();
  check->add_option("solution", check_solution, "solution file")->required();
  check->add_option("--format", check_format,
                    "native-json | orlib-cap | avella-txt");

  // ---- bench ----
  auto* bench = app.add_subcommand("bench", "run methods over instances");
  std::vector<std::string> bench_paths;
  std::string bench_methods = "paks", bench_format = "native-json";
  std::string bench_csv, bench_summary, bench_out_dir;
  double bench_time = 60.0;
  long long bench_nodes = 0;
  std::uint64_t bench_seed = 0;
  int bench_jobs = 1;
  ParamFlags bench_params;
  bench->add_option("instances", bench_paths, "instance files")->required();
  bench->add_option("--methods", bench_methods,
                    "comma-separated: paks,ks-classic,exact");
  bench->add_option("--format", bench_format,
                    "native-json | orlib-cap | avella-txt");
  bench->add_option("--time-limit", bench_time, "wall seconds per run");
  bench->add_option("--node-limit", bench_nodes,
                    "node cap per restricted solve; also zeroes the recorded "
                    "seconds so reruns are byte-identical");
  bench->add_option("--seed", bench_seed, "random seed");
  bench->add_option("--csv", bench_csv, "write the record CSV here");
  bench->add_option("--summary", bench_summary, "write the summary CSV here");
  bench->add_option("--out-dir", bench_out_dir,
                    "write per-run solution files into this directory");
  bench->add_option("--jobs", bench_jobs, "concurrent instance workers");
  bench_params.add_to(bench);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*solve) {
      InstanceHandle inst;
      if (int rc = load_instance_or_fail(solve_path, solve_format, inst))
        return rc;
      const std::string config = solve_params.merged_json();
      sscfl_solve_params_t params;
      sscfl_solve_params_init(&params);
      params.method = solve_method.c_str();
      params.time_limit_seconds = solve_time;
      params.node_limit = solve_nodes;
      params.seed = solve_seed;
      if (!config.empty()) params.config_json = config.c_str();
      if (!solve_trace.empty()) params.trace_path = solve_trace.c_str();
      if (!solve_dump_lp.empty()) params.dump_lp_path = solve_dump_lp.c_str();

      SolutionHandle sol;
      if (sscfl_solve(inst.ptr, &params, &sol.ptr) != SSCFL_OK) {
        std::cerr << "no solution: " << sscfl_last_error() << "\n";
        return 1;
      }
      std::printf("instance %s method %s status %s objective %.6f",
                  sscfl_instance_name(inst.ptr), solve_method.c_str(),
                  sscfl_solution_status(sol.ptr),
                  sscfl_solution_objective(sol.ptr));
      const double bound = sscfl_solution_bound(sol.ptr);
      if (!std::isnan(bound)) std::printf(" bound %.6f", bound);
      std::printf("\n");
      if (!solve_out.empty() &&
          sscfl_solution_save(sol.ptr, solve_out.c_str()) != SSCFL_OK)
        return io_error("writing " + solve_out);
      return 0;
    }

    if (*gen) {
      json cfg;
      cfg["locations"] = gen_locations;
      cfg["customers"] = gen_customers;
      cfg["ratio"] = gen_ratio;
      cfg["demand_min"] = gen_dmin;
      cfg["demand_max"] = gen_dmax;
      cfg["cost_scale"] = gen_cost_scale;
      cfg["fixed_cost_scale"] = gen_fixed_scale;
      cfg["seed"] = gen_seed;
      InstanceHandle inst;
      const std::string text = cfg.dump();
      if (sscfl_instance_generate(text.c_str(), &inst.ptr) != SSCFL_OK)
        return io_error("generating instance");
      if (sscfl_instance_save(inst.ptr, gen_out.c_str()) != SSCFL_OK)
        return io_error("writing " + gen_out);
      std::printf("wrote %s (%d locations, %d customers, ratio %.6f)\n",
                  gen_out.c_str(), sscfl_instance_num_locations(inst.ptr),
                  sscfl_instance_num_customers(inst.ptr),
                  sscfl_instance_capacity_demand_ratio(inst.ptr));
      return 0;
    }

    if (*check) {
      InstanceHandle inst;
      if (int rc = load_instance_or_fail(check_instance, check_format, inst))
        return rc;
      SolutionHandle sol;
      if (sscfl_solution_load(check_solution.c_str(), &sol.ptr) != SSCFL_OK)
        return io_error("loading " + check_solution);
      char* report = nullptr;
      if (sscfl_check(inst.ptr, sol.ptr, &report) != SSCFL_OK)
        return io_error("checking solution");
      const json doc = json::parse(report);
      sscfl_free_string(report);
      if (doc["feasible"].get<bool>()) {
        std::printf("feasible\n");
        return 0;
      }
      for (const json& v : doc["violations"])
        std::printf("violation: %s\n",
                    v["message"].get<std::string>().c_str());
      return 1;
    }

    if (*bench) {
      std::vector<std::string> methods;
      {
        std::stringstream ss(bench_methods);
        std::string tok;
        while (std::getline(ss, tok, ','))
          if (!tok.empty()) methods.push_back(tok);
      }
      if (methods.empty()) {
        std::cerr << "error: no methods given\n";
        return 2;
      }
      const std::string config = bench_params.merged_json();

      std::mutex mu;
      json records = json::array();
      bool hard_error = false;
      std::size_t next_instance = 0;

      auto worker = [&]() {
        for (;;) {
          std::size_t idx;
          {
            std::lock_guard<std::mutex> lock(mu);
            if (next_instance >= bench_paths.size() || hard_error) return;
            idx = next_instance++;
          }
          const std::string& path = bench_paths[idx];
          InstanceHandle inst;
          if (sscfl_instance_load(path.c_str(), bench_format.c_str(),
                                  &inst.ptr) != SSCFL_OK) {
            std::lock_guard<std::mutex> lock(mu);
            std::cerr << "error: loading " << path << ": "
                      << sscfl_last_error() << "\n";
            hard_error = true;
            return;
          }
          const std::string name = sscfl_instance_name(inst.ptr);
          for (const std::string& method : methods) {
            sscfl_solve_params_t params;
            sscfl_solve_params_init(&params);
            params.method = method.c_str();
            params.time_limit_seconds = bench_time;
            params.node_limit = bench_nodes;
            params.seed = bench_seed;
            if (!config.empty()) params.config_json = config.c_str();

            const auto t0 = std::chrono::steady_clock::now();
            SolutionHandle sol;
            const int rc = sscfl_solve(inst.ptr, &params, &sol.ptr);
            const double seconds =
                std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                              t0)
                    .count();

            json rec;
            rec["instance"] = name;
            rec["method"] = method;
            rec["seed"] = bench_seed;
            // Node-limited runs must reproduce byte-identically, so wall
            // time is not recorded for them.
            rec["seconds"] = bench_nodes > 0 ? 0.0 : seconds;
            if (rc == SSCFL_OK) {
              rec["objective"] = sscfl_solution_objective(sol.ptr);
              const double bound = sscfl_solution_bound(sol.ptr);
              if (!std::isnan(bound)) rec["bound"] = bound;
              rec["failed"] = false;
              if (!bench_out_dir.empty()) {
                const std::string out_path =
                    bench_out_dir + "/" + name + "." + method + ".json";
                sscfl_solution_save(sol.ptr, out_path.c_str());
              }
            } else {
              rec["failed"] = true;
            }
            std::lock_guard<std::mutex> lock(mu);
            records.push_back(std::move(rec));
          }
        }
      };

      const int jobs = std::max(
          1, std::min<int>(bench_jobs, static_cast<int>(bench_paths.size())));
      std::vector<std::thread> pool;
      for (int t = 1; t < jobs; ++t) pool.emplace_back(worker);
      worker();
      for (std::thread& t : pool) t.join();
      if (hard_error) return 1;

      const std::string records_text = records.dump();
      char* csv = nullptr;
      if (sscfl_records_csv(records_text.c_str(), &csv) != SSCFL_OK)
        return io_error("formatting records");
      if (!bench_csv.empty()) {
        std::ofstream out(bench_csv);
        out << csv;
      } else {
        std::fputs(csv, stdout);
      }
      sscfl_free_string(csv);

      char* summary_csv = nullptr;
      char* table = nullptr;
      if (sscfl_aggregate(records_text.c_str(), &summary_csv, &table) !=
          SSCFL_OK)
        return io_error("aggregating records");
      if (!bench_summary.empty()) {
        std::ofstream out(bench_summary);
        out << summary_csv;
      }
      std::fputs(table, stdout);
      sscfl_free_string(summary_csv);
      sscfl_free_string(table);
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
