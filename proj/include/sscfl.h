/* C interface to the sscfl solver library.
 *
 * All functions returning int yield SSCFL_OK on success or an error code;
 * sscfl_last_error() describes the most recent failure on the calling
 * thread. Objects are created through sscfl_*_load/generate/solve and must
 * be released with the matching *_free. Distinct handles may be used from
 * different threads concurrently.
 */
#ifndef SSCFL_H
#define SSCFL_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#define SSCFL_OK 0
#define SSCFL_ERROR_INVALID_ARGUMENT 1
#define SSCFL_ERROR_IO 2
#define SSCFL_ERROR_DATA 3
#define SSCFL_ERROR_INFEASIBLE 4
#define SSCFL_ERROR_NO_SOLUTION 5
#define SSCFL_ERROR_INTERNAL 6

typedef struct sscfl_instance_t sscfl_instance_t;
typedef struct sscfl_solution_t sscfl_solution_t;

const char* sscfl_version(void);

/* Message for the last failing call on this thread; empty string if none. */
const char* sscfl_last_error(void);

/* ---- instances ---- */

/* format: "native-json", "orlib-cap" or "avella-txt". */
int sscfl_instance_load(const char* path, const char* format,
                        sscfl_instance_t** out);

/* Writes the native JSON format (exact round trip). */
int sscfl_instance_save(const sscfl_instance_t* inst, const char* path);

/* config_json keys: locations, customers, ratio, demand_min, demand_max,
 * cost_scale, fixed_cost_scale, seed. Missing keys take defaults. */
int sscfl_instance_generate(const char* config_json, sscfl_instance_t** out);

void sscfl_instance_free(sscfl_instance_t* inst);

int sscfl_instance_num_locations(const sscfl_instance_t* inst);
int sscfl_instance_num_customers(const sscfl_instance_t* inst);
const char* sscfl_instance_name(const sscfl_instance_t* inst);

/* Total capacity divided by total demand. */
double sscfl_instance_capacity_demand_ratio(const sscfl_instance_t* inst);

/* ---- solving ---- */

typedef struct sscfl_solve_params_t {
  const char* method;         /* "paks", "ks-classic" or "exact" */
  double time_limit_seconds;  /* <= 0 selects the default (60 s) */
  int64_t node_limit;         /* per restricted solve; <= 0 disables */
  uint64_t seed;
  const char* config_json;    /* optional search parameters; NULL for defaults */
  const char* trace_path;     /* optional JSON-lines trace target */
  const char* dump_lp_path;   /* optional LP-format model dump */
} sscfl_solve_params_t;

void sscfl_solve_params_init(sscfl_solve_params_t* params);

/* Returns SSCFL_OK when a feasible solution was produced (possibly without
 * an optimality proof), SSCFL_ERROR_INFEASIBLE or SSCFL_ERROR_NO_SOLUTION
 * otherwise. */
int sscfl_solve(const sscfl_instance_t* inst,
                const sscfl_solve_params_t* params, sscfl_solution_t** out);

double sscfl_solution_objective(const sscfl_solution_t* sol);
/* Best proven lower bound; NaN when the method provides none. */
double sscfl_solution_bound(const sscfl_solution_t* sol);
/* "optimal", "feasible", "infeasible", "no_solution" or "loaded". */
const char* sscfl_solution_status(const sscfl_solution_t* sol);
int64_t sscfl_solution_nodes(const sscfl_solution_t* sol);
int sscfl_solution_is_open(const sscfl_solution_t* sol, int location);
/* Serving location of a customer, or -1. */
int sscfl_solution_assignment(const sscfl_solution_t* sol, int customer);

int sscfl_solution_save(const sscfl_solution_t* sol, const char* path);
int sscfl_solution_load(const char* path, sscfl_solution_t** out);
void sscfl_solution_free(sscfl_solution_t* sol);

/* ---- verification and reporting ---- */

/* Feasibility report as JSON: {"feasible": bool, "violations": [{kind,
 * index, amount, message}]}. The caller frees *report_json with
 * sscfl_free_string. Violations are report content, not an error code. */
int sscfl_check(const sscfl_instance_t* inst, const sscfl_solution_t* sol,
                char** report_json);

/* Canonical record CSV (header instance,method,seed,objective,bound,
 * seconds,failed; rows sorted by instance then method). Records are a JSON
 * array of {instance, method, seed, objective, bound, seconds, failed}. */
int sscfl_records_csv(const char* records_json, char** csv_out);

/* Aggregates experiment records into a per-method comparison. Both outputs
 * are optional (pass NULL to skip); free them with sscfl_free_string. */
int sscfl_aggregate(const char* records_json, char** csv_out,
                    char** table_out);

void sscfl_free_string(char* s);

#ifdef __cplusplus
}
#endif

#endif /* SSCFL_H */
