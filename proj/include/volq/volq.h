/* C interface to the volq volatility-modeling library.
 *
 * Every function returns a volq_status. On failure the thread-local message
 * from volq_last_error_message() names the failing module and operation.
 * Objects are opaque handles released with the matching *_free function;
 * strings returned through char** are released with volq_string_free. */
#ifndef VOLQ_H
#define VOLQ_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum volq_status {
  VOLQ_OK = 0,
  VOLQ_ERR_INVALID_ARGUMENT = 1,
  VOLQ_ERR_TOO_SHORT = 2,
  VOLQ_ERR_NON_POSITIVE_VALUE = 3,
  VOLQ_ERR_NON_FINITE_VALUE = 4,
  VOLQ_ERR_DEGENERATE_VARIANCE = 5,
  VOLQ_ERR_SINGULAR_REGRESSION = 6,
  VOLQ_ERR_SINGULAR_HESSIAN = 7,
  VOLQ_ERR_INVALID_PARAMS = 8,
  VOLQ_ERR_INVALID_FIT = 9,
  VOLQ_ERR_NON_CONVERGENCE = 10,
  VOLQ_ERR_NON_FINITE_OBJECTIVE = 11,
  VOLQ_ERR_NUMERICAL_OVERFLOW = 12,
  VOLQ_ERR_LENGTH_MISMATCH = 13,
  VOLQ_ERR_FILE_NOT_FOUND = 14,
  VOLQ_ERR_PARSE = 15,
  VOLQ_ERR_INTERNAL = 99
} volq_status;

typedef enum volq_command {
  VOLQ_CMD_STATIONARITY = 0,
  VOLQ_CMD_FIT_GARCH = 1,
  VOLQ_CMD_FIT_SV = 2,
  VOLQ_CMD_FORECAST = 3,
  VOLQ_CMD_DIAGNOSE = 4,
  VOLQ_CMD_REPORT = 5
} volq_command;

typedef enum volq_model { VOLQ_MODEL_GARCH = 0, VOLQ_MODEL_SV = 1 } volq_model;

typedef enum volq_format { VOLQ_FORMAT_JSON = 0, VOLQ_FORMAT_CSV = 1 } volq_format;

typedef enum volq_adf_terms {
  VOLQ_ADF_NONE = 0,
  VOLQ_ADF_DRIFT = 1,
  VOLQ_ADF_TREND = 2
} volq_adf_terms;

typedef enum volq_sim_kind {
  VOLQ_SIM_GARCH = 0,
  VOLQ_SIM_SV = 1,
  VOLQ_SIM_WHITE_NOISE = 2,
  VOLQ_SIM_RANDOM_WALK = 3,
  VOLQ_SIM_AR1 = 4
} volq_sim_kind;

typedef struct volq_series volq_series;
typedef struct volq_report volq_report;

typedef struct volq_options {
  size_t m;
  size_t n;
  long lag; /* < 0: each test's default */
  double alpha;
  size_t horizon;
  volq_model model;
  volq_adf_terms adf_terms;
  size_t fitdf;
  size_t arch_lag;
  int estimate_p1;
  int max_iter;
  double grad_tol;
  int include_timestamp;
} volq_options;

typedef struct volq_sim_options {
  volq_sim_kind kind;
  size_t n;
  uint64_t seed;
  size_t burn_in;
  /* GARCH(1,1) */
  double a0, a1, b1;
  /* SV */
  double alpha0, alpha1, sigma_w, lambda, sigma0, phi1, sigma1, p1;
  /* white noise / random walk / AR(1) */
  double sigma, c, phi;
} volq_sim_options;

const char* volq_version(void);
const char* volq_status_string(volq_status status);
/* Message of the last failure on this thread; empty when none. */
const char* volq_last_error_message(void);

void volq_options_init(volq_options* options);
void volq_sim_options_init(volq_sim_options* options);

volq_status volq_series_from_values(const double* values, size_t n, const char* label,
                                    volq_series** out);
/* column: header name or 0-based index; NULL or "" selects the first
   non-timestamp column. */
volq_status volq_series_load_csv(const char* path, const char* column, int has_header,
                                 volq_series** out);
size_t volq_series_length(const volq_series* series);
const double* volq_series_data(const volq_series* series);
/* Digest of the bytes the series was loaded from (or of its values). */
const char* volq_series_digest(const volq_series* series);
void volq_series_free(volq_series* series);

volq_status volq_analyze(volq_command command, const volq_series* series,
                         const volq_options* options, volq_report** out);
/* 1 when every fit in the run converged. */
int volq_report_converged(const volq_report* report);
int volq_report_has_forecast(const volq_report* report);
volq_status volq_report_render(const volq_report* report, volq_format format, char** out,
                               size_t* length);
/* Plot-ready rows "t,observed,center,lower,upper". */
volq_status volq_report_plot_csv(const volq_report* report, char** out, size_t* length);
void volq_report_free(volq_report* report);

/* Simulated series as CSV with a generator comment header. */
volq_status volq_simulate_csv(const volq_sim_options* options, char** out, size_t* length);

void volq_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif /* VOLQ_H */
