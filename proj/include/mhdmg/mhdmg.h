#ifndef MHDMG_H
#define MHDMG_H

#include <stddef.h>

#if defined(MHDMG_BUILDING_LIBRARY)
#define MHDMG_API __attribute__((visibility("default")))
#else
#define MHDMG_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum mhdmg_status {
  MHDMG_OK = 0,
  MHDMG_INVALID_ARGUMENT = 1,
  MHDMG_IO_ERROR = 2,
  MHDMG_SINGULAR_MATRIX = 3,
  MHDMG_NONLINEAR_DIVERGENCE = 4,
  MHDMG_LINEAR_SOLVER_FAILURE = 5,
  MHDMG_INTERNAL_ERROR = 6
} mhdmg_status;

/* Run kinds accepted by mhdmg_run. */
typedef enum mhdmg_run_kind {
  MHDMG_RUN_HARTMANN = 0,     /* one Hartmann solve */
  MHDMG_RUN_TABLE = 1,        /* (Re, Re_m) x variant sweep */
  MHDMG_RUN_CONTINUATION = 2, /* Hartmann-number continuation */
  MHDMG_RUN_ISLAND = 3,       /* transient island coalescence */
  MHDMG_RUN_VERIFY = 4        /* Hartmann error table, direct solves */
} mhdmg_run_kind;

/* Output tables of a result. */
typedef enum mhdmg_table {
  MHDMG_TABLE_MAIN = 0,  /* one row per solve, stage, time step or mesh */
  MHDMG_TABLE_NEWTON = 1 /* one row per Newton step */
} mhdmg_table;

typedef struct mhdmg_config mhdmg_config;
typedef struct mhdmg_result mhdmg_result;

/* Called with each finished main-table row as CSV text (no newline). */
typedef void (*mhdmg_progress_fn)(const char* row, void* user);

/* Message of the last failed call on this thread; never NULL. */
MHDMG_API const char* mhdmg_last_error(void);
MHDMG_API const char* mhdmg_status_string(mhdmg_status s);
MHDMG_API const char* mhdmg_version(void);

/* Defaults suit every run kind except the island, which uses `island` = 1. */
MHDMG_API mhdmg_status mhdmg_config_create(int island, mhdmg_config** out);
MHDMG_API void mhdmg_config_free(mhdmg_config* cfg);
/* Key names match the CLI long flags ('-' or '_'); lists are comma separated. */
MHDMG_API mhdmg_status mhdmg_config_set(mhdmg_config* cfg, const char* key, const char* value);
MHDMG_API mhdmg_status mhdmg_config_load(mhdmg_config* cfg, const char* yaml_path);
MHDMG_API mhdmg_status mhdmg_config_set_progress(mhdmg_config* cfg, mhdmg_progress_fn fn, void* user);

/* Solver failures inside table, continuation and island runs are recorded in
   the rows; only configuration and I/O problems fail the call. */
MHDMG_API mhdmg_status mhdmg_run(const mhdmg_config* cfg, mhdmg_run_kind kind, mhdmg_result** out);
MHDMG_API void mhdmg_result_free(mhdmg_result* res);
MHDMG_API size_t mhdmg_result_rows(const mhdmg_result* res, mhdmg_table table);
/* CSV text with header; owned by the result. */
MHDMG_API const char* mhdmg_result_csv(const mhdmg_result* res, mhdmg_table table);
MHDMG_API mhdmg_status mhdmg_result_write(const mhdmg_result* res, mhdmg_table table, const char* path);
/* One-line human summary of the run. */
MHDMG_API const char* mhdmg_result_summary(const mhdmg_result* res);

#ifdef __cplusplus
}
#endif

#endif
