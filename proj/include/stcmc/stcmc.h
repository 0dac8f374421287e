/* C interface to the STCMC surface-geometry toolkit.
 *
 * All functions return a status code; STCMC_OK is zero. On failure the
 * thread-local message from stcmc_last_error_message() describes the cause.
 * Objects are opaque handles released with the matching *_free call.
 */

#ifndef STCMC_H
#define STCMC_H

#include <stdint.h>

#if defined(_WIN32)
#define STCMC_EXPORT __declspec(dllexport)
#else
#define STCMC_EXPORT __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum stcmc_status {
  STCMC_OK = 0,
  STCMC_ERR_DOMAIN = 1,      /* chart point outside the model domain */
  STCMC_ERR_GEOMETRY = 2,    /* degenerate mesh or invalid embedding */
  STCMC_ERR_REGIME = 3,      /* null or non-spacelike expansion regime */
  STCMC_ERR_NUMERICAL = 4,   /* solver did not converge */
  STCMC_ERR_CONFIG = 5,      /* bad configuration */
  STCMC_ERR_IO = 6,          /* file read/write failure */
  STCMC_ERR_UNAVAILABLE = 7, /* datum not determined by the model */
  STCMC_ERR_SIZE = 8,        /* resource guard tripped */
  STCMC_ERR_INVALID = 9,     /* bad argument */
  STCMC_ERR_UNKNOWN = 99
} stcmc_status;

typedef struct stcmc_config stcmc_config;
typedef struct stcmc_report stcmc_report;
typedef struct stcmc_mesh stcmc_mesh;

STCMC_EXPORT const char* stcmc_version(void);

/* Thread-local message from the most recent failing call. */
STCMC_EXPORT const char* stcmc_last_error_message(void);

/* --- configuration ------------------------------------------------- */

STCMC_EXPORT stcmc_status stcmc_config_load(const char* path, stcmc_config** out);
STCMC_EXPORT stcmc_status stcmc_config_parse(const char* toml_text, stcmc_config** out);

/* Override a single value by dotted key, e.g. "surface.level" = "5". */
STCMC_EXPORT stcmc_status stcmc_config_set(stcmc_config* cfg, const char* key, const char* value);

/* Canonical TOML echo of the effective configuration; owned by the config. */
STCMC_EXPORT stcmc_status stcmc_config_toml(const stcmc_config* cfg, const char** out_text);

STCMC_EXPORT void stcmc_config_free(stcmc_config* cfg);

/* --- pipeline ------------------------------------------------------- */

/* Runs the configured analyses. A report is produced even when individual
 * analyses fail; stcmc_report_ok distinguishes the two cases. */
STCMC_EXPORT stcmc_status stcmc_run(const stcmc_config* cfg, stcmc_report** out);

/* Named verification suite: "round-sphere", "schwarzschild", "foliation" or
 * "all". level <= 0 and seed == 0 select the defaults. */
STCMC_EXPORT stcmc_status stcmc_run_suite(const char* name, int level, uint64_t seed,
                                          stcmc_report** out);

/* --- reports --------------------------------------------------------- */

/* Serialized JSON report; pointer owned by the report handle. */
STCMC_EXPORT stcmc_status stcmc_report_json(const stcmc_report* report, const char** out_text);

/* 1 when every analysis or suite check succeeded. */
STCMC_EXPORT int stcmc_report_ok(const stcmc_report* report);

/* Writes the JSON report plus any configured CSV/OFF outputs. A null
 * directory keeps the configured output directory. */
STCMC_EXPORT stcmc_status stcmc_report_write(const stcmc_report* report, const stcmc_config* cfg,
                                             const char* directory);

STCMC_EXPORT void stcmc_report_free(stcmc_report* report);

/* --- meshes ----------------------------------------------------------- */

STCMC_EXPORT stcmc_status stcmc_mesh_icosphere(int level, double radius, double cx, double cy,
                                               double cz, stcmc_mesh** out);
STCMC_EXPORT stcmc_status stcmc_mesh_counts(const stcmc_mesh* mesh, int* vertices, int* faces);
STCMC_EXPORT stcmc_status stcmc_mesh_write_off(const stcmc_mesh* mesh, const char* path);
STCMC_EXPORT stcmc_status stcmc_mesh_read_off(const char* path, stcmc_mesh** out);
STCMC_EXPORT void stcmc_mesh_free(stcmc_mesh* mesh);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* STCMC_H */
