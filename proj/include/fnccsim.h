/* C API for the fnccsim fabric simulator.
 *
 * Usage: create a simulation from a JSON config (file or string), apply
 * optional dotted-path overrides, run it, then read results or write the
 * CSV/JSON artifacts. All functions return FNCC_OK on success; on error,
 * fnccsim_last_error() describes the failure for that handle.
 */
#ifndef FNCCSIM_H
#define FNCCSIM_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef struct fnccsim_sim fnccsim_sim; /* opaque */

typedef enum {
    FNCC_OK = 0,
    FNCC_ERR_CONFIG = 1,   /* invalid configuration or override */
    FNCC_ERR_IO = 2,       /* file not readable / not writable */
    FNCC_ERR_RUNTIME = 3,  /* protocol invariant violated during the run */
    FNCC_ERR_ARG = 4,      /* null pointer or bad argument */
    FNCC_ERR_STATE = 5     /* call out of sequence (e.g. results before run) */
} fnccsim_status;

const char* fnccsim_version(void);

/* Constructors; return NULL only on allocation failure. Check
 * fnccsim_status via fnccsim_ready() before use. */
fnccsim_sim* fnccsim_create_from_file(const char* config_path);
fnccsim_sim* fnccsim_create_from_string(const char* config_json);
void fnccsim_destroy(fnccsim_sim* sim);

/* FNCC_OK if the handle holds a valid, runnable configuration. */
fnccsim_status fnccsim_ready(const fnccsim_sim* sim);

/* Dotted-path override, e.g. "cc.mode", "hpcc". Must precede fnccsim_run. */
fnccsim_status fnccsim_set(fnccsim_sim* sim, const char* key, const char* value);

fnccsim_status fnccsim_run(fnccsim_sim* sim);

/* Writes series.csv, flows.csv, summary.json, config.json into out_dir. */
fnccsim_status fnccsim_write_outputs(fnccsim_sim* sim, const char* out_dir);

/* Returned strings live until the next call on the same handle or destroy. */
const char* fnccsim_summary_json(fnccsim_sim* sim);
const char* fnccsim_resolved_config_json(fnccsim_sim* sim);
const char* fnccsim_last_error(const fnccsim_sim* sim);

/* Totals for quick programmatic checks after a run. */
fnccsim_status fnccsim_flows_completed(fnccsim_sim* sim, uint64_t* out);
fnccsim_status fnccsim_events_processed(fnccsim_sim* sim, uint64_t* out);

#ifdef __cplusplus
}
#endif

#endif /* FNCCSIM_H */
