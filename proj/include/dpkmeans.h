/*
 * dpkmeans - one-round differentially private k-means clustering.
 *
 * C interface to the clustering library. All operations work on opaque
 * handles and return a status code; dpkm_last_error() describes the most
 * recent failure on the calling thread. Configuration and results are
 * exchanged as JSON strings so the surface stays small and stable.
 */

#ifndef DPKMEANS_H
#define DPKMEANS_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

#define DPKM_VERSION "1.0.0"

typedef enum {
  DPKM_OK = 0,
  DPKM_ERR_INVALID_ARGUMENT = 1,
  DPKM_ERR_IO = 2,
  DPKM_ERR_INTERNAL = 3
} dpkm_status;

/* Opaque dataset handle: n points in the d-dimensional unit ball. */
typedef struct dpkm_dataset dpkm_dataset;

/* Message for the last failing call on this thread ("" if none). */
const char* dpkm_last_error(void);

/*
 * Synthetic mixture generation. config_json keys:
 *   n, d, k, r, seed   (see the CLI `gen` command for semantics)
 */
dpkm_status dpkm_dataset_generate(const char* config_json, dpkm_dataset** out);

/*
 * CSV I/O. Columns are the d coordinates; an optional header row is
 * detected automatically.
 */
dpkm_status dpkm_dataset_load_csv(const char* path, dpkm_dataset** out);
dpkm_status dpkm_dataset_save_csv(const dpkm_dataset* d, const char* path);

size_t dpkm_dataset_size(const dpkm_dataset* d);
int dpkm_dataset_dim(const dpkm_dataset* d);
void dpkm_dataset_free(dpkm_dataset* d);

/*
 * Run one clustering. config_json keys:
 *   model:   "local" | "shuffle" | "exact"
 *   variant: "net-tree" | "lsh"
 *   k, epsilon, delta, alpha, beta, seed
 *   optional: dprime, tree_a, lsh_split_levels, lsh_hist_frac
 * The result JSON (malloc'd, free with dpkm_string_free) contains the
 * centers, the normalized objective, a parameter echo and tree statistics.
 * Results are deterministic functions of (dataset, config).
 */
dpkm_status dpkm_run(const dpkm_dataset* d, const char* config_json,
                     char** result_json);

/*
 * Baseline objectives for the same dataset. config_json keys:
 *   k, epsilon, delta, seed
 * Returns the trivial (origin) and naive (noised input) baselines.
 */
dpkm_status dpkm_baseline(const dpkm_dataset* d, const char* config_json,
                          char** result_json);

/*
 * Run a sweep plan (text of "key=v1,v2,..." lines; see the CLI `sweep`
 * command). Returns per-run and aggregate CSV tables.
 */
dpkm_status dpkm_sweep(const char* plan_text, char** rows_csv, char** agg_csv);

void dpkm_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif /* DPKMEANS_H */
