/* quasirand — spectral toolkit for multiclass random and quasirandom graphs.
 *
 * C API of the shared library. All heavy objects live behind opaque handles;
 * every fallible call returns a qr_status and leaves a human-readable message
 * in qr_last_error() (thread-local). Strings returned through char** are
 * heap-allocated and must be released with qr_string_free().
 */
#ifndef QUASIRAND_H
#define QUASIRAND_H

#ifdef __cplusplus
extern "C" {
#endif

typedef struct qr_graph qr_graph;
typedef struct qr_model qr_model;
typedef struct qr_sample qr_sample;

typedef enum qr_status {
  QR_OK = 0,
  QR_ERR_INVALID_ARGUMENT = 1,
  QR_ERR_PARSE = 2,
  QR_ERR_EMPTY_GRAPH = 3,
  QR_ERR_DISCONNECTED = 4,
  QR_ERR_CAP_EXCEEDED = 5,
  QR_ERR_BUDGET_EXCEEDED = 6,
  QR_ERR_RESAMPLE_EXHAUSTED = 7,
  QR_ERR_DEGENERATE_SUBSET = 8,
  QR_ERR_RANK_DEFICIENT = 9,
  QR_ERR_ISOLATED_CLASS = 10,
  QR_ERR_NO_STRUCTURE = 11,
  QR_ERR_INTERNAL = 12
} qr_status;

const char* qr_version(void);
/* Message of the most recent failure on this thread; empty when none. */
const char* qr_last_error(void);
void qr_string_free(char* s);

/* ---- graphs ---------------------------------------------------------- */

/* Edge-list text: "u v [w]" lines, '#' comments, symmetric closure,
 * duplicate unordered pairs rejected. */
qr_status qr_graph_parse_edge_list(const char* text, qr_graph** out);
qr_status qr_graph_write_edge_list(const qr_graph* g, char** out);
void qr_graph_free(qr_graph* g);

int qr_graph_vertex_count(const qr_graph* g);
int qr_graph_is_simple(const qr_graph* g);
int qr_graph_is_connected(const qr_graph* g);
qr_status qr_graph_weight(const qr_graph* g, int u, int v, double* out);
qr_status qr_graph_degree(const qr_graph* g, int u, double* out);
qr_status qr_graph_normalize(const qr_graph* g, qr_graph** out);
qr_status qr_graph_volume(const qr_graph* g, const int* verts, int len, double* out);
qr_status qr_graph_weighted_cut(const qr_graph* g, const int* x, int xlen, const int* y,
                                int ylen, double* out);
qr_status qr_graph_volume_density(const qr_graph* g, const int* x, int xlen, const int* y,
                                  int ylen, double* out);

/* ---- models ---------------------------------------------------------- */

/* Model JSON: {"k": int, "r": [...], "P": [[...]]}. Validation failures
 * name the violated invariant. */
qr_status qr_model_parse_json(const char* text, qr_model** out);
qr_status qr_model_write_json(const qr_model* m, char** out);
void qr_model_free(qr_model* m);
int qr_model_class_count(const qr_model* m);

/* {"trivial_value": 1.0, "structural_values": [...]} */
qr_status qr_model_spectrum_json(const qr_model* m, char** out);
/* Pattern aliases: C3..C8, K1..K5, P1..P8, "vertex", "edge", "s; u-v,...". */
qr_status qr_model_hom_density(const qr_model* m, const char* pattern, double* out);
/* out_values must hold k doubles; sizes must hold k positive ints. */
qr_status qr_model_blowup_spectrum(const qr_model* m, const int* sizes, int len,
                                   double* out_values);
qr_status qr_model_graphon_value(const qr_model* m, double x, double y, double* out);

/* ---- sampling -------------------------------------------------------- */

/* fixed_sizes may be NULL (multinomial memberships). Draw order is pinned:
 * memberships by vertex index, then pairs in lexicographic order. */
qr_status qr_sample_create(const qr_model* m, int n, unsigned long long seed,
                           const int* fixed_sizes, int sizes_len, qr_sample** out);
/* Borrowed pointer, valid while the sample lives. */
const qr_graph* qr_sample_graph(const qr_sample* s);
qr_status qr_sample_partition_json(const qr_sample* s, char** out);
qr_status qr_sample_sidecar_json(const qr_sample* s, char** out);
void qr_sample_free(qr_sample* s);

/* ---- analyses (options in, JSON out) --------------------------------- */

/* options: {"k": 2, "delta": 0.5, "c_thr": 1.0, "epsilon": 0.25,
 *           "restarts": 20, "seed": 0}; every key optional. */
qr_status qr_analyze_json(const qr_graph* g, const char* options_json, char** out);

/* options: {"partition": [...]} or {"min_k": 2}; plus "mode"
 * ("exact" | "heuristic" | "spectral_seeded"), "cap", "seed", "iters",
 * "bounds" (bool), "restarts". */
qr_status qr_discrepancy_json(const qr_graph* g, const char* options_json, char** out);

/* Spectral vertex representatives as CSV (one row per vertex).
 * options: {"k": 2, "source": "modularity" | "adjacency"}. */
qr_status qr_embedding_csv(const qr_graph* g, const char* options_json, char** out);

/* options: {"properties": ["PI","PII",...], "model": {...}?,
 *           "partition": [...]?, "thresholds": {...}?, "k": int?}.
 * first_fail_index receives -1 when everything passes or is skipped. */
qr_status qr_verify_json(const qr_graph* g, const char* options_json, char** out_json,
                         char** out_table, int* first_fail_index);

/* options: {"sizes": [...], "seeds": [...], "metrics": [...],
 *           "thresholds": {...}?, "jobs": 1}. */
qr_status qr_sweep_csv(const qr_model* m, const char* options_json, char** out_csv,
                       char** out_summary_json);

#ifdef __cplusplus
}
#endif

#endif /* QUASIRAND_H */
