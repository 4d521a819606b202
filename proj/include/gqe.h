/* gqe.h - C interface to the generalized-quadrangle engine.
 *
 * All functions return GQE_OK (0) on success or a negative error code; the
 * last error message is available via gqe_last_error().  Objects are opaque
 * handles released with the matching *_free function.  Handles are not
 * thread-safe; distinct handles may be used from distinct threads.
 */
#ifndef GQE_H
#define GQE_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#define GQE_OK 0
#define GQE_ERR_INVALID_ARGUMENT -1
#define GQE_ERR_RUNTIME -2
#define GQE_ERR_IO -3

typedef struct gqe_geometry gqe_geometry;

/* Human-readable message for the most recent failure on this thread. */
const char* gqe_last_error(void);

/* Build one of the named models:
 *   "kantor"    - Kantor-Knuth quadrangle of order (q, q^2), q = p^h
 *   "parabolic" - orthogonal quadrangle Q(4,q)
 *   "elliptic"  - orthogonal quadrangle Q(5,q)
 *   "tits"      - Tits quadrangle T2(O) over the standard conic
 * sigma is the Frobenius exponent for "kantor" (ignored otherwise);
 * m_override picks the clan nonsquare (-1 = canonical choice). */
int gqe_build(const char* model, int q, int sigma, int m_override, gqe_geometry** out);

void gqe_geometry_free(gqe_geometry* g);

int gqe_geometry_counts(const gqe_geometry* g, int* points, int* lines);

/* Exhaustive (or sampled, when exhaustive = 0) generalized-quadrangle
 * validation; s and t receive the order. */
int gqe_validate_gq(const gqe_geometry* g, int exhaustive, int* is_gq, int* s, int* t);

/* Canonical text format round trip (bit-exact). */
int gqe_export_geometry(const gqe_geometry* g, const char* path);
int gqe_import_geometry(const char* path, gqe_geometry** out);

/* Writes the sidecar model description (key-value lines) for a model built
 * with gqe_build. */
int gqe_write_model_sidecar(const char* model, int q, int sigma, int m_override,
                            const char* path);

/* Runs a named verification suite.  config_json accepts the keys
 * {"model","q","sigma","m","exhaustive","seed","samples"}; pass NULL for
 * defaults.  The JSON report is returned through report_out (free with
 * gqe_string_free); *pass_out is 1 when every assertion passed. */
int gqe_run_suite(const char* suite, const char* config_json, char** report_out, int* pass_out);

/* List of available suites as a JSON array. */
int gqe_suite_names(char** names_json_out);

/* Decomposition of a serialized cover of the affine geometry of the
 * doubly-subtended representative subquadrangle (see README for the file
 * format); emits the decomposition result as JSON. */
int gqe_decompose(int q, int sigma, int m_override, const char* point_map_path,
                  const char* line_map_path, char** report_out);

/* Census report over the order-q subquadrangles of the Kantor-Knuth
 * geometry; with_special_lines adds the special-line class sizes for the
 * two representative classes. */
int gqe_subgq_report(int q, int sigma, int m_override, int with_special_lines,
                     char** report_out);

void gqe_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif /* GQE_H */
