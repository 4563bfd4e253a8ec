/*
 * nbinv - constructive matrix inversion over unital Banach algebras.
 *
 * C interface to the shared library: opaque handles, integer status codes,
 * JSON strings for structured data. Every object returned through an
 * out-parameter is owned by the caller and released with the matching
 * *_free function; strings from the library go through nbinv_string_free.
 * On NBINV_OK the out-parameters are valid; on any other status they are
 * untouched and nbinv_last_error() describes the failure (thread-local).
 */

#ifndef NBINV_H
#define NBINV_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum nbinv_status {
    NBINV_OK = 0,
    NBINV_ERR_PARSE = 1,
    NBINV_ERR_IO = 2,
    NBINV_ERR_CONFIG = 3,
    NBINV_ERR_DIMENSION_MISMATCH = 4,
    NBINV_ERR_DEGREE_MISMATCH = 5,
    NBINV_ERR_GRID_MISMATCH = 6,
    NBINV_ERR_NOT_CONVERGENT = 7,
    NBINV_ERR_OVERFLOW = 8,
    NBINV_ERR_NOT_SUPPORTED = 9,
    NBINV_ERR_NO_INVOLUTION = 10,
    NBINV_ERR_NOT_HERMITIAN = 11,
    NBINV_ERR_NOT_INVERTIBLE = 12,
    NBINV_ERR_ZERO_SCALAR_PART = 13,
    NBINV_ERR_SINGULAR = 14,
    NBINV_ERR_DIAGONAL_NOT_INVERTIBLE = 15,
    NBINV_ERR_PIVOT_NOT_UNIT = 16,
    NBINV_ERR_NOT_INVERTIBLE_IN_AMBIENT = 17,
    NBINV_ERR_MASK_VIOLATION = 18,
    NBINV_ERR_APPROXIMATION_STALLED = 19,
    NBINV_ERR_PROPERTY_FAILED = 20,
    NBINV_ERR_INTERNAL = 99
} nbinv_status;

typedef struct nbinv_matrix nbinv_matrix;
typedef struct nbinv_certificate nbinv_certificate;

const char* nbinv_version(void);

/* Message for the most recent failure on this thread (empty string if none). */
const char* nbinv_last_error(void);

void nbinv_string_free(char* text);

/* --- matrices ----------------------------------------------------------- */

nbinv_status nbinv_matrix_parse_json(const char* text, nbinv_matrix** out);
nbinv_status nbinv_matrix_read_file(const char* path, nbinv_matrix** out);
nbinv_status nbinv_matrix_to_json(const nbinv_matrix* m, char** out_text);
size_t nbinv_matrix_dim(const nbinv_matrix* m);
void nbinv_matrix_free(nbinv_matrix* m);

/* --- inversion ----------------------------------------------------------- */

/* method: "triangular" | "prop4" | "thm6" | "hermitian" | "oracle".
 * tol <= 0 selects the instance default. */
nbinv_status nbinv_invert(const nbinv_matrix* m, const char* method, double tol,
                          nbinv_certificate** out);

nbinv_status nbinv_certificate_to_json(const nbinv_certificate* c, char** out_text);
double nbinv_certificate_residual_left(const nbinv_certificate* c);
double nbinv_certificate_residual_right(const nbinv_certificate* c);
const char* nbinv_certificate_path(const nbinv_certificate* c);
nbinv_status nbinv_certificate_inverse(const nbinv_certificate* c, nbinv_matrix** out);
void nbinv_certificate_free(nbinv_certificate* c);

/* --- spectral radius ------------------------------------------------------ */

/* Norm-sequence radius estimate for the matrix viewed as one element of the
 * matrix algebra; with_ambient != 0 also estimates under the ambient norm.
 * n_max must be a power of two >= 4. Returns a JSON report. */
nbinv_status nbinv_radius_report(const nbinv_matrix* m, unsigned n_max,
                                 int with_ambient, char** report_json);

/* --- experiment suites ----------------------------------------------------- */

/* config_json: suite configuration object, or NULL for the defaults
 * (NBINV_SEED in the environment overrides the seed either way).
 * out_dir: directory for outcomes.jsonl / summary.csv / certificates,
 * or NULL to skip writing files.
 * Returns NBINV_OK when every property passed, NBINV_ERR_PROPERTY_FAILED
 * when a property failed, NBINV_ERR_CONFIG for invalid configuration. */
nbinv_status nbinv_suite_run(const char* config_json, const char* out_dir,
                             char** summary_json);

/* One-off experiment runs used by the CLI subcommands.
 * kind: "srp" | "symmetry" | "involution_bound".
 * options_json fields (all optional): instance (e.g. "scalar2", "wiener64",
 * "ht32", "swap"), n, trials, seed, n_max, strict (symmetry only).
 * Returns a JSON object with per-trial outcomes and a pass flag; status is
 * NBINV_ERR_PROPERTY_FAILED when the property (or strict control) failed. */
nbinv_status nbinv_experiment_run(const char* kind, const char* options_json,
                                  char** outcomes_json);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* NBINV_H */
