/* fcv -- fast cross-validation scores for weighted Tikhonov regularization
 * of Fourier-type approximation on the torus, the unit interval (Chebyshev
 * basis) and the 2-sphere (spherical harmonics).
 *
 * C interface of the shared library. All objects are opaque handles created
 * and destroyed through these functions; every call returns an fcv_status
 * and the last error message is available per thread via fcv_last_error().
 *
 * Conventions:
 *  - domains:      "torus1", "torus2", ..., "interval", "sphere"
 *  - index kinds:  "grid", "hyperbolic", "chebyshev", "spherical"
 *  - score kinds:  "P", "V" (exact), "Pt", "Vt" (Voronoi-approximated)
 *  - node coordinates are row-major, d columns per node (torus d, interval 1,
 *    sphere 3); complex vectors are split into re/im arrays (im may be NULL
 *    for real data)
 *  - guarded non-finite scores are reported as +infinity
 */
#ifndef FCV_H
#define FCV_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define FCV_API __declspec(dllexport)
#else
#define FCV_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum fcv_status {
  FCV_OK = 0,
  FCV_ERR_VALIDATION = 1,    /* bad arguments, shape mismatches */
  FCV_ERR_CERTIFICATION = 2, /* quadrature rule failed the Gram gate */
  FCV_ERR_NUMERIC = 3,       /* solver / geometry failure */
  FCV_ERR_IO = 4,            /* file errors */
} fcv_status;

typedef struct fcv_problem fcv_problem;
typedef struct fcv_curve fcv_curve;

/* Last error message of the calling thread; valid until the next failing
 * call on the same thread. */
FCV_API const char* fcv_last_error(void);

/* ------------------------------------------------------------------ *
 *  problem lifecycle                                                  *
 * ------------------------------------------------------------------ */

/* Nodes are copied; torus coordinates are reduced mod 1, sphere nodes must
 * be unit vectors, duplicates are rejected. */
FCV_API fcv_status fcv_problem_create(const char* domain, const char* index_kind, int index_n,
                                      const double* coords, size_t n_nodes, fcv_problem** out);

/* Rank-1 lattice problem: nodes (m z mod M)/M, fast lattice transforms. */
FCV_API fcv_status fcv_problem_create_rank1(const char* index_kind, int index_n,
                                            const long long* z, size_t dim, long long m,
                                            fcv_problem** out);

/* Assembles a problem from the CSV/JSON formats this library writes. */
FCV_API fcv_status fcv_problem_create_from_files(const char* domain, const char* index_kind,
                                                 int index_n, const char* nodes_csv,
                                                 const char* values_csv, fcv_problem** out);

/* Assembles nodes + spatial weights from a rule descriptor JSON
 * ({"domain", "nodes_csv", "weights", "exactness_degree", "lattice"?}). */
FCV_API fcv_status fcv_problem_create_from_rule(const char* rule_json, const char* index_kind,
                                                int index_n, const char* values_csv,
                                                fcv_problem** out);

FCV_API void fcv_problem_free(fcv_problem* p);

/* ------------------------------------------------------------------ *
 *  configuration                                                      *
 * ------------------------------------------------------------------ */

FCV_API fcv_status fcv_problem_set_values(fcv_problem* p, const double* re, const double* im,
                                          size_t n);
FCV_API fcv_status fcv_problem_set_frequency_weights(fcv_problem* p, const double* w, size_t n);
/* "sobolev:s", "poly:p", "cheb:p", "sphere:s" */
FCV_API fcv_status fcv_problem_set_frequency_scheme(fcv_problem* p, const char* scheme);
FCV_API fcv_status fcv_problem_set_spatial_weights(fcv_problem* p, const double* w, size_t n);
/* Voronoi weights of the problem's own nodes (torus d<=2, interval, sphere). */
FCV_API fcv_status fcv_problem_use_voronoi_weights(fcv_problem* p);
/* measure/|X| everywhere */
FCV_API fcv_status fcv_problem_use_uniform_weights(fcv_problem* p);
/* Ground-truth spectrum enabling the l2_error curve column. */
FCV_API fcv_status fcv_problem_set_truth(fcv_problem* p, const double* re, const double* im,
                                         size_t n);
FCV_API fcv_status fcv_problem_load_truth(fcv_problem* p, const char* truth_json);
FCV_API fcv_status fcv_problem_set_lsqr(fcv_problem* p, int max_iterations, double tolerance);
FCV_API fcv_status fcv_problem_set_threads(fcv_problem* p, int threads);

/* Gates the exact fast paths: canonical constructions certify structurally,
 * everything else runs the Gram diagnostic against `threshold` (pass 0 for
 * the default 1e-8). certified/gram_dev may be NULL. */
FCV_API fcv_status fcv_problem_certify(fcv_problem* p, double threshold, int* certified,
                                       double* gram_dev);

/* ------------------------------------------------------------------ *
 *  queries                                                            *
 * ------------------------------------------------------------------ */

FCV_API fcv_status fcv_problem_num_nodes(const fcv_problem* p, size_t* out);
FCV_API fcv_status fcv_problem_num_coefficients(const fcv_problem* p, size_t* out);
FCV_API fcv_status fcv_problem_is_certified(const fcv_problem* p, int* out);
FCV_API fcv_status fcv_problem_get_spatial_weights(const fcv_problem* p, double* out);
FCV_API fcv_status fcv_problem_mesh_norm(const fcv_problem* p, double* out);

/* ------------------------------------------------------------------ *
 *  computations                                                       *
 * ------------------------------------------------------------------ */

/* Tikhonov minimizer at one lambda (diagonal path when certified, LSQR
 * otherwise); iterations may be NULL. */
FCV_API fcv_status fcv_problem_solve(const fcv_problem* p, double lambda, double* coeff_re,
                                     double* coeff_im, int* iterations);

/* values = F coeffs at the problem's nodes. */
FCV_API fcv_status fcv_problem_reconstruct(const fcv_problem* p, const double* coeff_re,
                                           const double* coeff_im, double* val_re,
                                           double* val_im);

/* Hat-matrix diagonals: closed form (exact when certified, Voronoi-
 * approximated otherwise), or the dense brute-force reference. */
FCV_API fcv_status fcv_problem_hat_diagonals(const fcv_problem* p, double lambda,
                                             int brute_force, double* out);

/* One score evaluation; P/V when certified, approximated otherwise.
 * Any output may be NULL. */
FCV_API fcv_status fcv_problem_score(const fcv_problem* p, double lambda, double* p_score,
                                     double* v_score, double* residual);

/* Dense brute-force P and V (Remark-style reference), and the direct
 * leave-one-out sum solved per node. */
FCV_API fcv_status fcv_problem_score_oracle(const fcv_problem* p, double lambda, double* p_score,
                                            double* v_score);
FCV_API fcv_status fcv_problem_score_loocv(const fcv_problem* p, double lambda, double* out);

/* Score curve over a log-equispaced lambda grid; with_oracle also fills the
 * dense-reference columns. */
FCV_API fcv_status fcv_problem_curve(const fcv_problem* p, double lambda_min, double lambda_max,
                                     int grid_points, int with_oracle, fcv_curve** out);

/* Minimizes one score kind: descending coarse scan + golden-section
 * refinement; never lands in the guarded small-lambda zone. boundary and
 * curve_out may be NULL. */
FCV_API fcv_status fcv_problem_minimize(const fcv_problem* p, const char* score_kind,
                                        double lambda_min, double lambda_max, int grid_points,
                                        double* lambda_star, int* boundary,
                                        fcv_curve** curve_out);

/* Solves at `lambda` and writes the spectrum JSON and the reconstruction
 * CSV (either path may be NULL to skip). */
FCV_API fcv_status fcv_problem_save_solution(const fcv_problem* p, double lambda,
                                             const char* spectrum_json,
                                             const char* reconstruction_csv);

/* ------------------------------------------------------------------ *
 *  curves                                                             *
 * ------------------------------------------------------------------ */

FCV_API fcv_status fcv_curve_size(const fcv_curve* c, size_t* out);
/* column: "lambda", "P", "V", "Pt", "Vt", "residual", "l2", "iterations".
 * present == 0 means the cell is unavailable (blank in CSV). */
FCV_API fcv_status fcv_curve_get(const fcv_curve* c, size_t row, const char* column, double* value,
                                 int* present);
FCV_API fcv_status fcv_curve_write_csv(const fcv_curve* c, const char* path);
FCV_API void fcv_curve_free(fcv_curve* c);

/* ------------------------------------------------------------------ *
 *  standalone utilities                                               *
 * ------------------------------------------------------------------ */

FCV_API fcv_status fcv_index_size(const char* index_kind, int dim, int n, size_t* out);
FCV_API fcv_status fcv_voronoi_weights(const char* domain, const double* coords, size_t n_nodes,
                                       double* weights);
FCV_API fcv_status fcv_mesh_norm(const char* domain, const double* coords, size_t n_nodes,
                                 double* out);
FCV_API fcv_status fcv_weights_write_csv(const char* path, const double* w, size_t n);

/* ------------------------------------------------------------------ *
 *  experiment generation                                              *
 * ------------------------------------------------------------------ */

/* Comma-separated preset names into buf. */
FCV_API fcv_status fcv_preset_list(char* buf, size_t buflen);

/* Generates a preset (overrides_json may adjust "n", "count", "noise",
 * "seed"; NULL for none) and writes nodes.csv, values.csv, truth.json and
 * rule.json (when the nodes form a known rule) into out_dir. data_dir is
 * where shipped lattice/design files live (NULL uses FCV_DATA_DIR or
 * "data"). A one-line summary is written into summary. */
FCV_API fcv_status fcv_generate(const char* preset_name, const char* overrides_json,
                                const char* data_dir, const char* out_dir, char* summary,
                                size_t summary_len);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* FCV_H */
