#ifndef CGL_CGL_H
#define CGL_CGL_H

/* C interface to the complex Ginzburg-Landau lattice library.
 *
 * Objects are opaque handles created by cgl_*_create / cgl_*_load and freed by
 * the matching cgl_*_destroy. Every fallible call returns a cgl_status; the
 * message of the most recent failure on the calling thread is available from
 * cgl_last_error(). Complex vectors are passed as interleaved (re, im) doubles,
 * site -J first. */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define CGL_API __declspec(dllexport)
#elif defined(CGL_BUILDING_LIBRARY)
#define CGL_API __attribute__((visibility("default")))
#else
#define CGL_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum cgl_status {
  CGL_OK = 0,
  CGL_ERR_PARAMETER = 1,
  CGL_ERR_NO_CONVERGENCE = 2,
  CGL_ERR_DIMENSION = 3,
  CGL_ERR_QUADRATURE = 4,
  CGL_ERR_CONFIG = 5,
  CGL_ERR_INVALID_ARGUMENT = 6,
  CGL_ERR_INTERNAL = 7
} cgl_status;

typedef struct cgl_params cgl_params;
typedef struct cgl_state cgl_state;
typedef struct cgl_cloud cgl_cloud;
typedef struct cgl_config cgl_config;
typedef struct cgl_results cgl_results;

CGL_API const char* cgl_last_error(void);
CGL_API const char* cgl_status_string(cgl_status status);
CGL_API const char* cgl_version(void);

/* ---- model parameters ---- */

typedef struct cgl_params_desc {
  double lambda, mu, gamma, beta, k, nu, p, eta;
  int window;
} cgl_params_desc;

typedef struct cgl_constants {
  double c1, c2, c3, cp, r_star, eps_star;
} cgl_constants;

/* Fills desc with the reference parameter set (force is delta_0). */
CGL_API void cgl_params_reference_desc(cgl_params_desc* desc);
/* Force starts at zero; set it with cgl_params_set_force. */
CGL_API cgl_status cgl_params_create(const cgl_params_desc* desc, cgl_params** out);
CGL_API cgl_status cgl_params_reference(int window, cgl_params** out);
CGL_API void cgl_params_destroy(cgl_params* params);
CGL_API cgl_status cgl_params_set_force(cgl_params* params, int site, double re, double im);
CGL_API cgl_status cgl_params_validate(const cgl_params* params);
CGL_API cgl_status cgl_params_constants(const cgl_params* params, cgl_constants* out);
/* M_r and L_r of the Lipschitz estimates. */
CGL_API cgl_status cgl_params_bounds(const cgl_params* params, double r, double* m_r, double* l_r);

/* ---- lattice states ---- */

/* Zero state when values is NULL; otherwise 2 * (2 * half_width + 1) doubles.
 * truncated != 0 selects the periodic (2m+1)-dimensional system. */
CGL_API cgl_status cgl_state_create(int half_width, int truncated, const double* values,
                                    cgl_state** out);
CGL_API void cgl_state_destroy(cgl_state* state);
CGL_API size_t cgl_state_sites(const cgl_state* state);
CGL_API cgl_status cgl_state_values(const cgl_state* state, double* out, size_t capacity);
CGL_API double cgl_state_norm(const cgl_state* state);
CGL_API cgl_status cgl_state_distance(const cgl_state* a, const cgl_state* b, double* out);

/* ---- dynamics ---- */

CGL_API cgl_status cgl_vector_field(const cgl_state* u, const cgl_params* params, cgl_state** out);
/* One implicit Euler step; *iterations receives the Picard sweep count when non-NULL. */
CGL_API cgl_status cgl_ies_step(const cgl_state* u, const cgl_params* params, double eps,
                                double fp_tol, int fp_max_iter, cgl_state** out, int* iterations);
CGL_API cgl_status cgl_reference_solve(const cgl_state* u, const cgl_params* params, double t_end,
                                       int substeps, cgl_state** out);
CGL_API cgl_status cgl_one_step_defect(const cgl_state* y, const cgl_params* params, double eps,
                                       double* out);

/* ---- noise ---- */

/* Samples the stationary OU path on the grid t_begin..t_end with step dt.
 * Writes at most capacity values and reports the full count in *count. */
CGL_API cgl_status cgl_ou_sample(uint64_t seed, double t_begin, double t_end, double dt, double* z,
                                 size_t capacity, size_t* count);
/* R(a, omega) for the path with the given seed and grid step. */
CGL_API cgl_status cgl_absorbing_radius(const cgl_params* params, double a, uint64_t seed, double dt,
                                        double* out);

/* ---- attractor clouds ---- */

typedef enum cgl_variant {
  CGL_CONTINUOUS_REF = 0,
  CGL_IES = 1,
  CGL_TRUNCATED_IES = 2,
  CGL_TRUNCATED_REF = 3,
  CGL_RANDOM_PULLBACK = 4,
  CGL_TRUNCATED_RANDOM_PULLBACK = 5
} cgl_variant;

typedef struct cgl_cloud_spec {
  cgl_variant variant;
  double eps;
  int m; /* ignored unless the variant is truncated */
  double a;
  uint64_t seed;
  int n_init;
  int burn_in; /* < 0 derives it from burn_target */
  int collect;
  int stride;
  double burn_target;
} cgl_cloud_spec;

CGL_API void cgl_cloud_spec_default(cgl_cloud_spec* spec);
CGL_API cgl_status cgl_cloud_build(const cgl_params* params, const cgl_cloud_spec* spec, cgl_cloud** out);
/* Cloud of explicit states; all must share one shape. */
CGL_API cgl_status cgl_cloud_from_states(const cgl_state* const* states, size_t count, cgl_cloud** out);
CGL_API void cgl_cloud_destroy(cgl_cloud* cloud);
CGL_API size_t cgl_cloud_size(const cgl_cloud* cloud);
CGL_API cgl_status cgl_cloud_point(const cgl_cloud* cloud, size_t index, cgl_state** out);
CGL_API cgl_status cgl_cloud_norm(const cgl_cloud* cloud, double* out);
CGL_API cgl_status cgl_hausdorff_semi(const cgl_cloud* a, const cgl_cloud* b, double* out);
CGL_API cgl_status cgl_hausdorff_full(const cgl_cloud* a, const cgl_cloud* b, double* out);

/* ---- run configuration ---- */

CGL_API cgl_status cgl_config_default(cgl_config** out);
CGL_API cgl_status cgl_config_load(const char* path, cgl_config** out);
/* base_dir resolves relative g.file paths; may be NULL. */
CGL_API cgl_status cgl_config_parse(const char* text, const char* base_dir, cgl_config** out);
CGL_API void cgl_config_destroy(cgl_config* config);
CGL_API cgl_status cgl_config_set_seed(cgl_config* config, uint64_t seed);
CGL_API cgl_status cgl_config_set_output_prefix(cgl_config* config, const char* prefix);
CGL_API cgl_status cgl_config_set_output_format(cgl_config* config, const char* format);
CGL_API const char* cgl_config_output_prefix(const cgl_config* config);
/* Canonical text; the returned string is owned by the config. */
CGL_API const char* cgl_config_serialize(cgl_config* config);

/* ---- experiments ---- */

/* Number of experiment names and the i-th name. */
CGL_API size_t cgl_experiment_count(void);
CGL_API const char* cgl_experiment_name(size_t index);
CGL_API cgl_status cgl_run_experiment(const char* name, const cgl_config* config, cgl_results** out);
CGL_API void cgl_results_destroy(cgl_results* results);
CGL_API size_t cgl_results_count(const cgl_results* results);
CGL_API int cgl_results_failures(const cgl_results* results);
/* CSV text; the returned string is owned by the results. */
CGL_API const char* cgl_results_csv(cgl_results* results, int timing);
CGL_API cgl_status cgl_results_write_csv(const cgl_results* results, const char* path, int timing);
/* Writes every collected cloud to <prefix>_<experiment>_<name>_cloud.txt. */
CGL_API cgl_status cgl_results_write_clouds(const cgl_results* results, const char* prefix);

#ifdef __cplusplus
}
#endif

#endif
