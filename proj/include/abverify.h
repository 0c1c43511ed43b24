/* abverify -- numerical verification of sharp L^p bounds for the
 * Ahlfors-Beurling transform on radial-type functions: Burkholder-function
 * convexity, Hardy-operator sharp constants on the half-line, the Fourier
 * multiplier realization of the transform, heat-extension identities, and
 * the associated structural identities on polar mode pairs.
 *
 * C interface over the C++ core. All handles are opaque; functions return
 * ABV_OK / an error code (or NULL for constructors) and leave a message in
 * abv_last_error(), which is thread-local.
 */
#ifndef ABVERIFY_H
#define ABVERIFY_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#define ABV_OK 0
#define ABV_ERR_INVALID_ARGUMENT 1
#define ABV_ERR_BRANCH_MISMATCH 2
#define ABV_ERR_NON_INTEGRABLE 3
#define ABV_ERR_SINGULAR_POINT 4
#define ABV_ERR_NONZERO_MEAN 5
#define ABV_ERR_SUPPORT_MISMATCH 6
#define ABV_ERR_RESOLUTION 7
#define ABV_ERR_TAIL 8
#define ABV_ERR_DEGENERATE_SAMPLER 9
#define ABV_ERR_ZERO_DENOMINATOR 10
#define ABV_ERR_NODE_OUTSIDE_EXTENT 11
#define ABV_ERR_NAN 12
#define ABV_ERR_IO 13
#define ABV_ERR_INTERNAL 14

#define ABV_MEASURE_LEBESGUE 0 /* du   */
#define ABV_MEASURE_RADIAL 1   /* u du */

#define ABV_KIND_HARDY 0
#define ABV_KIND_HARDY_MINUS_ID 1
#define ABV_KIND_LAMBDA 2

#define ABV_LINE_PSI 0
#define ABV_LINE_PSI_P 1
#define ABV_LINE_M 2

const char* abv_version(void);
const char* abv_last_error(void);

/* ---- pointwise functions (Burkholder family) -------------------------- */

int abv_eval_l(double zr, double zi, double wr, double wi, double* out);
int abv_eval_m(double zr, double zi, double wr, double wi, double* out);
int abv_eval_lp(double zr, double zi, double wr, double wi, double p, double* out);
/* matrix entries row-major: a[0]=a, a[1]=b, a[2]=c, a[3]=d */
int abv_eval_psi(const double a[4], double* out);
int abv_eval_psi_p(const double a[4], double p, double* out);
int abv_matrix_to_phase(const double a[4], double zw[4]);
int abv_phase_to_matrix(const double zw[4], double a[4]);
int abv_burkholder_margin(double zr, double zi, double wr, double wi, double p,
                          double* out);
int abv_sample_rank_one(uint64_t seed, double b[4]);
int abv_midpoint_convexity_margin(int line_function, double p, const double a[4],
                                  const double b[4], double t1, double t2,
                                  double* out);
int abv_scaling_integral_ratio(double zr, double zi, double wr, double wi,
                               double p, double* integral, double* target,
                               double* ratio, double* reference);

/* ---- half-line grids, profiles, operators ----------------------------- */

typedef struct abv_grid abv_grid;
typedef struct abv_profile abv_profile;
typedef struct abv_stretch abv_stretch;
typedef struct abv_operator abv_operator;
typedef struct abv_norm_estimate abv_norm_estimate;

abv_grid* abv_grid_log(double umin, double umax, size_t n, int measure);
abv_grid* abv_grid_linear(double umin, double umax, size_t n, int measure);
void abv_grid_free(abv_grid*);
size_t abv_grid_size(const abv_grid*);
double abv_grid_node(const abv_grid*, size_t i);
double abv_grid_weight(const abv_grid*, size_t i);

/* im may be NULL for real profiles */
abv_profile* abv_profile_create(const abv_grid*, const double* re, const double* im,
                                size_t n, int mode_index);
void abv_profile_free(abv_profile*);
size_t abv_profile_size(const abv_profile*);
double abv_profile_node(const abv_profile*, size_t i);
int abv_profile_get(const abv_profile*, size_t i, double* re, double* im);
int abv_profile_write_csv(const abv_profile*, const char* path);

abv_profile* abv_apply_hardy(const abv_profile*);
abv_profile* abv_apply_lambda_m(const abv_profile*, int m);
int abv_lp_norm(const abv_profile*, double p, double* out);
int abv_reduced_kernel_nk(double rho, double r, int k, double* re, double* im);

abv_stretch* abv_stretch_from_beta(const abv_profile* beta);
void abv_stretch_free(abv_stretch*);
abv_profile* abv_stretch_g(const abv_stretch*);
abv_profile* abv_stretch_gprime(const abv_stretch*);
abv_profile* abv_beta_from_stretch(const abv_stretch*, const abv_grid* rho_grid);
int abv_hm_identity_residual(const abv_stretch*, double* out);
int abv_stretch_ratio(const abv_stretch*, double p, double* out);
int abv_mode_functional(const abv_stretch*, double p, double* value, double* scale);
/* rho_grid may be NULL for the default log grid [1e-6, 1e6], n = 4000 */
int abv_maximize_stretch_ratio(double p, const abv_grid* rho_grid, uint64_t seed,
                               double* ratio, abv_stretch** witness);

abv_operator* abv_discretize(int kind, int m, const abv_grid*);
void abv_operator_free(abv_operator*);
double abv_operator_entry(const abv_operator*, size_t i, size_t j);
abv_norm_estimate* abv_estimate_norm(const abv_operator*, double p, int max_iter,
                                     double tol, int restarts, uint64_t seed);
void abv_norm_free(abv_norm_estimate*);
double abv_norm_value(const abv_norm_estimate*);
int abv_norm_iterations(const abv_norm_estimate*);
int abv_norm_converged(const abv_norm_estimate*);
size_t abv_norm_history_size(const abv_norm_estimate*);
double abv_norm_history_at(const abv_norm_estimate*, size_t i);
abv_profile* abv_norm_witness(const abv_norm_estimate*);
/* caller frees with abv_string_free */
char* abv_norm_json(const abv_norm_estimate*, int kind, int m, double p);
void abv_string_free(char*);

/* ---- periodic plane fields -------------------------------------------- */

typedef struct abv_field abv_field;
typedef double (*abv_radial_fn)(double r, void* ctx);

abv_field* abv_field_create(size_t n, double extent, const double* re,
                            const double* im);
abv_field* abv_field_from_radial(size_t n, double extent, abv_radial_fn g,
                                 void* ctx);
void abv_field_free(abv_field*);
size_t abv_field_n(const abv_field*);
double abv_field_extent(const abv_field*);
int abv_field_get(const abv_field*, size_t ix, size_t iy, double* re, double* im);
abv_field* abv_ab_transform(const abv_field*);
abv_field* abv_heat_extend(const abv_field*, double t);
int abv_field_l2(const abv_field*, double* out);
int abv_field_write_binary(const abv_field*, const char* path);
abv_field* abv_field_read_binary(const char* path);
int abv_field_write_csv(const abv_field*, const char* path);
abv_profile* abv_project_mode(const abv_field*, int k, const abv_grid*, int n_phi);
int abv_crosscheck_radial(abv_radial_fn g, void* ctx, size_t n, double extent,
                          int* phase_mode, double* concentration,
                          double* mismatch);
int abv_hext_residual(const abv_field* f, const abv_field* g, double t_max, int nt,
                      double* lhs_re, double* lhs_im, double* residual_displayed,
                      double* residual_conjugate, double* residual,
                      char matched_form[32]);

/* ---- surrogate Phi and the polar structural identities ----------------- */

typedef struct abv_phi abv_phi;
typedef double (*abv_phi_fn)(double x, double y, void* ctx);

/* which = 0: x^2 y + x y^2; which = 1: x^3 + x^2 y + x y^2 + y^3 */
abv_phi* abv_phi_builtin(int which);
/* user-supplied Phi with partials; validated against finite differences */
abv_phi* abv_phi_create(abv_phi_fn phi, abv_phi_fn phi1, abv_phi_fn phi11,
                        abv_phi_fn phi12, void* ctx);
void abv_phi_free(abv_phi*);

typedef struct {
  double d1_max, d1_scale;
  double c_max;
  double uv_theta_max, uv_theta_scale;
  double radial_mix_max, radial_mix_scale;
  double a, b, boundary_term, parts_residual, parts_scale;
} abv_structural_report;

/* arrays of length abv_grid_size(grid): m, m', k, k', xi, xi', eta, eta' */
int abv_structural_identities(const abv_grid* grid, const double* m,
                              const double* mp, const double* k, const double* kp,
                              const double* xi, const double* xip,
                              const double* eta, const double* etap,
                              const abv_phi* phi, int n_theta,
                              abv_structural_report* out);

/* ---- configuration, suite runner, reports ------------------------------ */

typedef struct abv_config abv_config;
typedef struct abv_report abv_report;

abv_config* abv_config_create(void);
void abv_config_free(abv_config*);
int abv_config_set_command(abv_config*, const char* command);
int abv_config_set_p_list(abv_config*, const double* p, size_t n);
int abv_config_set_grid(abv_config*, double umin, double umax, int n);
int abv_config_set_field(abv_config*, int n, double extent);
int abv_config_set_seed(abv_config*, uint64_t seed);
int abv_config_set_out(abv_config*, const char* path);
int abv_config_set_tolerance(abv_config*, const char* check, double value);
abv_config* abv_config_load(const char* path);
int abv_config_save(const abv_config*, const char* path);

abv_report* abv_run(const abv_config*);
void abv_report_free(abv_report*);
int abv_report_pass(const abv_report*);
/* owned by the report handle; valid until abv_report_free */
const char* abv_report_json(const abv_report*);
size_t abv_report_record_count(const abv_report*);
const char* abv_report_record_name(const abv_report*, size_t i);
const char* abv_report_record_anchor(const abv_report*, size_t i);
int abv_report_record_pass(const abv_report*, size_t i);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* ABVERIFY_H */
