#ifndef DIRAC_SHELL_H
#define DIRAC_SHELL_H

/* Generated by cbindgen from crates/ffi; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum DsStatus {
  DS_STATUS_OK = 0,
  DS_STATUS_NULL_POINTER = 1,
  DS_STATUS_INVALID_ARGUMENT = 2,
  DS_STATUS_NOT_SPHERE = 3,
  DS_STATUS_WRONG_KIND = 4,
  DS_STATUS_COMPUTATION = 5,
  DS_STATUS_PANIC = 6,
} DsStatus;

typedef enum DsKernel {
  DS_KERNEL_C = 0,
  DS_KERNEL_K = 1,
  DS_KERNEL_W = 2,
} DsKernel;

typedef enum DsSign {
  DS_SIGN_PLUS = 0,
  DS_SIGN_MINUS = 1,
} DsSign;

/**
 * Opaque discrete operator handle.
 */
typedef struct DsOperator DsOperator;

/**
 * Opaque surface handle.
 */
typedef struct DsSurface DsSurface;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, empty after a success.
 * The pointer stays valid until the next call on the same thread.
 */
const char *ds_last_error(void);

/**
 * Unit sphere with an `n_theta x 2 n_theta` grid.
 *
 * # Safety
 * `out` must be a valid pointer to writable storage for one handle.
 */
enum DsStatus ds_surface_sphere(size_t n_theta, struct DsSurface **out);

/**
 * Ellipsoid with semi-axes `(a, b, c)`.
 *
 * # Safety
 * `out` must be a valid pointer to writable storage for one handle.
 */
enum DsStatus ds_surface_ellipsoid(double a,
                                   double b,
                                   double c,
                                   size_t n_theta,
                                   struct DsSurface **out);

/**
 * # Safety
 * `surf` must come from a `ds_surface_*` constructor and not be freed twice.
 * Null is ignored.
 */
void ds_surface_free(struct DsSurface *surf);

/**
 * Number of nodes and total area.
 *
 * # Safety
 * `surf` must be a live handle; the out pointers must be valid.
 */
enum DsStatus ds_surface_info(const struct DsSurface *surf, size_t *len, double *area);

/**
 * Assemble `C`, `K` or `W` at `(m, a)` on `surf`.
 *
 * # Safety
 * `surf` must be a live handle and `out` a valid pointer.
 */
enum DsStatus ds_operator_assemble(const struct DsSurface *surf,
                                   double m,
                                   double a,
                                   enum DsKernel kernel,
                                   struct DsOperator **out);

/**
 * # Safety
 * `op` must come from [`ds_operator_assemble`] and not be freed twice.
 * Null is ignored.
 */
void ds_operator_free(struct DsOperator *op);

/**
 * Dimension of the compressed operator.
 *
 * # Safety
 * `op` must be a live handle and `out` a valid pointer.
 */
enum DsStatus ds_operator_dim(const struct DsOperator *op, size_t *out);

/**
 * `sigma_min((1/lambda) I + M)`.
 *
 * # Safety
 * `op` must be a live handle and `out` a valid pointer.
 */
enum DsStatus ds_smallest_singular(const struct DsOperator *op, double lambda, double *out);

/**
 * Largest singular value.
 *
 * # Safety
 * `op` must be a live handle and `out` a valid pointer.
 */
enum DsStatus ds_operator_norm(const struct DsOperator *op, double *out);

/**
 * `|| -4 (C A)^2 - I ||` on the probe subspace; `op` must be a `C` operator.
 *
 * # Safety
 * `op` must be a live handle and `out` a valid pointer.
 */
enum DsStatus ds_jump_residual(const struct DsOperator *op, double *out);

/**
 * Confinement criterion residual for the coupling `(lambda_e, lambda_s)`.
 *
 * # Safety
 * `op` must be a live `C` handle and `out` a valid pointer.
 */
enum DsStatus ds_criterion_residual(const struct DsOperator *op,
                                    double lambda_e,
                                    double lambda_s,
                                    double *out);

/**
 * Smallest singular value of the massless `W`; `surf` must be the unit sphere.
 *
 * # Safety
 * `surf` must be a live handle and `out` a valid pointer.
 */
enum DsStatus ds_riesz_witness(const struct DsSurface *surf, double *out);

/**
 * Sphere mode coefficients at `j = j2/2`.
 *
 * # Safety
 * Out pointers must be valid.
 */
enum DsStatus ds_mode_coefficients(uint32_t j2,
                                   double kappa,
                                   double *d_minus,
                                   double *d_plus,
                                   double *p_abs);

/**
 * Positive and negative roots of the sphere eigenvalue condition.
 *
 * # Safety
 * Out pointers must be valid.
 */
enum DsStatus ds_solve_lambda(double m,
                              double a,
                              uint32_t j2,
                              enum DsSign s,
                              double *pos,
                              double *neg);

/**
 * Closure of the positive-root range over `a in (-m, m)`.
 *
 * # Safety
 * Out pointers must be valid.
 */
enum DsStatus ds_admissible_interval(double m, uint32_t j2, enum DsSign s, double *lo, double *hi);

/**
 * `1/4 + 1/(lambda_e^2 - lambda_s^2)`.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum DsStatus ds_confinement_scalar(double lambda_e, double lambda_s, double *out);

/**
 * Whether `|lambda_e^2 - lambda_s^2 + 4| < tol`.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum DsStatus ds_is_confining(double lambda_e, double lambda_s, double tol, bool *out);

/**
 * Kernel of an operator handle.
 *
 * # Safety
 * `op` must be a live handle and `out` a valid pointer.
 */
enum DsStatus ds_operator_kernel(const struct DsOperator *op, enum DsKernel *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* DIRAC_SHELL_H */
