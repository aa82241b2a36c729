#ifndef MIRROR_QED_H
#define MIRROR_QED_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum MqStatus {
  MQ_STATUS_OK = 0,
  MQ_STATUS_NULL_POINTER = 1,
  MQ_STATUS_DOMAIN = 2,
  MQ_STATUS_INDEX = 3,
  MQ_STATUS_DIMENSION = 4,
  MQ_STATUS_INVALID_PARAMETER = 5,
  MQ_STATUS_CONSISTENCY = 6,
  MQ_STATUS_IO = 7,
  MQ_STATUS_PANIC = 8,
} MqStatus;

// Mirror phase distance, half-aperture and reflectivity.
typedef struct MqGeometry MqGeometry;

// Angular quadrature grid.
typedef struct MqGrid MqGrid;

// Ground-state shift split into its three parts, in units of the
// free-space rate.
typedef struct MqCasimirParts {
  double delta_se;
  double delta_fs;
  double delta_cp;
} MqCasimirParts;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failed call on this thread; empty after a success.
// The pointer stays valid until the next call into this library.
const char *mq_last_error_message(void);

// Library version as a static NUL-terminated string.
const char *mq_version(void);

// # Safety
// `out_geom` must be a valid pointer. The handle is released with
// `mq_geometry_free`.
enum MqStatus mq_geometry_new(double a, double alpha, double rho, struct MqGeometry **out_geom);

// # Safety
// `geom` must come from `mq_geometry_new` and not be used afterwards.
void mq_geometry_free(struct MqGeometry *geom);

// # Safety
// `out_grid` must be a valid pointer. The handle is released with
// `mq_grid_free`.
enum MqStatus mq_grid_new(size_t n_theta, size_t n_phi, struct MqGrid **out_grid);

// # Safety
// `grid` must come from `mq_grid_new` and not be used afterwards.
void mq_grid_free(struct MqGrid *grid);

// Normalized decay rate at displacement `r_wavelengths[3]` (in
// wavelengths) for dipole direction `dipole[3]`. A null `grid` picks one
// from the displacement.
//
// # Safety
// Pointers must be valid; the arrays must hold three doubles.
enum MqStatus mq_decay_rate(const struct MqGeometry *geom,
                            const struct MqGrid *grid,
                            const double *r_wavelengths,
                            const double *dipole,
                            double *out_value);

// Normalized excited-state shift; arguments as for `mq_decay_rate`.
//
// # Safety
// Pointers must be valid; the arrays must hold three doubles.
enum MqStatus mq_excited_shift(const struct MqGeometry *geom,
                               const struct MqGrid *grid,
                               const double *r_wavelengths,
                               const double *dipole,
                               double *out_value);

// Cutoff-regularized ground-state integral evaluated directly.
//
// # Safety
// `out_value` must be a valid pointer.
enum MqStatus mq_lamb_direct(double a, double kappa, double *out_value);

// # Safety
// `out_parts` must be a valid pointer.
enum MqStatus mq_casimir_decomposition(double a, double kappa, struct MqCasimirParts *out_parts);

// Cutoff-independent ground-state shift at phase distance `a`.
//
// # Safety
// `out_value` must be a valid pointer.
enum MqStatus mq_delta_cp(double a, double *out_value);

// # Safety
// `out_value` must be a valid pointer.
enum MqStatus mq_gamma_1d(double a, double *out_value);

// # Safety
// `out_value` must be a valid pointer.
enum MqStatus mq_shift_1d(double a, double *out_value);

// # Safety
// `out_value` must be a valid pointer.
enum MqStatus mq_sph_bessel_j(size_t l, double x, double *out_value);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MIRROR_QED_H */
