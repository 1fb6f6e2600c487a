#ifndef DDQSL_H
#define DDQSL_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum DdqslOptimalPair {
  DDQSL_OPTIMAL_PAIR_POLE = 0,
  DDQSL_OPTIMAL_PAIR_EQUATOR = 1,
} DdqslOptimalPair;

// Which one-sided limit to take at a pulse time.
typedef enum DdqslSide {
  DDQSL_SIDE_LEFT = 0,
  DDQSL_SIDE_RIGHT = 1,
} DdqslSide;

typedef enum DdqslStatus {
  DDQSL_STATUS_OK = 0,
  DDQSL_STATUS_NULL_POINTER = 1,
  DDQSL_STATUS_VALIDATION = 2,
  DDQSL_STATUS_DOMAIN = 3,
  DDQSL_STATUS_AMBIGUOUS_PULSE_TIME = 4,
  DDQSL_STATUS_DEGENERATE_TARGET = 5,
  DDQSL_STATUS_CAPACITY = 6,
  DDQSL_STATUS_DIMENSION_MISMATCH = 7,
  DDQSL_STATUS_PANIC = 8,
} DdqslStatus;

// Opaque handle: spectral parameters plus pulse schedule, with the
// interval coefficients precomputed.
typedef struct DdqslModel DdqslModel;

typedef struct DdqslQslt {
  double tau;
  double tau_qsl;
  double ratio;
  double p_tau;
  double gamma_theta0;
  double total_var;
} DdqslQslt;

typedef struct DdqslNonMarkovianity {
  double gamma;
  double gamma_theta0;
  double gamma_theta_pi4;
  enum DdqslOptimalPair optimal;
} DdqslNonMarkovianity;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Creates a model for `γ₀`, `λ` and `n_pulses` equally spaced pulses on `[0, τ]`.
//
// # Safety
// `out` must be null or point to writable storage for one pointer.
enum DdqslStatus ddqsl_model_new(double gamma0,
                                 double lambda,
                                 double tau,
                                 size_t n_pulses,
                                 struct DdqslModel **out);

// # Safety
// `model` must be null or a pointer from [`ddqsl_model_new`] not yet freed.
void ddqsl_model_free(struct DdqslModel *model);

// `κ_t`; at a pulse time the value is continuous.
//
// # Safety
// `model` must come from [`ddqsl_model_new`]; `out` must be writable.
enum DdqslStatus ddqsl_kappa(const struct DdqslModel *model, double t, double *out);

// `κ̇_t`; fails with `AmbiguousPulseTime` exactly at a pulse.
//
// # Safety
// `model` must come from [`ddqsl_model_new`]; `out` must be writable.
enum DdqslStatus ddqsl_kappa_dot(const struct DdqslModel *model, double t, double *out);

// # Safety
// `model` must come from [`ddqsl_model_new`]; `out` must be writable.
enum DdqslStatus ddqsl_kappa_dot_sided(const struct DdqslModel *model,
                                       double t,
                                       enum DdqslSide which,
                                       double *out);

// # Safety
// `model` must come from [`ddqsl_model_new`]; `out` must be writable.
enum DdqslStatus ddqsl_population(const struct DdqslModel *model, double t, double *out);

// # Safety
// `model` must come from [`ddqsl_model_new`]; `out` must be writable.
enum DdqslStatus ddqsl_population_dot(const struct DdqslModel *model, double t, double *out);

// # Safety
// `model` must come from [`ddqsl_model_new`]; `out` must be writable.
enum DdqslStatus ddqsl_population_dot_sided(const struct DdqslModel *model,
                                            double t,
                                            enum DdqslSide which,
                                            double *out);

// Speed-limit time of the W-state evolution over the model's window.
//
// # Safety
// `model` must come from [`ddqsl_model_new`]; `out` must be writable.
enum DdqslStatus ddqsl_qslt(const struct DdqslModel *model, struct DdqslQslt *out);

// # Safety
// `model` must come from [`ddqsl_model_new`]; `out` must be writable.
enum DdqslStatus ddqsl_non_markovianity(const struct DdqslModel *model,
                                        struct DdqslNonMarkovianity *out);

// Largest gap between the analytic `κ_t` and the pseudomode integration
// over about `grid_points` samples.
//
// # Safety
// `model` must come from [`ddqsl_model_new`]; `out` must be writable.
enum DdqslStatus ddqsl_verify_kappa(const struct DdqslModel *model,
                                    size_t grid_points,
                                    double *out);

// Message of the last failed call on this thread, or an empty string.
// The pointer stays valid until the next call on the same thread.
const char *ddqsl_last_error_message(void);

const char *ddqsl_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* DDQSL_H */
