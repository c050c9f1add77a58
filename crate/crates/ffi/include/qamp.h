#ifndef QAMP_H
#define QAMP_H

/* Generated by cbindgen; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum QampStatus {
  QAMP_STATUS_OK = 0,
  QAMP_STATUS_NULL_POINTER = 1,
  QAMP_STATUS_ANGLE_OUT_OF_RANGE = 2,
  QAMP_STATUS_INVALID_CLONE_PARAMS = 3,
  QAMP_STATUS_INVALID_CONFIG = 4,
  QAMP_STATUS_INVALID_SPLIT = 5,
  QAMP_STATUS_PARITY_UNDEFINED = 6,
  QAMP_STATUS_INSUFFICIENT_PHOTONS = 7,
  QAMP_STATUS_DEGENERATE_DIRECTION = 8,
  QAMP_STATUS_INVALID_STATE = 9,
  QAMP_STATUS_PANIC = 99,
} QampStatus;

typedef enum QampParity {
  QAMP_PARITY_PLUS = 0,
  QAMP_PARITY_MINUS = 1,
} QampParity;

typedef enum QampMode {
  QAMP_MODE_IDEALIZED = 0,
  QAMP_MODE_PARTITIONED = 1,
} QampMode;

typedef enum QampAuxSource {
  QAMP_AUX_SOURCE_AMPLIFIED = 0,
  QAMP_AUX_SOURCE_EXACT = 1,
  QAMP_AUX_SOURCE_RANDOM = 2,
} QampAuxSource;

/**
 * Opaque attack campaign configuration.
 */
typedef struct QampAttackConfig QampAttackConfig;

/**
 * Opaque cloning machine.
 */
typedef struct QampMachine QampMachine;

typedef struct QampStokes {
  double s1;
  double s2;
  double s3;
} QampStokes;

typedef struct QampMachineConstants {
  double fidelity;
  double disturbance;
  double shrink_factor;
  double snr_index;
  bool snr_grows;
} QampMachineConstants;

typedef struct QampRate {
  uint64_t trials;
  uint64_t successes;
  uint64_t failures;
  double rate;
  double ci_low;
  double ci_high;
  double ci95;
  double mean_angular_error;
} QampRate;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *qamp_version(void);

/**
 * Message for the last failing call on this thread, or NULL. The pointer stays valid
 * until the next failing call on the same thread.
 */
const char *qamp_last_error_message(void);

/**
 * Static name of a status code, e.g. `"QAMP_STATUS_OK"`.
 */
const char *qamp_status_name(enum QampStatus status);

/**
 * Stokes expectation of the pure state `(theta, phi)`.
 */
enum QampStatus qamp_stokes(double theta, double phi, struct QampStokes *stokes);

/**
 * Canonical representative `(theta_c, phi_c)` of the state's auxiliary class.
 */
enum QampStatus qamp_aux_info(double theta, double phi, double *theta_c, double *phi_c);

enum QampStatus qamp_parity(double theta, double phi, enum QampParity *parity_out);

/**
 * Inverse of the parity/auxiliary split. `(theta_c, phi_c)` is canonicalized first.
 */
enum QampStatus qamp_reconstruct(enum QampParity parity_in,
                                 double theta_c,
                                 double phi_c,
                                 double *theta,
                                 double *phi);

/**
 * Creates a `p -> q` machine; free it with [`qamp_machine_free`].
 */
enum QampStatus qamp_machine_new(uint64_t p, uint64_t q, struct QampMachine **machine);

/**
 * Frees a machine. NULL is ignored.
 *
 * # Safety
 * `machine` must be NULL or a handle from [`qamp_machine_new`] that has not been freed.
 */
void qamp_machine_free(struct QampMachine *machine);

enum QampStatus qamp_machine_constants(const struct QampMachine *machine,
                                       struct QampMachineConstants *constants);

/**
 * Weights `(a, b)` of `ψ` and `ψ⊥` after `levels` cascade steps from a pure input.
 */
enum QampStatus qamp_cascade_weights(const struct QampMachine *machine,
                                     uint32_t levels,
                                     double *a,
                                     double *b);

/**
 * Ciphering-wheel key bit for `(parity, k)`.
 */
uint8_t qamp_ciphering_wheel(enum QampParity parity_in, uint64_t k);

/**
 * Y-00 security margin: `secure = M > π|α|`, `ratio = M/(π|α|)`.
 */
enum QampStatus qamp_security_margin(uint64_t m_levels,
                                     double alpha_sq,
                                     bool *secure,
                                     double *ratio);

/**
 * Attack configuration with defaults: idealized measurement, amplified aux, 1000
 * trials, seed 0. The machine is copied.
 */
enum QampStatus qamp_attack_config_new(const struct QampMachine *machine,
                                       uint32_t levels,
                                       uint64_t source_photons,
                                       double split,
                                       struct QampAttackConfig **config);

/**
 * Frees a configuration. NULL is ignored.
 *
 * # Safety
 * `config` must be NULL or a handle from [`qamp_attack_config_new`] that has not been
 * freed.
 */
void qamp_attack_config_free(struct QampAttackConfig *config);

enum QampStatus qamp_attack_config_set_trials(struct QampAttackConfig *config, uint64_t trials);

enum QampStatus qamp_attack_config_set_seed(struct QampAttackConfig *config, uint64_t seed);

enum QampStatus qamp_attack_config_set_mode(struct QampAttackConfig *config, enum QampMode mode);

enum QampStatus qamp_attack_config_set_aux_source(struct QampAttackConfig *config,
                                                  enum QampAuxSource source);

/**
 * Monte Carlo success rate over targets uniform on the sphere.
 */
enum QampStatus qamp_success_rate(const struct QampAttackConfig *config, struct QampRate *rate);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QAMP_H */
