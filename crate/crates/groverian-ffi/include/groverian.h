#ifndef GROVERIAN_H
#define GROVERIAN_H

/* Generated by cbindgen from groverian-ffi; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of every FFI call.
 */
typedef enum GroverianStatus {
  /**
   * Success; out-parameters are valid.
   */
  GROVERIAN_STATUS_OK = 0,
  /**
   * A required pointer argument was null.
   */
  GROVERIAN_STATUS_NULL_POINTER = 1,
  /**
   * Malformed input: bad spec string, bad amplitudes, out-of-range index.
   */
  GROVERIAN_STATUS_INVALID_ARGUMENT = 2,
  /**
   * Structurally valid input outside the supported domain (complex
   * amplitudes for the closed form, ungated conjectural qubit counts).
   */
  GROVERIAN_STATUS_UNSUPPORTED = 3,
  /**
   * The underlying I/O operation failed (state file could not be read).
   */
  GROVERIAN_STATUS_IO_ERROR = 4,
  /**
   * An internal invariant failed; report this as a bug.
   */
  GROVERIAN_STATUS_INTERNAL = 5,
} GroverianStatus;

/**
 * Opaque n-qubit state handle.
 */
typedef struct GroverianState GroverianState;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Copies the calling thread's most recent error message into `buf` as a
 * NUL-terminated string (truncated to `len - 1` bytes) and returns the full
 * message length in bytes. A null `buf` or zero `len` just queries the
 * length. The message describes the most recent failing call.
 *
 * # Safety
 * `buf`, when non-null, must point to at least `len` writable bytes.
 */
uintptr_t groverian_last_error(char *buf, uintptr_t len);

/**
 * Creates a state from a spec string: `"ghz:N"`, `"w:N"`, `"uniform:N"`,
 * `"basis:N:I"`, or a path to a state JSON file. On `Ok`, `*out` owns the
 * new handle and must be released with [`groverian_state_free`].
 *
 * # Safety
 * `spec` must be a valid NUL-terminated string and `out` a valid pointer.
 */
enum GroverianStatus groverian_state_load(const char *spec, struct GroverianState **out);

/**
 * Creates an n-qubit state from amplitude arrays of length `len = 2^n`,
 * index 0 being |0...0> with the first qubit as the most significant bit.
 * `ims` may be null for a real state. The vector must already be normalized
 * to within 1e-6; it is renormalized exactly on construction.
 *
 * # Safety
 * `res` (and `ims`, when non-null) must point to `len` readable doubles;
 * `out` must be a valid pointer.
 */
enum GroverianStatus groverian_state_from_amplitudes(uintptr_t n,
                                                     const double *res,
                                                     const double *ims,
                                                     uintptr_t len,
                                                     struct GroverianState **out);

/**
 * Releases a state handle. Null is a no-op.
 *
 * # Safety
 * `state`, when non-null, must be a handle returned by a constructor of
 * this library that has not already been freed.
 */
void groverian_state_free(struct GroverianState *state);

/**
 * Returns the qubit count of a state, or -1 for a null handle.
 *
 * # Safety
 * `state`, when non-null, must be a live handle from this library.
 */
int32_t groverian_state_qubits(const struct GroverianState *state);

/**
 * Maximizes the squared product-state overlap numerically. `starts == 0`
 * selects the default multistart count. On `Ok` writes the maximum to
 * `*out_pmax` and, when `out_measure` is non-null, the entanglement
 * measure sqrt(1 - pmax) to `*out_measure`. Deterministic given `seed`.
 *
 * # Safety
 * `state` must be a live handle; `out_pmax` must be valid; `out_measure`
 * may be null.
 */
enum GroverianStatus groverian_pmax_numeric(const struct GroverianState *state,
                                            uint64_t seed,
                                            uintptr_t starts,
                                            double *out_pmax,
                                            double *out_measure);

/**
 * Evaluates the closed-form overlap expression. Validated qubit counts are
 * 2 (proved), 3 and 5 (transcribed); any other count requires
 * `conjectural = true` and uses the generated extension. Real amplitudes
 * only; complex input yields `Unsupported`.
 *
 * # Safety
 * `state` must be a live handle and `out_pmax` a valid pointer.
 */
enum GroverianStatus groverian_pmax_closed(const struct GroverianState *state,
                                           bool conjectural,
                                           double *out_pmax);

/**
 * Entanglement measure sqrt(1 - pmax) for a squared overlap in [0, 1]
 * (values within 1e-12 above 1 are clamped).
 *
 * # Safety
 * `out_measure` must be a valid pointer.
 */
enum GroverianStatus groverian_measure(double pmax, double *out_measure);

/**
 * Runs Grover search from `state` for the marked basis index and writes
 * the final success probability. `iterations < 0` selects the optimal
 * count for the state's dimension; explicit counts are capped by the
 * iteration guard.
 *
 * # Safety
 * `state` must be a live handle and `out_success` a valid pointer.
 */
enum GroverianStatus groverian_grover_success(const struct GroverianState *state,
                                              uintptr_t marked,
                                              int64_t iterations,
                                              double *out_success);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* GROVERIAN_H */
