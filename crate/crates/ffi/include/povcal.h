/* C ABI for the povcal library. */

#ifndef POVCAL_H
#define POVCAL_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

// Status codes returned by every FFI entry point.
typedef enum PovStatus {
  // Success.
  POV_STATUS_OK = 0,
  // A pointer argument was null.
  POV_STATUS_NULL_POINTER = 1,
  // A string argument was not valid UTF-8.
  POV_STATUS_INVALID_UTF8 = 2,
  // The input was rejected (parse error, unknown name, domain violation).
  POV_STATUS_INVALID_INPUT = 3,
  // The computation could not certify a verdict numerically.
  POV_STATUS_NUMERICAL_FAILURE = 4,
} PovStatus;

// Opaque scenario handle.
typedef struct PovScenario PovScenario;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message describing the most recent failure on this thread. The pointer
// stays valid until the next failing call on the same thread.
const char *pov_last_error_message(void);

// Parse a scenario from JSON text. `tol_scale` multiplies the default
// equality/feasibility tolerances (pass 1.0 for the defaults).
//
// # Safety
// `json` must be a valid NUL-terminated string and `out` a valid pointer.
enum PovStatus pov_scenario_parse(const char *json, double tol_scale, struct PovScenario **out);

// Release a scenario handle. Passing null is a no-op.
//
// # Safety
// `sc` must have come from `pov_scenario_parse` and not be freed twice.
void pov_scenario_free(struct PovScenario *sc);

// Release a string returned by this library.
//
// # Safety
// `s` must have been returned through an out-parameter of this library.
void pov_string_free(char *s);

// Decide lhs ⪯ rhs. On success writes 1 (feasible) or 0 into `out_holds`.
//
// # Safety
// Pointer arguments must be valid; see `pov_scenario_parse`.
enum PovStatus pov_preorder_leq(const struct PovScenario *sc,
                                const char *lhs,
                                const char *rhs,
                                int32_t *out_holds);

// Decide two-sided fuzzy equivalence of two named observables.
//
// # Safety
// Pointer arguments must be valid; see `pov_scenario_parse`.
enum PovStatus pov_fuzzy_equivalent(const struct PovScenario *sc,
                                    const char *lhs,
                                    const char *rhs,
                                    int32_t *out_equivalent);

// Decide whether a named observable is clean (every nonzero atom rank one).
//
// # Safety
// Pointer arguments must be valid; see `pov_scenario_parse`.
enum PovStatus pov_is_clean(const struct PovScenario *sc,
                            const char *observable,
                            int32_t *out_clean);

// Smear a named observable by a named kernel; returns the result as a JSON
// observable (labels + atoms) through `out_json`.
//
// # Safety
// Pointer arguments must be valid; free the string with `pov_string_free`.
enum PovStatus pov_smear(const struct PovScenario *sc,
                         const char *observable,
                         const char *kernel,
                         char **out_json);

// Evaluate a built-in f-divergence (`tv`, `kl`, `hellinger`) between two
// named probability-vector states. Writes the value into `out_value`
// (+infinity when the divergence diverges).
//
// # Safety
// Pointer arguments must be valid; see `pov_scenario_parse`.
enum PovStatus pov_divergence(const struct PovScenario *sc,
                              const char *p,
                              const char *q,
                              const char *generator,
                              double *out_value);

// Run the sufficiency equivalence battery; returns the report as JSON.
//
// # Safety
// Pointer arguments must be valid; free the string with `pov_string_free`.
enum PovStatus pov_equivalence_battery(const struct PovScenario *sc,
                                       const char *xi,
                                       const char *eta,
                                       const char *kernel,
                                       const char *state,
                                       uintptr_t samples,
                                       uint64_t seed,
                                       char **out_json);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* POVCAL_H */
