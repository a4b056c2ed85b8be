#ifndef ADT_H
#define ADT_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every fallible call.
 */
typedef enum AdtStatus {
  ADT_STATUS_OK = 0,
  ADT_STATUS_NULL_POINTER = 1,
  ADT_STATUS_INVALID_UTF8 = 2,
  ADT_STATUS_DIMENSION = 3,
  ADT_STATUS_SHAPE = 4,
  ADT_STATUS_VALIDATION = 5,
  ADT_STATUS_MISSING_DATA = 6,
  ADT_STATUS_RESOURCE = 7,
  ADT_STATUS_SINGULAR = 8,
  ADT_STATUS_POLE_PROXIMITY = 9,
  ADT_STATUS_PARSE = 10,
  ADT_STATUS_OUT_OF_RANGE = 11,
  ADT_STATUS_PANIC = 12,
} AdtStatus;

/**
 * Green's function flavour: commutator (`Plus`) or anticommutator (`Minus`) residue sum.
 */
typedef enum AdtKind {
  ADT_KIND_PLUS = 0,
  ADT_KIND_MINUS = 1,
} AdtKind;

/**
 * Pole/residue representation of a two-time correlator.
 */
typedef struct AdtGreens AdtGreens;

/**
 * Sparse Pauli-word operator.
 */
typedef struct AdtOperator AdtOperator;

/**
 * State given by its expectation table, optionally with a wavefunction.
 */
typedef struct AdtState AdtState;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread; empty after a success.
 *
 * The pointer stays valid until the next call into this library on the same thread.
 */
const char *adt_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *adt_version(void);

/**
 * Releases a string returned by this library.
 *
 * # Safety
 * `s` must be null or a pointer obtained from this library and not yet freed.
 */
void adt_string_free(char *s);

/**
 * Parses an operator expression such as `"0.5*sz:0 + X:1"` on `n_sites` sites.
 *
 * # Safety
 * `src` must be a valid NUL-terminated string and `out` a valid pointer.
 */
enum AdtStatus adt_operator_parse(const char *src, size_t n_sites, struct AdtOperator **out);

/**
 * # Safety
 * `op` must be null or a handle from this library not yet freed.
 */
void adt_operator_free(struct AdtOperator *op);

/**
 * # Safety
 * `op` and `out` must be valid pointers.
 */
enum AdtStatus adt_operator_n_terms(const struct AdtOperator *op, size_t *out);

/**
 * Text form of the operator; free with [`adt_string_free`].
 *
 * # Safety
 * `op` and `out` must be valid pointers.
 */
enum AdtStatus adt_operator_to_string(const struct AdtOperator *op, char **out);

/**
 * `[a, b]` as a new handle.
 *
 * # Safety
 * All pointers must be valid.
 */
enum AdtStatus adt_operator_commutator(const struct AdtOperator *a,
                                       const struct AdtOperator *b,
                                       struct AdtOperator **out);

/**
 * Two-spin bond `J^z s^z_a s^z_b + h^z Σ s^z + h^x Σ s^x`.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum AdtStatus adt_model_qsm_bond(double jz, double hz, double hx, struct AdtOperator **out);

/**
 * `sin θ |↑↓> + cos θ |↓↑>` with its full expectation table.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum AdtStatus adt_state_two_spin(double theta, struct AdtState **out);

/**
 * Pure state from `len` complex amplitudes; site 0 is the most significant index bit.
 *
 * # Safety
 * `re` and `im` must each point to `len` readable doubles; `out` must be valid.
 */
enum AdtStatus adt_state_from_amplitudes(const double *re,
                                         const double *im,
                                         size_t len,
                                         struct AdtState **out);

/**
 * # Safety
 * `s` must be null or a handle from this library not yet freed.
 */
void adt_state_free(struct AdtState *s);

/**
 * `<op>` in the state.
 *
 * # Safety
 * All pointers must be valid.
 */
enum AdtStatus adt_state_expect(const struct AdtState *s,
                                const struct AdtOperator *op,
                                double *out_re,
                                double *out_im);

/**
 * `G_kind[o_i; o_f]` from the equations of motion on the Krylov closure of `o_i`.
 *
 * # Safety
 * All pointers must be valid.
 */
enum AdtStatus adt_greens_sdeom(const struct AdtOperator *o_i,
                                const struct AdtOperator *o_f,
                                const struct AdtOperator *h,
                                const struct AdtState *s,
                                enum AdtKind kind,
                                struct AdtGreens **out);

/**
 * `G_kind[o_i; o_f]` from the exact eigenbasis sum; the state needs a wavefunction that
 * is an eigenvector of `h`.
 *
 * # Safety
 * All pointers must be valid.
 */
enum AdtStatus adt_greens_lehmann(const struct AdtOperator *o_i,
                                  const struct AdtOperator *o_f,
                                  const struct AdtOperator *h,
                                  const struct AdtState *s,
                                  enum AdtKind kind,
                                  struct AdtGreens **out);

/**
 * # Safety
 * `g` must be null or a handle from this library not yet freed.
 */
void adt_greens_free(struct AdtGreens *g);

/**
 * # Safety
 * `g` and `out` must be valid pointers.
 */
enum AdtStatus adt_greens_n_poles(const struct AdtGreens *g, size_t *out);

/**
 * Pole `index` in ascending position order; `is_static` is 1 for a zero-frequency pole.
 *
 * # Safety
 * All pointers must be valid.
 */
enum AdtStatus adt_greens_pole(const struct AdtGreens *g,
                               size_t index,
                               double *position,
                               double *residue_re,
                               double *residue_im,
                               int *is_static);

/**
 * `G(ω) = Σ r / (ω − p)`.
 *
 * # Safety
 * All pointers must be valid.
 */
enum AdtStatus adt_greens_evaluate(const struct AdtGreens *g,
                                   double omega_re,
                                   double omega_im,
                                   double *out_re,
                                   double *out_im);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ADT_H */
