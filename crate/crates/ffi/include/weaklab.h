#ifndef WEAKLAB_H
#define WEAKLAB_H

/* Generated by cbindgen from src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Values for the `family` argument of [`weaklab_pointer_new`]. Plain
// integers rather than an enum, so that out-of-range input from C is an
// error instead of undefined behaviour.
#define WEAKLAB_FAMILY_COHERENT 0

#define WEAKLAB_FAMILY_SQUEEZED 1

#define WEAKLAB_FAMILY_CAT 2

typedef enum WeaklabStatus {
  WEAKLAB_STATUS_OK = 0,
  WEAKLAB_STATUS_NULL_POINTER = 1,
  WEAKLAB_STATUS_INVALID_PARAMETER = 2,
  WEAKLAB_STATUS_ORTHOGONAL_SELECTION = 3,
  WEAKLAB_STATUS_TRUNCATION_INSUFFICIENT = 4,
  WEAKLAB_STATUS_DERIVATIVE_MISMATCH = 5,
  WEAKLAB_STATUS_DEGENERATE_NOISE = 6,
  WEAKLAB_STATUS_CHI_UNDEFINED = 7,
  WEAKLAB_STATUS_BOUND_UNDEFINED = 8,
  WEAKLAB_STATUS_INTERNAL = 9,
} WeaklabStatus;

// Coupling `g`, width `σ` and number of runs.
typedef struct WeaklabCoupling WeaklabCoupling;

// Initial pointer state.
typedef struct WeaklabPointer WeaklabPointer;

// Pre- and postselected spin states.
typedef struct WeaklabSelection WeaklabSelection;

typedef struct WeaklabComplex {
  double re;
  double im;
} WeaklabComplex;

typedef struct WeaklabMeans {
  double x;
  double x_over_sigma;
  double p;
} WeaklabMeans;

typedef struct WeaklabSnrReport {
  double snr_post;
  double snr_non;
  // NaN when `chi_defined` is false.
  double chi;
  double chi_prime;
  bool chi_defined;
  double p_s;
  double signal_post;
  double signal_non;
  double noise_post;
  double noise_non;
  size_t dim;
} WeaklabSnrReport;

typedef struct WeaklabFisherReport {
  double qfi;
  double fisher_post;
  double p_s;
  size_t dim;
} WeaklabFisherReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the most recent failure on this thread, or NULL.
const char *weaklab_last_error(void);

// Library version as a static NUL-terminated string.
const char *weaklab_version(void);

// # Safety
// `out` must be valid for writes.
enum WeaklabStatus weaklab_selection_new(double theta, double phi, struct WeaklabSelection **out);

// # Safety
// `sel` must be NULL or a handle from [`weaklab_selection_new`] not yet freed.
void weaklab_selection_free(struct WeaklabSelection *sel);

// `family` is one of the `WEAKLAB_FAMILY_*` constants: coherent and cat
// take `modulus` = r, `angle` = φ_c; squeezed vacuum takes `modulus` = η,
// `angle` = δ.
//
// # Safety
// `out` must be valid for writes.
enum WeaklabStatus weaklab_pointer_new(uint32_t family,
                                       double modulus,
                                       double angle,
                                       struct WeaklabPointer **out);

// # Safety
// `ptr` must be NULL or a handle from [`weaklab_pointer_new`] not yet freed.
void weaklab_pointer_free(struct WeaklabPointer *ptr);

// # Safety
// `out` must be valid for writes.
enum WeaklabStatus weaklab_coupling_new(double g,
                                        double sigma,
                                        uint64_t n_runs,
                                        struct WeaklabCoupling **out);

// # Safety
// `cfg` must be NULL or a handle from [`weaklab_coupling_new`] not yet freed.
void weaklab_coupling_free(struct WeaklabCoupling *cfg);

// # Safety
// `sel` must be a live handle and `out` valid for writes.
enum WeaklabStatus weaklab_weak_value(const struct WeaklabSelection *sel,
                                      struct WeaklabComplex *out);

// # Safety
// `sel` must be a live handle and `out` valid for writes.
enum WeaklabStatus weaklab_postselection_probability(const struct WeaklabSelection *sel,
                                                     double *out);

// Closed-form pointer means after postselection.
//
// # Safety
// Handles must be live and `out` valid for writes.
enum WeaklabStatus weaklab_means(const struct WeaklabSelection *sel,
                                 const struct WeaklabPointer *ptr,
                                 const struct WeaklabCoupling *cfg,
                                 struct WeaklabMeans *out);

// Final minus initial pointer means.
//
// # Safety
// Handles must be live and `out` valid for writes.
enum WeaklabStatus weaklab_shift(const struct WeaklabSelection *sel,
                                 const struct WeaklabPointer *ptr,
                                 const struct WeaklabCoupling *cfg,
                                 struct WeaklabMeans *out);

// Both SNRs and χ. An undefined χ is reported through `chi_defined`, not
// as an error.
//
// # Safety
// Handles must be live and `out` valid for writes.
enum WeaklabStatus weaklab_snr_report(const struct WeaklabSelection *sel,
                                      const struct WeaklabPointer *ptr,
                                      const struct WeaklabCoupling *cfg,
                                      struct WeaklabSnrReport *out);

// χ alone; fails with `WEAKLAB_STATUS_CHI_UNDEFINED` when the
// non-postselected signal vanishes.
//
// # Safety
// Handles must be live and `out` valid for writes.
enum WeaklabStatus weaklab_chi(const struct WeaklabSelection *sel,
                               const struct WeaklabPointer *ptr,
                               const struct WeaklabCoupling *cfg,
                               double *out);

// QFI of the postselected pointer and `F_p = P_s·F`. `first_order`
// selects the linearized coupling.
//
// # Safety
// Handles must be live and `out` valid for writes.
enum WeaklabStatus weaklab_fisher_report(const struct WeaklabSelection *sel,
                                         const struct WeaklabPointer *ptr,
                                         const struct WeaklabCoupling *cfg,
                                         bool first_order,
                                         struct WeaklabFisherReport *out);

// `1/(N·F)`.
//
// # Safety
// `out` must be valid for writes.
enum WeaklabStatus weaklab_cramer_rao_bound(double fisher, uint64_t n_runs, double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* WEAKLAB_H */
