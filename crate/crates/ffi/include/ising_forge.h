#ifndef ISING_FORGE_H
#define ISING_FORGE_H

/* Generated by cbindgen from the ising-forge-ffi sources; edits are overwritten. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Outcome of a call.
 */
typedef enum IfStatus {
  IF_STATUS_OK = 0,
  IF_STATUS_NULL_POINTER = 1,
  IF_STATUS_INVALID_ARGUMENT = 2,
  IF_STATUS_SCHEMA = 3,
  IF_STATUS_NUMERIC = 4,
  IF_STATUS_PANIC = 5,
} IfStatus;

/**
 * Path selector for [`if_transmute`].
 */
typedef enum IfPath {
  IF_PATH_FOUR_STATE = 0,
  IF_PATH_THREE_STATE = 1,
} IfPath;

/**
 * Opaque model handle: either a qubit model or a clock-variable Ising model.
 */
typedef struct IfModel IfModel;

typedef struct IfSpinCouplings {
  double j_pm;
  double j_pp;
  double phase;
  double ratio;
} IfSpinCouplings;

typedef struct IfPottsCouplings {
  double j_eff;
  double delta;
  double nnn_flip;
  double triple_term;
} IfPottsCouplings;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *if_version(void);

/**
 * Copy the calling thread's last error message into `buf` (NUL-terminated,
 * truncated to `len`). Returns the full message length without the NUL.
 *
 * # Safety
 * `buf` must be null or valid for `len` bytes.
 */
size_t if_last_error_message(char *buf, size_t len);

/**
 * Parse a model file (qubit or Ising) from JSON text.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be writable.
 */
enum IfStatus if_model_from_json(const char *json, struct IfModel **out);

/**
 * Serialize a model to JSON; release the string with [`if_string_free`].
 *
 * # Safety
 * `model` must be a live handle; `out` must be writable.
 */
enum IfStatus if_model_to_json(const struct IfModel *model, char **out);

/**
 * 2 for a qubit model, otherwise the clock dimension (3 or 4); 0 for null.
 *
 * # Safety
 * `model` must be null or a live handle.
 */
int if_model_site_dim(const struct IfModel *model);

/**
 * # Safety
 * `model` must be null or a handle from this library not yet freed.
 */
void if_model_free(struct IfModel *model);

/**
 * # Safety
 * `s` must be null or a string returned by this library not yet freed.
 */
void if_string_free(char *s);

/**
 * Transmute a qubit model. `lambda` is stored when finite; pass NAN to
 * leave the field strength unset.
 *
 * # Safety
 * `model` must be a live handle; `out` must be writable.
 */
enum IfStatus if_transmute(const struct IfModel *model,
                           enum IfPath path,
                           double phi,
                           double lambda,
                           struct IfModel **out);

/**
 * Leading-order qubit model of an Ising model.
 *
 * # Safety
 * `model` must be a live handle; `out` must be writable.
 */
enum IfStatus if_effective_model(const struct IfModel *model, struct IfModel **out);

/**
 * Lowest `k` eigenvalues, ascending, into `levels[0..k]`.
 *
 * # Safety
 * `model` must be a live handle; `levels` must be valid for `k` doubles.
 */
enum IfStatus if_model_lowest_levels(const struct IfModel *model, size_t k, double *levels);

/**
 * Many-body gap of the solvable Kitaev line on a `grid_n^2` mesh.
 *
 * # Safety
 * `out` must be writable.
 */
enum IfStatus if_kitaev_gap(double jx,
                            double jy,
                            double jz,
                            double lambda,
                            size_t grid_n,
                            double *out);

/**
 * Chern number of the lower bands; `Numeric` when the spectrum is gapless.
 *
 * # Safety
 * `out` must be writable.
 */
enum IfStatus if_kitaev_chern(double jx,
                              double jy,
                              double jz,
                              double lambda,
                              size_t grid_n,
                              int *out);

/**
 * Spin couplings from C6 coefficients (GHz um^6) at separation `r_um`.
 *
 * # Safety
 * `out` must be writable.
 */
enum IfStatus if_rydberg_couplings(double c6_nn,
                                   double c6_tt,
                                   double c6_nt,
                                   double r_um,
                                   struct IfSpinCouplings *out);

/**
 * Second-order couplings of the three-state Potts chain.
 *
 * # Safety
 * `out` must be writable.
 */
enum IfStatus if_potts_effective(double j, double lambda, struct IfPottsCouplings *out);

/**
 * Number of acceptance criteria.
 */
size_t if_selftest_count(void);

/**
 * Run criterion `id` (1-based); `passed` receives 1 or 0.
 *
 * # Safety
 * `passed` must be writable.
 */
enum IfStatus if_selftest_run(size_t id, int *passed);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ISING_FORGE_H */
