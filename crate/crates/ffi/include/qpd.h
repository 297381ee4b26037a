#ifndef QPD_H
#define QPD_H

#include <stddef.h>
#include <stdint.h>

typedef enum QpdStatus {
  QPD_STATUS_OK = 0,
  QPD_STATUS_NULL_POINTER = 1,
  QPD_STATUS_INVALID_ARGUMENT = 2,
  QPD_STATUS_NOT_UNITARY = 3,
  QPD_STATUS_DIMENSION_MISMATCH = 4,
  QPD_STATUS_INDISTINGUISHABLE = 5,
  QPD_STATUS_CONFIG_ERROR = 6,
  QPD_STATUS_IO_ERROR = 7,
  QPD_STATUS_BUFFER_TOO_SMALL = 8,
  QPD_STATUS_INTERNAL = 9,
} QpdStatus;

typedef enum QpdConfidenceModel {
  QPD_CONFIDENCE_MODEL_PER_HYPOTHESIS = 0,
  QPD_CONFIDENCE_MODEL_HALF_CREDIT = 1,
} QpdConfidenceModel;

// A square complex matrix.
typedef struct QpdOperator QpdOperator;

// A discrimination plan for two unitaries.
typedef struct QpdPlan QpdPlan;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failure on this thread, or null. Valid until the
// next failing call on the same thread.
const char *qpd_last_error(void);

// Library version as a static string.
const char *qpd_version(void);

// One of `i`, `x`, `y`, `z`, `h`.
//
// # Safety
// `name` must be a nul-terminated string and `out` writable.
enum QpdStatus qpd_operator_named(const char *name, struct QpdOperator **out);

// Builds a `dim × dim` operator from row-major real and imaginary parts.
//
// # Safety
// `re` and `im` must each point to `dim * dim` doubles.
enum QpdStatus qpd_operator_from_parts(size_t dim,
                                       const double *re,
                                       const double *im,
                                       struct QpdOperator **out);

// # Safety
// `op` must come from this library (or be null) and not be used again.
void qpd_operator_free(struct QpdOperator *op);

// # Safety
// `op` must be a live handle and `out` writable.
enum QpdStatus qpd_operator_dim(const struct QpdOperator *op, size_t *out);

// Writes the eigenphases of a unitary, ascending in `(-π, π]`.
// `out_len` always receives the dimension; if `capacity` is smaller the
// call returns `BufferTooSmall` and writes nothing else.
//
// # Safety
// `phases` must have room for `capacity` doubles.
enum QpdStatus qpd_eigenphases(const struct QpdOperator *op,
                               double *phases,
                               size_t capacity,
                               size_t *out_len);

// Plans perfect discrimination of `a` and `b` from parallel uses.
//
// # Safety
// `a`, `b` must be live handles and `out` writable.
enum QpdStatus qpd_plan_new(const struct QpdOperator *a,
                            const struct QpdOperator *b,
                            struct QpdPlan **out);

// # Safety
// `plan` must be a live handle and `out` writable.
enum QpdStatus qpd_plan_uses(const struct QpdPlan *plan, size_t *out);

// `|⟨probe|(A†B)^{⊗N}|probe⟩|` for the planned probe.
//
// # Safety
// `plan` must be a live handle and `out` writable.
enum QpdStatus qpd_plan_overlap(const struct QpdPlan *plan, double *out);

// # Safety
// `plan` must come from this library (or be null) and not be used again.
void qpd_plan_free(struct QpdPlan *plan);

// Angle between the Bloch axes of two traceless Hermitian qubit unitaries.
//
// # Safety
// `a`, `b` must be live handles and `out` writable.
enum QpdStatus qpd_bloch_angle(const struct QpdOperator *a,
                               const struct QpdOperator *b,
                               double *out);

// Tilt of `T̂` that makes the W(n) scheme error-free.
//
// # Safety
// `out` must be writable.
enum QpdStatus qpd_critical_angle(size_t n, double *out);

// # Safety
// `out` must be writable.
enum QpdStatus qpd_predicted_confidence(double m, enum QpdConfidenceModel model, double *out);

// Coincidence probability behind a 50/50 beamsplitter at visibility `m`.
//
// # Safety
// `out` must be writable.
enum QpdStatus qpd_hom_coincidence(double m, double *out);

// Runs a JSON experiment config and returns the JSON report, to be
// released with [`qpd_string_free`]. `threads == 0` uses all cores.
//
// # Safety
// `config_json` must be a nul-terminated string and `out` writable.
enum QpdStatus qpd_run_config_json(const char *config_json, size_t threads, char **out);

// # Safety
// `s` must come from this library (or be null) and not be used again.
void qpd_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QPD_H */
