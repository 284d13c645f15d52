#ifndef QUDIT_WIGNER_H
#define QUDIT_WIGNER_H

/* Generated with cbindgen:0.29.4 */

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stddef.h>
#include <stdint.h>

/**
 * Result codes. `QW_OK` is zero; everything else is a failure.
 */
typedef enum QwStatus {
  QW_OK = 0,
  QW_ERR_NULL_POINTER = 1,
  QW_ERR_UNSUPPORTED_DIMENSION = 2,
  QW_ERR_INVALID_ARGUMENT = 3,
  QW_ERR_SHAPE = 4,
  QW_ERR_NOT_HERMITIAN = 5,
  QW_ERR_NOT_UNITARY = 6,
  QW_ERR_NOT_A_STATE = 7,
  QW_ERR_NOT_REAL = 8,
  QW_ERR_BUDGET_EXCEEDED = 9,
  QW_ERR_BUFFER_TOO_SMALL = 10,
  QW_ERR_INTERNAL = 11,
} QwStatus;

/**
 * Routes for [`qw_linear_entropy`].
 */
typedef enum QwRoute {
  QW_ROUTE_EXACT = 0,
  QW_ROUTE_KERNEL = 1,
  QW_ROUTE_PATH_INTEGRAL = 2,
  QW_ROUTE_CLOSED_FORM = 3,
} QwRoute;

/**
 * Classes reported by [`qw_classify_commensurability`].
 */
typedef enum QwCommensurability {
  QW_STRICT = 0,
  QW_WEAK_ODD = 1,
  QW_INCOMMENSURATE = 2,
} QwCommensurability;

/**
 * Opaque Wigner propagator.
 */
typedef struct QwKernel QwKernel;

/**
 * Opaque Wigner function.
 */
typedef struct QwWigner QwWigner;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version, static and nul-terminated.
 */
const char *qw_version(void);

/**
 * Copies the last error message of this thread into `buf` (truncated,
 * always nul-terminated when `len > 0`). Returns the full message length
 * excluding the terminator, or 0 if there is none.
 *
 * # Safety
 * `buf` must be null or valid for `len` writes.
 */
size_t qw_last_error_message(char *buf, size_t len);

/**
 * Wigner function of a density matrix on `n_qudits` qudits of dimension `d`.
 * `rho` holds `2·d^{2n}` doubles.
 *
 * # Safety
 * `rho` must be valid for the stated length; `out` must be valid for one write.
 */
enum QwStatus qw_wigner_from_density(uint32_t d,
                                     size_t n_qudits,
                                     const double *rho,
                                     struct QwWigner **out);

/**
 * Wigner function of a product state, e.g. `"p0,x2"` or `"mixed"`.
 *
 * # Safety
 * `spec` must be a nul-terminated string; `out` must be valid for one write.
 */
enum QwStatus qw_wigner_from_state(uint32_t d, const char *spec, struct QwWigner **out);

/**
 * Number of lattice points, `d^{2n}`; 0 for null.
 *
 * # Safety
 * `w` must be null or a live handle.
 */
size_t qw_wigner_len(const struct QwWigner *w);

/**
 * Copies the values, row-major in `(m1, n1, m2, n2, …)`.
 *
 * # Safety
 * `w` must be a live handle; `out` must be valid for `len` writes.
 */
enum QwStatus qw_wigner_values(const struct QwWigner *w, double *out, size_t len);

/**
 * Sum of the absolute values of the negative entries.
 *
 * # Safety
 * `w` must be a live handle; `out` must be valid for one write.
 */
enum QwStatus qw_wigner_negativity(const struct QwWigner *w, double *out);

/**
 * # Safety
 * `w` must be null or a handle not yet freed.
 */
void qw_wigner_free(struct QwWigner *w);

/**
 * Wigner propagator of a unitary (`2·d^{2n}` doubles).
 *
 * # Safety
 * `u` must be valid for the stated length; `out` must be valid for one write.
 */
enum QwStatus qw_kernel_from_unitary(uint32_t d,
                                     size_t n_qudits,
                                     const double *u,
                                     struct QwKernel **out);

/**
 * Wigner propagator of `e^{−iχt H}` for a Hermitian `H` (`2·d^{2n}` doubles).
 *
 * # Safety
 * `h` must be valid for the stated length; `out` must be valid for one write.
 */
enum QwStatus qw_kernel_from_hamiltonian(uint32_t d,
                                         size_t n_qudits,
                                         const double *h,
                                         double chi_t,
                                         struct QwKernel **out);

/**
 * Wigner propagator of a named Hamiltonian (`diag012`, `xx`, `xplusp`).
 *
 * # Safety
 * `preset` must be a nul-terminated string; `out` must be valid for one write.
 */
enum QwStatus qw_kernel_from_preset(uint32_t d,
                                    const char *preset,
                                    double chi_t,
                                    struct QwKernel **out);

/**
 * Propagator from `steps` composed short-time kernels of a named Hamiltonian.
 *
 * # Safety
 * `preset` must be a nul-terminated string; `out` must be valid for one write.
 */
enum QwStatus qw_path_integral_kernel(uint32_t d,
                                      const char *preset,
                                      double chi_t,
                                      size_t steps,
                                      struct QwKernel **out);

/**
 * Lattice size `L = d^{2n}`; the kernel has `L²` entries. 0 for null.
 *
 * # Safety
 * `g` must be null or a live handle.
 */
size_t qw_kernel_size(const struct QwKernel *g);

/**
 * Copies the entries, `entries[final·L + initial]`.
 *
 * # Safety
 * `g` must be a live handle; `out` must be valid for `len` writes.
 */
enum QwStatus qw_kernel_entries(const struct QwKernel *g, double *out, size_t len);

/**
 * `W′ = G W` as a new handle.
 *
 * # Safety
 * `g` and `w` must be live handles; `out` must be valid for one write.
 */
enum QwStatus qw_kernel_apply(const struct QwKernel *g,
                              const struct QwWigner *w,
                              struct QwWigner **out);

/**
 * Largest `|Σ_μ′ G(μ′, μ) − 1|` over columns.
 *
 * # Safety
 * `g` must be a live handle; `out` must be valid for one write.
 */
enum QwStatus qw_kernel_max_column_sum_error(const struct QwKernel *g, double *out);

/**
 * # Safety
 * `g` must be null or a handle not yet freed.
 */
void qw_kernel_free(struct QwKernel *g);

/**
 * Linear entropy of one qutrit of `e^{−iχt x̂⊗x̂}|p,0⟩|p,0⟩`. `steps` is
 * used only by the path-integral route.
 *
 * # Safety
 * `out` must be valid for one write.
 */
enum QwStatus qw_linear_entropy(double chi_t, enum QwRoute route, size_t steps, double *out);

/**
 * Classifies `H = Σ_q (a_q x̂_q + b_q p̂_q)` at step `tau`. When the class is
 * `QW_STRICT` and `shifts` is non-null, writes `(Δm_q, Δn_q)` pairs into it
 * (`2·n_qudits` values).
 *
 * # Safety
 * `a` and `b` must be valid for `n_qudits` reads, `class_out` for one write,
 * `shifts` null or valid for `2·n_qudits` writes.
 */
enum QwStatus qw_classify_commensurability(uint32_t d,
                                           const double *a,
                                           const double *b,
                                           size_t n_qudits,
                                           double tau,
                                           enum QwCommensurability *class_out,
                                           int64_t *shifts);

/**
 * `1` if `d` is a supported odd prime, else `0`.
 */
int qw_is_supported_dimension(uint32_t d);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QUDIT_WIGNER_H */
