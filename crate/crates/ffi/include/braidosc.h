#ifndef BRAIDOSC_H
#define BRAIDOSC_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

#define BRAIDOSC_OK 0

// A required pointer argument was null.
#define BRAIDOSC_ERR_NULL 1

// Invalid parameters or an unsupported combination of options.
#define BRAIDOSC_ERR_INVALID 2

// A numeric solve or division failed.
#define BRAIDOSC_ERR_NUMERIC 3

// A mathematical invariant failed.
#define BRAIDOSC_ERR_INVARIANT 4

// Generator index or buffer length out of range.
#define BRAIDOSC_ERR_RANGE 5

// The operation needs the numeric backend.
#define BRAIDOSC_ERR_BACKEND 6

// A Rust panic was caught at the boundary.
#define BRAIDOSC_ERR_PANIC 7

// I/O or serialization failure.
#define BRAIDOSC_ERR_IO 8

#define BRAIDOSC_BACKEND_NUMERIC 0

#define BRAIDOSC_BACKEND_EXACT 1

#define BRAIDOSC_ROUTE_DIRECT 0

#define BRAIDOSC_ROUTE_REWRITE 1

#define BRAIDOSC_ROUTE_CLOSED_FORM 2

// Opaque family of generator matrices.
typedef struct BraidoscMatrices BraidoscMatrices;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failed call on this thread; empty after a success.
// The pointer stays valid until the next call on the same thread.
const char *braidosc_last_error(void);

// Library version as a static string.
const char *braidosc_version(void);

// Releases a string returned by this library. Null is ignored.
//
// # Safety
// `s` must come from this library and not have been freed.
void braidosc_string_free(char *s);

// Weight-space dimension per sector and lowest-weight dimension at level `total`.
//
// # Safety
// `weight_dim` and `lowest_dim` must be valid for writes.
int32_t braidosc_counts(size_t n, uint32_t total, uint64_t *weight_dim, uint64_t *lowest_dim);

// Builds `sigma_1 .. sigma_{n-1}` at level `total` for slot labels
// `(gammas[i], cs[i])`, `i < n`. `q` is ignored by the exact backend.
// `inverse` and `raw` are booleans (nonzero is true).
//
// # Safety
// `gammas` and `cs` must point to `n` doubles; `out` must be valid for writes.
int32_t braidosc_matrices_build(size_t n,
                                uint32_t total,
                                const double *gammas,
                                const double *cs,
                                double q,
                                uint32_t backend,
                                uint32_t route,
                                int32_t inverse,
                                int32_t raw,
                                struct BraidoscMatrices **out);

// Releases a handle. Null is ignored.
//
// # Safety
// `m` must come from `braidosc_matrices_build` and not have been freed.
void braidosc_matrices_free(struct BraidoscMatrices *m);

// Basis dimension and number of generators.
//
// # Safety
// `m` must be a live handle; `dim` and `generators` must be valid for writes.
int32_t braidosc_matrices_shape(const struct BraidoscMatrices *m, size_t *dim, size_t *generators);

// Copies the row-major entries of generator `index` (1-based) into `buf`,
// which holds `len >= dim * dim` doubles. Numeric backend only.
//
// # Safety
// `m` must be a live handle; `buf` must be valid for `len` writes.
int32_t braidosc_matrices_entries(const struct BraidoscMatrices *m,
                                  size_t index,
                                  double *buf,
                                  size_t len);

// Canonical JSON document of the family. Free with `braidosc_string_free`.
//
// # Safety
// `m` must be a live handle; `out` must be valid for writes.
int32_t braidosc_matrices_to_json(const struct BraidoscMatrices *m, char **out);

// Runs a verification suite (`"algebra"`, `"spaces"`, `"braid"` or
// `"all"`). `passed` receives 1 or 0; `report`, if non-null, receives the
// JSON report. A failing suite is not an error.
//
// # Safety
// `suite` must be a nul-terminated string; `passed` must be valid for
// writes; `report` must be null or valid for writes.
int32_t braidosc_verify(const char *suite, uint64_t seed, int32_t *passed, char **report);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* BRAIDOSC_H */
