#ifndef ITSEC_H
#define ITSEC_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stddef.h>
#include <stdint.h>

// Status codes. The first four match the command-line exit codes.
typedef enum ItsecStatus {
  ITSEC_STATUS_OK = 0,
  // An internal consistency check failed; this is a bug.
  ITSEC_STATUS_PROPERTY_VIOLATION = 1,
  // Malformed input or failed validation.
  ITSEC_STATUS_VALIDATION = 2,
  // An enumeration cap was exceeded.
  ITSEC_STATUS_CAP_EXCEEDED = 3,
  ITSEC_STATUS_NULL_POINTER = 4,
  ITSEC_STATUS_INVALID_UTF8 = 5,
  ITSEC_STATUS_PANIC = 6,
} ItsecStatus;

// Opaque channel handle.
typedef struct ItsecChannel ItsecChannel;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Parse a channel or cryptosystem JSON document. A cryptosystem is
// replaced by its induced channel.
//
// # Safety
// `json` must be a NUL-terminated string and `out` a valid pointer.
enum ItsecStatus itsec_channel_from_json(const char *json, struct ItsecChannel **out);

// # Safety
// `channel` must come from [`itsec_channel_from_json`] and not be freed
// twice. NULL is ignored.
void itsec_channel_free(struct ItsecChannel *channel);

// Number of messages, or 0 for NULL.
//
// # Safety
// `channel` must be NULL or a live handle.
size_t itsec_channel_messages(const struct ItsecChannel *channel);

// Number of cryptograms, or 0 for NULL.
//
// # Safety
// `channel` must be NULL or a live handle.
size_t itsec_channel_cryptograms(const struct ItsecChannel *channel);

// The IND value as a `"p/q"` string.
//
// # Safety
// `channel` must be a live handle and `out` a valid pointer.
enum ItsecStatus itsec_eps_ind(const struct ItsecChannel *channel, char **out);

// Full notion report as JSON.
//
// # Safety
// `channel` must be a live handle and `out` a valid pointer.
enum ItsecStatus itsec_analyze(const struct ItsecChannel *channel,
                               uint32_t grid,
                               size_t ss_cap,
                               char **out);

// A cipher realizing a doubly stochastic channel, as a cryptosystem document.
//
// # Safety
// `channel` must be a live handle and `out` a valid pointer.
enum ItsecStatus itsec_synthesize(const struct ItsecChannel *channel, char **out);

// Report for the separating example. `delta` may be NULL for `1/n`.
//
// # Safety
// `delta` must be NULL or a NUL-terminated string; `out` a valid pointer.
enum ItsecStatus itsec_gap_report(size_t n,
                                  const char *delta,
                                  uint32_t grid,
                                  size_t ss_cap,
                                  char **out);

// Both sides of the binary dependence identity for the joint `(a, b; c, d)`.
//
// # Safety
// All four inputs must be NUL-terminated strings; `out` a valid pointer.
enum ItsecStatus itsec_lemma_check(const char *a,
                                   const char *b,
                                   const char *c,
                                   const char *d,
                                   char **out);

// # Safety
// `s` must be NULL or a string returned by this library, freed once.
void itsec_string_free(char *s);

// Message for the last failure on this thread, or NULL. The pointer stays
// valid until the next failing call on the same thread.
const char *itsec_last_error_message(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ITSEC_H */
