#ifndef HILBX_H
#define HILBX_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes.
 */
typedef enum HilbxStatus {
  HILBX_STATUS_OK = 0,
  HILBX_STATUS_NULL_POINTER = 1,
  HILBX_STATUS_INVALID_ARGUMENT = 2,
  HILBX_STATUS_FORMAT = 3,
  HILBX_STATUS_INTEGRITY = 4,
  HILBX_STATUS_DOMAIN = 5,
  HILBX_STATUS_PANIC = 6,
} HilbxStatus;

/**
 * Opaque session key.
 */
typedef struct HilbxSessionKey HilbxSessionKey;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Last error message on this thread, or null. Valid until the next call.
 */
const char *hilbx_last_error_message(void);

/**
 * Generates a session key with block size `m`. `n = 0` picks the default
 * order. A null `seed` draws from OS entropy.
 *
 * # Safety
 * `seed` is null or points to a `uint64_t`; `out` is a valid pointer.
 */
enum HilbxStatus hilbx_key_generate(size_t m,
                                    size_t n,
                                    const uint64_t *seed,
                                    struct HilbxSessionKey **out);

/**
 * Parses a key file.
 *
 * # Safety
 * `text` is a NUL-terminated string; `out` is a valid pointer.
 */
enum HilbxStatus hilbx_key_from_text(const char *text, struct HilbxSessionKey **out);

/**
 * Serializes a key file. Free the result with [`hilbx_string_free`].
 *
 * # Safety
 * `key` comes from this library; `out` is a valid pointer.
 */
enum HilbxStatus hilbx_key_to_text(const struct HilbxSessionKey *key, char **out);

/**
 * Block size `m` of the key, or 0 for null.
 *
 * # Safety
 * `key` is null or comes from this library.
 */
size_t hilbx_key_block_size(const struct HilbxSessionKey *key);

/**
 * # Safety
 * `key` is null or comes from this library and was not already freed.
 */
void hilbx_key_free(struct HilbxSessionKey *key);

/**
 * CBC-encrypts `len` bytes into ciphertext-file text.
 *
 * # Safety
 * `data` points to `len` readable bytes (may be null when `len` is 0);
 * `out` is a valid pointer.
 */
enum HilbxStatus hilbx_encrypt(const struct HilbxSessionKey *key,
                               const uint8_t *data,
                               size_t len,
                               char **out);

/**
 * Decrypts ciphertext-file text. Free the result with [`hilbx_bytes_free`]
 * passing the same length.
 *
 * # Safety
 * `text` is a NUL-terminated string; `out` and `out_len` are valid pointers.
 */
enum HilbxStatus hilbx_decrypt(const struct HilbxSessionKey *key,
                               const char *text,
                               uint8_t **out,
                               size_t *out_len);

/**
 * # Safety
 * `s` is null or a string returned by this library.
 */
void hilbx_string_free(char *s);

/**
 * # Safety
 * `p`/`len` are null/any or exactly a buffer returned by [`hilbx_decrypt`].
 */
void hilbx_bytes_free(uint8_t *p, size_t len);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HILBX_H */
