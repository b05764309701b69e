#ifndef ARDIAC_H
#define ARDIAC_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum ArdiacStatus {
  ARDIAC_STATUS_OK = 0,
  ARDIAC_STATUS_NULL_ARG = 1,
  ARDIAC_STATUS_INVALID_UTF8 = 2,
  ARDIAC_STATUS_PARSE_ERROR = 3,
  ARDIAC_STATUS_EMPTY_GLOSS = 4,
  ARDIAC_STATUS_INTERNAL = 5,
} ArdiacStatus;

typedef enum ArdiacProfile {
  ARDIAC_PROFILE_LEMMA = 0,
  ARDIAC_PROFILE_SURFACE = 1,
} ArdiacProfile;

/**
 * Opaque Freeman class table handle.
 */
typedef struct ArdiacFreeman ArdiacFreeman;

/**
 * Opaque normalizer handle.
 */
typedef struct ArdiacNormalizer ArdiacNormalizer;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or NULL. Valid until the
 * next call into the library from the same thread.
 */
const char *ardiac_last_error(void);

/**
 * Release a string returned by this library. NULL is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed already.
 */
void ardiac_string_free(char *s);

/**
 * Arabic script to HSB.
 *
 * # Safety
 * `arabic` must be a NUL-terminated string; `out` must be writable.
 */
enum ArdiacStatus ardiac_to_hsb(const char *arabic, char **out);

/**
 * HSB to Arabic script.
 *
 * # Safety
 * `hsb` must be a NUL-terminated string; `out` must be writable.
 */
enum ArdiacStatus ardiac_from_hsb(const char *hsb, char **out);

/**
 * Remove all diacritic marks from any text.
 *
 * # Safety
 * `text` must be a NUL-terminated string; `out` must be writable.
 */
enum ArdiacStatus ardiac_strip_diacritics(const char *text, char **out);

/**
 * Validate a word. `out_count` receives the number of violations and
 * `out_report` (if not NULL) one `code<TAB>position<TAB>message` line each.
 *
 * # Safety
 * `word` must be a NUL-terminated string; non-NULL out pointers must be writable.
 */
enum ArdiacStatus ardiac_validate(const char *word,
                                  enum ArdiacProfile profile,
                                  size_t *out_count,
                                  char **out_report);

/**
 * Normalizer with the bundled foreign-letter map. Free with [`ardiac_normalizer_free`].
 */
struct ArdiacNormalizer *ardiac_normalizer_new(void);

/**
 * Normalizer with a custom foreign-letter map (TSV of `U+XXXX<TAB>U+XXXX`).
 *
 * # Safety
 * `tsv` must be a NUL-terminated string; `out` must be writable.
 */
enum ArdiacStatus ardiac_normalizer_from_tsv(const char *tsv, struct ArdiacNormalizer **out);

/**
 * # Safety
 * `h` must come from this library and not have been freed already. NULL is ignored.
 */
void ardiac_normalizer_free(struct ArdiacNormalizer *h);

/**
 * Repair a word. `out_trace` (if not NULL) receives the step trace, e.g. `S3@0,S6@2`.
 *
 * # Safety
 * `h` must be a live handle; `word` a NUL-terminated string; non-NULL out pointers writable.
 */
enum ArdiacStatus ardiac_normalize(const struct ArdiacNormalizer *h,
                                   const char *word,
                                   char **out_word,
                                   char **out_trace);

/**
 * Codepoint edit distance.
 *
 * # Safety
 * Both words must be NUL-terminated strings; `out` must be writable.
 */
enum ArdiacStatus ardiac_edit_distance(const char *prediction, const char *reference, size_t *out);

/**
 * # Safety
 * Both words must be NUL-terminated strings; `out` must be writable.
 */
enum ArdiacStatus ardiac_exact_match(const char *prediction, const char *reference, bool *out);

/**
 * Error class label such as `diac-only` or `letter-sub(j↔γ)`.
 *
 * # Safety
 * Both words must be NUL-terminated strings; `out` must be writable.
 */
enum ArdiacStatus ardiac_classify_error(const char *prediction, const char *reference, char **out);

/**
 * Spelling check of a lemma against its undiacritized input. `out_label`
 * (if not NULL) receives the transformation label.
 *
 * # Safety
 * Both strings must be NUL-terminated; non-NULL out pointers must be writable.
 */
enum ArdiacStatus ardiac_check_integrity(const char *input,
                                         const char *lemma,
                                         bool *out_ok,
                                         char **out_label);

/**
 * Freeman table with the bundled classes. Free with [`ardiac_freeman_free`].
 */
struct ArdiacFreeman *ardiac_freeman_new(void);

/**
 * Freeman table from a class TSV.
 *
 * # Safety
 * `tsv` must be a NUL-terminated string; `out` must be writable.
 */
enum ArdiacStatus ardiac_freeman_from_tsv(const char *tsv, struct ArdiacFreeman **out);

/**
 * # Safety
 * `h` must come from this library and not have been freed already. NULL is ignored.
 */
void ardiac_freeman_free(struct ArdiacFreeman *h);

/**
 * Similarity in [0, 1] between an undiacritized Arabic name and a Latin gloss.
 *
 * # Safety
 * `h` must be a live handle; strings NUL-terminated; `out` writable.
 */
enum ArdiacStatus ardiac_freeman_similarity(const struct ArdiacFreeman *h,
                                            const char *arabic,
                                            const char *gloss,
                                            double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ARDIAC_H */
