#ifndef MCFORGE_H
#define MCFORGE_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes shared by every function of the library.
 */
typedef enum McfStatus {
  MCF_STATUS_OK = 0,
  /**
   * A required pointer was null or a string was not UTF-8.
   */
  MCF_STATUS_INVALID_ARGUMENT = 1,
  MCF_STATUS_VALIDATION = 2,
  /**
   * A snippet names a class the ontology does not define.
   */
  MCF_STATUS_ANNOTATION = 3,
  MCF_STATUS_SNIPPET_NOT_FOUND = 4,
  MCF_STATUS_NOT_ENCODED = 5,
  MCF_STATUS_EMPTY_SESSION = 6,
  MCF_STATUS_UNKNOWN_FORMAT = 7,
  MCF_STATUS_CONFIGURATION = 8,
  MCF_STATUS_SUBCLASS_CYCLE = 9,
  /**
   * The ontology or input document could not be parsed.
   */
  MCF_STATUS_PARSE = 10,
  MCF_STATUS_OFFLINE_CACHE_MISS = 11,
  MCF_STATUS_FETCH = 12,
  MCF_STATUS_IO = 13,
  MCF_STATUS_SERIALIZATION = 14,
  MCF_STATUS_PANIC = 99,
} McfStatus;

/**
 * Opaque report session.
 */
typedef struct McfSession McfSession;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Opens a session on the ontology at `ontology` (URL or path).
 *
 * `base_iri` and `cache_dir` may be null. On success `*out` receives a new
 * session.
 *
 * # Safety
 * String arguments must be null or NUL-terminated; `out` must be writable.
 */
enum McfStatus mcf_session_open(const char *ontology,
                                const char *base_iri,
                                const char *cache_dir,
                                bool offline,
                                struct McfSession **out);

/**
 * Opens a session from a snippet manifest (JSON) and loads its snippets.
 *
 * # Safety
 * As for [`mcf_session_open`].
 */
enum McfStatus mcf_session_open_manifest(const char *path,
                                         const char *cache_dir,
                                         bool offline,
                                         struct McfSession **out);

/**
 * Adds a snippet annotated with `class_iri` (absolute or prefixed IRI). When
 * `out_id` is not null it receives the new snippet id.
 *
 * # Safety
 * `session` must come from this library; strings must be NUL-terminated.
 */
enum McfStatus mcf_session_add_snippet(struct McfSession *session,
                                       const char *text,
                                       const char *class_iri,
                                       char **out_id);

/**
 * # Safety
 * `session` must come from this library; `id` must be NUL-terminated.
 */
enum McfStatus mcf_session_remove_snippet(struct McfSession *session, const char *id);

/**
 * Number of snippets, or 0 for a null session.
 *
 * # Safety
 * `session` must be null or come from this library.
 */
size_t mcf_session_snippet_count(const struct McfSession *session);

/**
 * Links the session's snippets. `out_pairs` and `out_orphans` may be null.
 *
 * # Safety
 * `session` must come from this library; out-pointers must be null or writable.
 */
enum McfStatus mcf_session_encode(struct McfSession *session,
                                  size_t *out_pairs,
                                  size_t *out_orphans);

/**
 * Serializes the last encode result. `format` is one of `turtle`, `rdf`,
 * `owl`, `json`.
 *
 * # Safety
 * `session` must come from this library; `out` must be writable.
 */
enum McfStatus mcf_session_export(struct McfSession *session, const char *format, char **out);

/**
 * Re-serializes a Turtle document in another export format.
 *
 * # Safety
 * Strings must be NUL-terminated; `out` must be writable.
 */
enum McfStatus mcf_convert(const char *turtle, const char *format, char **out);

/**
 * Message for the last failure on this thread, or null. Valid until the
 * next call into the library on this thread.
 */
const char *mcf_last_error_message(void);

/**
 * # Safety
 * `s` must be null or a string returned by this library, freed only once.
 */
void mcf_string_free(char *s);

/**
 * # Safety
 * `session` must be null or come from this library, freed only once.
 */
void mcf_session_free(struct McfSession *session);

/**
 * Library version as a static string.
 */
const char *mcf_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MCFORGE_H */
