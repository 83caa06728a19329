#ifndef METAMORPH_H
#define METAMORPH_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum MmStatus {
  MM_STATUS_OK = 0,
  MM_STATUS_NULL_ARGUMENT = 1,
  MM_STATUS_INVALID_UTF8 = 2,
  MM_STATUS_PARSE_ERROR = 3,
  // The description violates the taxonomy or graph rules.
  MM_STATUS_INVALID = 4,
  MM_STATUS_INTERNAL = 5,
} MmStatus;

// Opaque robot description handle.
typedef struct MmMorphology MmMorphology;

// Opaque taxonomy handle.
typedef struct MmTaxonomy MmTaxonomy;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failed call on this thread; empty if none.
// Valid until the next failing call on this thread.
const char *mm_last_error(void);

// The taxonomy bundled with the library. Never null.
struct MmTaxonomy *mm_taxonomy_bundled(void);

// Parses a taxonomy from canonical JSON, or the Turtle subset when
// `turtle` is true. Null on error.
//
// # Safety
// `source` must be a NUL-terminated string.
struct MmTaxonomy *mm_taxonomy_load(const char *source, bool turtle);

// # Safety
// `t` must come from `mm_taxonomy_*` and not be used afterwards. Null is ignored.
void mm_taxonomy_free(struct MmTaxonomy *t);

// Writes whether concept `a` is subsumed by concept `b`.
//
// # Safety
// Pointers must be valid; strings NUL-terminated.
enum MmStatus mm_is_subsumed_by(const struct MmTaxonomy *t,
                                const char *a,
                                const char *b,
                                bool *out);

// Parses one robot record in canonical JSON. Null on error.
//
// # Safety
// `json` must be a NUL-terminated string.
struct MmMorphology *mm_morphology_from_json(const char *json);

// # Safety
// `m` must come from `mm_morphology_from_json` and not be used afterwards. Null is ignored.
void mm_morphology_free(struct MmMorphology *m);

// Validates `m` against `t`, writing the number of errors. Returns
// `MM_STATUS_INVALID` with the findings as the last error when there are any.
//
// # Safety
// Pointers must be valid.
enum MmStatus mm_validate(const struct MmTaxonomy *t,
                          const struct MmMorphology *m,
                          size_t *error_count);

// Jaccard index over subdivision concepts, or over every feature when `full`.
//
// # Safety
// Pointers must be valid.
enum MmStatus mm_jaccard_index(const struct MmMorphology *a,
                               const struct MmMorphology *b,
                               bool full,
                               double *out);

// Unit-cost edit distance with concept labels. With `exact`, searches
// exactly up to `max_states` generated states (0 means the default) and
// reports through `out_exact` whether the value is optimal; otherwise
// computes the assignment upper bound.
//
// # Safety
// Pointers must be valid; `out_exact` may be null.
enum MmStatus mm_ged(const struct MmMorphology *a,
                     const struct MmMorphology *b,
                     bool exact,
                     uint64_t max_states,
                     double *out_value,
                     bool *out_exact);

// Deterministic Graphviz DOT text, or null on error. Free with `mm_string_free`.
//
// # Safety
// `m` must be valid.
char *mm_to_dot(const struct MmMorphology *m);

// # Safety
// `s` must come from this library and not be used afterwards. Null is ignored.
void mm_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* METAMORPH_H */
