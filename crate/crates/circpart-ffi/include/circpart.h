#ifndef CIRCPART_H
#define CIRCPART_H

/* Generated by cbindgen from the circpart-ffi crate; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Which structural slot a disk occupies in the partition.
 */
typedef enum {
  CP_ROLE_CENTRAL = 0,
  CP_ROLE_CORNER = 1,
  CP_ROLE_GAP = 2,
} CpRole;

/**
 * Outcome of a call.  Anything but `Ok` stores a message retrievable with
 * `cp_last_error_message` on the calling thread.
 */
typedef enum {
  CP_STATUS_OK = 0,
  /**
   * A required pointer argument was null.
   */
  CP_STATUS_NULL_POINTER = 1,
  /**
   * An argument was outside the supported domain.
   */
  CP_STATUS_INVALID_ARGUMENT = 2,
  /**
   * The requested geometry collapses (tangency or intersection lost).
   */
  CP_STATUS_DEGENERATE = 3,
  /**
   * The covering cannot be completed at the requested ratio.
   */
  CP_STATUS_INFEASIBLE = 4,
  /**
   * Piece growth stalled before labeling every cell.
   */
  CP_STATUS_GROWTH_STALLED = 5,
  /**
   * A serialization or I/O step failed.
   */
  CP_STATUS_IO = 6,
} CpStatus;

/**
 * Opaque partition handle; create with one of the `cp_partition_build`
 * entry points or `cp_partition_from_json`, release with
 * `cp_partition_free`.
 */
typedef struct CpPartition CpPartition;

/**
 * A circle in polygon coordinates (inradius 1, centroid at the origin).
 */
typedef struct {
  double cx;
  double cy;
  double r;
} CpCircle;

/**
 * One piece of a partition: its inscribed disk, the circumscribed circle
 * bounding the final piece, and the index of the gap disk it subdivides
 * (-1 for the central disk, corner disks, and each covering's first disk).
 */
typedef struct {
  CpRole role;
  CpCircle indisk;
  CpCircle outcircle;
  int64_t parent;
} CpDiskEntry;

/**
 * Sampling verdict from `cp_partition_verify`.
 */
typedef struct {
  uint64_t samples_total;
  uint64_t samples_uncovered;
  uint64_t disjointness_violations;
  /**
   * True when an uncovered point was found; its coordinates follow.
   */
  bool has_worst_point;
  double worst_x;
  double worst_y;
} CpCoverage;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message from the most recent failing call on this thread, or null if the
 * most recent call succeeded.  The pointer stays valid until the next call
 * into this library from the same thread.
 */
const char *cp_last_error_message(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *cp_version(void);

/**
 * Build a partition of the regular k-gon at aspect-ratio bound `gamma`.
 *
 * A handle is produced even when the edge covering does not terminate at
 * this ratio; check `cp_partition_terminated` before relying on coverage.
 *
 * # Safety
 * `out` must point to writable storage for one handle pointer.
 */
CpStatus cp_partition_build(uint32_t k, double gamma, CpPartition **out);

/**
 * Build a partition at the best known ratio for the k-gon: the vertex
 * bound when the covering terminates there, otherwise the smallest ratio
 * the feasibility search accepts (the result may still be partial).
 *
 * # Safety
 * `out` must point to writable storage for one handle pointer.
 */
CpStatus cp_partition_build_auto(uint32_t k, CpPartition **out);

/**
 * Parse a partition document produced by `cp_partition_to_json` (or the
 * circpart CLI) back into a handle.
 *
 * # Safety
 * `text` must be a valid NUL-terminated string; `out` must point to
 * writable storage for one handle pointer.
 */
CpStatus cp_partition_from_json(const char *text, CpPartition **out);

/**
 * Release a handle.  Null is ignored.
 *
 * # Safety
 * `partition` must have come from this library and not been freed before.
 */
void cp_partition_free(CpPartition *partition);

/**
 * Number of polygon vertices; 0 for null.
 *
 * # Safety
 * `partition` must be a live handle or null.
 */
uint32_t cp_partition_k(const CpPartition *partition);

/**
 * Requested aspect-ratio bound; 0 for null.
 *
 * # Safety
 * `partition` must be a live handle or null.
 */
double cp_partition_gamma(const CpPartition *partition);

/**
 * Largest aspect ratio realized by any piece; 0 for null.
 *
 * # Safety
 * `partition` must be a live handle or null.
 */
double cp_partition_achieved_ratio(const CpPartition *partition);

/**
 * Number of materialized pieces; 0 for null.
 *
 * # Safety
 * `partition` must be a live handle or null.
 */
uint64_t cp_partition_piece_count(const CpPartition *partition);

/**
 * True when every edge gap closed within the step budget, so the disks are
 * a complete covering; false for partial coverings and null.
 *
 * # Safety
 * `partition` must be a live handle or null.
 */
bool cp_partition_terminated(const CpPartition *partition);

/**
 * Deepest gap recursion level; 0 for null.
 *
 * # Safety
 * `partition` must be a live handle or null.
 */
uint32_t cp_partition_depth(const CpPartition *partition);

/**
 * Number of disk entries addressable by `cp_partition_disk`; equals the
 * piece count.  0 for null.
 *
 * # Safety
 * `partition` must be a live handle or null.
 */
uint64_t cp_partition_disk_count(const CpPartition *partition);

/**
 * Copy one disk entry, in document order: central disk, the k corner
 * disks, then gap disks per half-edge covering in recursion preorder.
 *
 * # Safety
 * `partition` must be a live handle; `out` must point to writable storage
 * for one entry.
 */
CpStatus cp_partition_disk(const CpPartition *partition, uint64_t index, CpDiskEntry *out);

/**
 * Serialize the partition document to JSON.  The string is owned by the
 * caller; release it with `cp_string_free`.
 *
 * # Safety
 * `partition` must be a live handle; `out` must point to writable storage
 * for one string pointer.
 */
CpStatus cp_partition_to_json(const CpPartition *partition, char **out);

/**
 * Release a string returned by this library.  Null is ignored.
 *
 * # Safety
 * `text` must have come from this library and not been freed before.
 */
void cp_string_free(char *text);

/**
 * Sample the polygon and check the covering axioms: every sample lies in
 * some outcircle and no two inscribed disks overlap.
 *
 * # Safety
 * `partition` must be a live handle; `out` must point to writable storage
 * for one summary.
 */
CpStatus cp_partition_verify(const CpPartition *partition,
                             uint64_t samples,
                             uint64_t seed,
                             CpCoverage *out);

/**
 * Aspect ratio of the k-gon itself; at or above it one piece suffices.
 *
 * # Safety
 * `out` must point to writable storage for one double.
 */
CpStatus cp_one_piece_ratio(uint32_t k, double *out);

/**
 * Smallest ratio at which a disk can fill a corner of the k-gon; below it
 * no partition into bounded-ratio pieces exists.
 *
 * # Safety
 * `out` must point to writable storage for one double.
 */
CpStatus cp_vertex_bound(uint32_t k, double *out);

/**
 * Smallest ratio the covering feasibility search accepts for the k-gon.
 *
 * # Safety
 * `out` must point to writable storage for one double.
 */
CpStatus cp_optimal_gamma(uint32_t k, double *out);

/**
 * Ratio below which the gap recurrence acquires fixed points and open
 * regions of nontermination appear.
 */
double cp_critical_ratio(void);

/**
 * Scaled width of the reference gap between two unit disks at ratio
 * `gamma`.
 *
 * # Safety
 * `out` must point to writable storage for one double.
 */
CpStatus cp_canonical_scaled_gap(double gamma, double *out);

/**
 * Number of covering steps until a scaled gap closes at ratio `gamma`, up
 * to `cap` steps.  Returns `Infeasible` when the gap never closes.
 *
 * # Safety
 * `out` must point to writable storage for one uint32.
 */
CpStatus cp_steps_to_cover(double scaled_gap, double gamma, uint32_t cap, uint32_t *out);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* CIRCPART_H */
