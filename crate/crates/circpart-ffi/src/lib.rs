//! C ABI over the circpart library: opaque partition handles, plain status
//! codes, and a per-thread error message.  The generated header lands in
//! `include/circpart.h`.
//!
//! Conventions: every fallible call returns [`CpStatus`] and writes its
//! result through an out pointer that is left untouched on failure; handle
//! getters tolerate null and return zero.  Strings returned through out
//! pointers are owned by the caller and must be released with
//! [`cp_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};

use circpart::bounds::{gamma_one, gamma_theta, interior_angle};
use circpart::cli::document::{PartitionDocument, Role};
use circpart::construct::{build_partition, optimal_gamma, Partition};
use circpart::edgecover::{canonical_scaled_gap, steps_to_cover, StepsOutcome};
use circpart::fixedpoint::gamma_star;
use circpart::verify::check_covering;
use circpart::Error;

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

/// Outcome of a call.  Anything but `Ok` stores a message retrievable with
/// `cp_last_error_message` on the calling thread.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CpStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// An argument was outside the supported domain.
    InvalidArgument = 2,
    /// The requested geometry collapses (tangency or intersection lost).
    Degenerate = 3,
    /// The covering cannot be completed at the requested ratio.
    Infeasible = 4,
    /// Piece growth stalled before labeling every cell.
    GrowthStalled = 5,
    /// A serialization or I/O step failed.
    Io = 6,
}

/// Which structural slot a disk occupies in the partition.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CpRole {
    Central = 0,
    Corner = 1,
    Gap = 2,
}

/// A circle in polygon coordinates (inradius 1, centroid at the origin).
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct CpCircle {
    pub cx: f64,
    pub cy: f64,
    pub r: f64,
}

/// One piece of a partition: its inscribed disk, the circumscribed circle
/// bounding the final piece, and the index of the gap disk it subdivides
/// (-1 for the central disk, corner disks, and each covering's first disk).
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct CpDiskEntry {
    pub role: CpRole,
    pub indisk: CpCircle,
    pub outcircle: CpCircle,
    pub parent: i64,
}

/// Sampling verdict from `cp_partition_verify`.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct CpCoverage {
    pub samples_total: u64,
    pub samples_uncovered: u64,
    pub disjointness_violations: u64,
    /// True when an uncovered point was found; its coordinates follow.
    pub has_worst_point: bool,
    pub worst_x: f64,
    pub worst_y: f64,
}

/// Opaque partition handle; create with one of the `cp_partition_build`
/// entry points or `cp_partition_from_json`, release with
/// `cp_partition_free`.
pub struct CpPartition {
    partition: Partition,
    document: PartitionDocument,
}

fn set_error(message: String) {
    let text = CString::new(message)
        .unwrap_or_else(|_| CString::new("error message contained a NUL byte").unwrap());
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(text));
}

fn clear_error() {
    LAST_ERROR.with(|slot| *slot.borrow_mut() = None);
}

fn fail(error: Error) -> CpStatus {
    let status = match error {
        Error::InvalidArgument(_) | Error::AlreadyTerminated => CpStatus::InvalidArgument,
        Error::Degenerate(_) => CpStatus::Degenerate,
        Error::Infeasible(_) => CpStatus::Infeasible,
        Error::GrowthStalled(_) => CpStatus::GrowthStalled,
        Error::Io(_) => CpStatus::Io,
    };
    set_error(error.to_string());
    status
}

fn null_pointer(name: &str) -> CpStatus {
    set_error(format!("{name} must not be null"));
    CpStatus::NullPointer
}

fn invalid(message: String) -> CpStatus {
    set_error(message);
    CpStatus::InvalidArgument
}

fn check_gamma(gamma: f64) -> Option<CpStatus> {
    if gamma.is_finite() && gamma > 1.0 {
        None
    } else {
        Some(invalid(format!("gamma must be finite and > 1, got {gamma}")))
    }
}

fn wrap(partition: Partition) -> *mut CpPartition {
    let document = PartitionDocument::from_partition(&partition);
    Box::into_raw(Box::new(CpPartition { partition, document }))
}

/// Message from the most recent failing call on this thread, or null if the
/// most recent call succeeded.  The pointer stays valid until the next call
/// into this library from the same thread.
#[no_mangle]
pub extern "C" fn cp_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| {
        slot.borrow()
            .as_ref()
            .map_or(std::ptr::null(), |text| text.as_ptr())
    })
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn cp_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Build a partition of the regular k-gon at aspect-ratio bound `gamma`.
///
/// A handle is produced even when the edge covering does not terminate at
/// this ratio; check `cp_partition_terminated` before relying on coverage.
///
/// # Safety
/// `out` must point to writable storage for one handle pointer.
#[no_mangle]
pub unsafe extern "C" fn cp_partition_build(
    k: u32,
    gamma: f64,
    out: *mut *mut CpPartition,
) -> CpStatus {
    clear_error();
    let Some(out) = out.as_mut() else {
        return null_pointer("out");
    };
    if let Some(status) = check_gamma(gamma) {
        return status;
    }
    match build_partition(k, gamma) {
        Ok(partition) => {
            *out = wrap(partition);
            CpStatus::Ok
        }
        Err(e) => fail(e),
    }
}

/// Build a partition at the best known ratio for the k-gon: the vertex
/// bound when the covering terminates there, otherwise the smallest ratio
/// the feasibility search accepts (the result may still be partial).
///
/// # Safety
/// `out` must point to writable storage for one handle pointer.
#[no_mangle]
pub unsafe extern "C" fn cp_partition_build_auto(k: u32, out: *mut *mut CpPartition) -> CpStatus {
    clear_error();
    let Some(out) = out.as_mut() else {
        return null_pointer("out");
    };
    let attempt = (|| {
        let vertex_bound = gamma_theta(interior_angle_checked(k)?)?.value;
        let at_bound = build_partition(k, vertex_bound)?;
        if at_bound.terminated {
            return Ok(at_bound);
        }
        build_partition(k, optimal_gamma(k)?)
    })();
    match attempt {
        Ok(partition) => {
            *out = wrap(partition);
            CpStatus::Ok
        }
        Err(e) => fail(e),
    }
}

fn interior_angle_checked(k: u32) -> circpart::Result<f64> {
    if k < 3 {
        return Err(Error::InvalidArgument(format!(
            "polygon needs at least 3 vertices, got {k}"
        )));
    }
    Ok(interior_angle(k))
}

/// Parse a partition document produced by `cp_partition_to_json` (or the
/// circpart CLI) back into a handle.
///
/// # Safety
/// `text` must be a valid NUL-terminated string; `out` must point to
/// writable storage for one handle pointer.
#[no_mangle]
pub unsafe extern "C" fn cp_partition_from_json(
    text: *const c_char,
    out: *mut *mut CpPartition,
) -> CpStatus {
    clear_error();
    let Some(out) = out.as_mut() else {
        return null_pointer("out");
    };
    if text.is_null() {
        return null_pointer("text");
    }
    let Ok(text) = CStr::from_ptr(text).to_str() else {
        return invalid("document text is not valid UTF-8".into());
    };
    let document = match PartitionDocument::from_json(text) {
        Ok(doc) => doc,
        Err(e) => return fail(e),
    };
    match document.to_partition() {
        Ok(partition) => {
            *out = Box::into_raw(Box::new(CpPartition { partition, document }));
            CpStatus::Ok
        }
        Err(e) => fail(e),
    }
}

/// Release a handle.  Null is ignored.
///
/// # Safety
/// `partition` must have come from this library and not been freed before.
#[no_mangle]
pub unsafe extern "C" fn cp_partition_free(partition: *mut CpPartition) {
    if !partition.is_null() {
        drop(Box::from_raw(partition));
    }
}

/// Number of polygon vertices; 0 for null.
///
/// # Safety
/// `partition` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn cp_partition_k(partition: *const CpPartition) -> u32 {
    partition.as_ref().map_or(0, |p| p.partition.k)
}

/// Requested aspect-ratio bound; 0 for null.
///
/// # Safety
/// `partition` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn cp_partition_gamma(partition: *const CpPartition) -> f64 {
    partition.as_ref().map_or(0.0, |p| p.partition.gamma)
}

/// Largest aspect ratio realized by any piece; 0 for null.
///
/// # Safety
/// `partition` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn cp_partition_achieved_ratio(partition: *const CpPartition) -> f64 {
    partition.as_ref().map_or(0.0, |p| p.partition.achieved_ratio)
}

/// Number of materialized pieces; 0 for null.
///
/// # Safety
/// `partition` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn cp_partition_piece_count(partition: *const CpPartition) -> u64 {
    partition.as_ref().map_or(0, |p| p.partition.piece_count)
}

/// True when every edge gap closed within the step budget, so the disks are
/// a complete covering; false for partial coverings and null.
///
/// # Safety
/// `partition` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn cp_partition_terminated(partition: *const CpPartition) -> bool {
    partition.as_ref().is_some_and(|p| p.partition.terminated)
}

/// Deepest gap recursion level; 0 for null.
///
/// # Safety
/// `partition` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn cp_partition_depth(partition: *const CpPartition) -> u32 {
    partition.as_ref().map_or(0, |p| p.partition.depth)
}

/// Number of disk entries addressable by `cp_partition_disk`; equals the
/// piece count.  0 for null.
///
/// # Safety
/// `partition` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn cp_partition_disk_count(partition: *const CpPartition) -> u64 {
    partition.as_ref().map_or(0, |p| p.document.disks.len() as u64)
}

/// Copy one disk entry, in document order: central disk, the k corner
/// disks, then gap disks per half-edge covering in recursion preorder.
///
/// # Safety
/// `partition` must be a live handle; `out` must point to writable storage
/// for one entry.
#[no_mangle]
pub unsafe extern "C" fn cp_partition_disk(
    partition: *const CpPartition,
    index: u64,
    out: *mut CpDiskEntry,
) -> CpStatus {
    clear_error();
    let Some(handle) = partition.as_ref() else {
        return null_pointer("partition");
    };
    let Some(out) = out.as_mut() else {
        return null_pointer("out");
    };
    let disks = &handle.document.disks;
    let Some(entry) = usize::try_from(index).ok().and_then(|i| disks.get(i)) else {
        return invalid(format!(
            "disk index {index} out of range for {} disks",
            disks.len()
        ));
    };
    *out = CpDiskEntry {
        role: match entry.role {
            Role::Central => CpRole::Central,
            Role::Corner => CpRole::Corner,
            Role::Gap => CpRole::Gap,
        },
        indisk: CpCircle {
            cx: entry.indisk.cx,
            cy: entry.indisk.cy,
            r: entry.indisk.r,
        },
        outcircle: CpCircle {
            cx: entry.outcircle.cx,
            cy: entry.outcircle.cy,
            r: entry.outcircle.r,
        },
        parent: entry.parent.map_or(-1, |p| p as i64),
    };
    CpStatus::Ok
}

/// Serialize the partition document to JSON.  The string is owned by the
/// caller; release it with `cp_string_free`.
///
/// # Safety
/// `partition` must be a live handle; `out` must point to writable storage
/// for one string pointer.
#[no_mangle]
pub unsafe extern "C" fn cp_partition_to_json(
    partition: *const CpPartition,
    out: *mut *mut c_char,
) -> CpStatus {
    clear_error();
    let Some(handle) = partition.as_ref() else {
        return null_pointer("partition");
    };
    let Some(out) = out.as_mut() else {
        return null_pointer("out");
    };
    match CString::new(handle.document.to_json()) {
        Ok(text) => {
            *out = text.into_raw();
            CpStatus::Ok
        }
        Err(_) => {
            set_error("serialized document contained a NUL byte".into());
            CpStatus::Io
        }
    }
}

/// Release a string returned by this library.  Null is ignored.
///
/// # Safety
/// `text` must have come from this library and not been freed before.
#[no_mangle]
pub unsafe extern "C" fn cp_string_free(text: *mut c_char) {
    if !text.is_null() {
        drop(CString::from_raw(text));
    }
}

/// Sample the polygon and check the covering axioms: every sample lies in
/// some outcircle and no two inscribed disks overlap.
///
/// # Safety
/// `partition` must be a live handle; `out` must point to writable storage
/// for one summary.
#[no_mangle]
pub unsafe extern "C" fn cp_partition_verify(
    partition: *const CpPartition,
    samples: u64,
    seed: u64,
    out: *mut CpCoverage,
) -> CpStatus {
    clear_error();
    let Some(handle) = partition.as_ref() else {
        return null_pointer("partition");
    };
    let Some(out) = out.as_mut() else {
        return null_pointer("out");
    };
    if !handle.partition.terminated {
        return fail(Error::Infeasible(
            "covering is partial; verification needs a terminated partition".into(),
        ));
    }
    let Ok(samples) = usize::try_from(samples) else {
        return invalid(format!("sample count {samples} exceeds the address space"));
    };
    let report = check_covering(&handle.partition, samples, seed);
    *out = CpCoverage {
        samples_total: report.samples_total as u64,
        samples_uncovered: report.samples_uncovered as u64,
        disjointness_violations: report.disjointness_violations.len() as u64,
        has_worst_point: report.worst_point.is_some(),
        worst_x: report.worst_point.map_or(0.0, |p| p.x),
        worst_y: report.worst_point.map_or(0.0, |p| p.y),
    };
    CpStatus::Ok
}

/// Aspect ratio of the k-gon itself; at or above it one piece suffices.
///
/// # Safety
/// `out` must point to writable storage for one double.
#[no_mangle]
pub unsafe extern "C" fn cp_one_piece_ratio(k: u32, out: *mut f64) -> CpStatus {
    clear_error();
    let Some(out) = out.as_mut() else {
        return null_pointer("out");
    };
    match gamma_one(k) {
        Ok(bound) => {
            *out = bound.value;
            CpStatus::Ok
        }
        Err(e) => fail(e),
    }
}

/// Smallest ratio at which a disk can fill a corner of the k-gon; below it
/// no partition into bounded-ratio pieces exists.
///
/// # Safety
/// `out` must point to writable storage for one double.
#[no_mangle]
pub unsafe extern "C" fn cp_vertex_bound(k: u32, out: *mut f64) -> CpStatus {
    clear_error();
    let Some(out) = out.as_mut() else {
        return null_pointer("out");
    };
    let bound = interior_angle_checked(k).and_then(gamma_theta);
    match bound {
        Ok(bound) => {
            *out = bound.value;
            CpStatus::Ok
        }
        Err(e) => fail(e),
    }
}

/// Smallest ratio the covering feasibility search accepts for the k-gon.
///
/// # Safety
/// `out` must point to writable storage for one double.
#[no_mangle]
pub unsafe extern "C" fn cp_optimal_gamma(k: u32, out: *mut f64) -> CpStatus {
    clear_error();
    let Some(out) = out.as_mut() else {
        return null_pointer("out");
    };
    match optimal_gamma(k) {
        Ok(best) => {
            *out = best;
            CpStatus::Ok
        }
        Err(e) => fail(e),
    }
}

/// Ratio below which the gap recurrence acquires fixed points and open
/// regions of nontermination appear.
#[no_mangle]
pub extern "C" fn cp_critical_ratio() -> f64 {
    gamma_star()
}

/// Scaled width of the reference gap between two unit disks at ratio
/// `gamma`.
///
/// # Safety
/// `out` must point to writable storage for one double.
#[no_mangle]
pub unsafe extern "C" fn cp_canonical_scaled_gap(gamma: f64, out: *mut f64) -> CpStatus {
    clear_error();
    let Some(out) = out.as_mut() else {
        return null_pointer("out");
    };
    if let Some(status) = check_gamma(gamma) {
        return status;
    }
    *out = canonical_scaled_gap(gamma);
    CpStatus::Ok
}

/// Number of covering steps until a scaled gap closes at ratio `gamma`, up
/// to `cap` steps.  Returns `Infeasible` when the gap never closes.
///
/// # Safety
/// `out` must point to writable storage for one uint32.
#[no_mangle]
pub unsafe extern "C" fn cp_steps_to_cover(
    scaled_gap: f64,
    gamma: f64,
    cap: u32,
    out: *mut u32,
) -> CpStatus {
    clear_error();
    let Some(out) = out.as_mut() else {
        return null_pointer("out");
    };
    if let Some(status) = check_gamma(gamma) {
        return status;
    }
    if !scaled_gap.is_finite() {
        return invalid(format!("scaled gap must be finite, got {scaled_gap}"));
    }
    match steps_to_cover(scaled_gap, gamma, cap) {
        StepsOutcome::Covered(steps) => {
            *out = steps;
            CpStatus::Ok
        }
        StepsOutcome::NonTerminating => fail(Error::Infeasible(format!(
            "gap {scaled_gap} never closes at gamma {gamma}"
        ))),
    }
}
