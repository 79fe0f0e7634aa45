//! C interface to `deltacover`.
//!
//! Graphs and covers are opaque heap handles released with their `_free`
//! function. Every fallible call returns a [`DcStatus`]; on failure the
//! message is kept per thread and read with [`dc_last_error`]. Covering
//! ranges are passed as numerator and denominator.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::time::Duration;

use deltacover::approx::approx_cover;
use deltacover::io::{format_cover, parse_cover, parse_graph};
use deltacover::setcover::{min_cover_exact, Budget};
use deltacover::tree::tree_cover;
use deltacover::verify::is_delta_cover;
use deltacover::{Cover, CoverError, Graph, Rational};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DcStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidGraph = 2,
    InvalidDelta = 3,
    InvalidPoint = 4,
    Parse = 5,
    NotACover = 6,
    BudgetExhausted = 7,
    NotApplicable = 8,
    Internal = 9,
}

/// Opaque graph handle.
pub struct DcGraph(Graph);

/// Opaque cover handle.
pub struct DcCover(Cover);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &CoverError) -> DcStatus {
    match e {
        CoverError::Parse { .. } => DcStatus::Parse,
        CoverError::InvalidGraph(_) => DcStatus::InvalidGraph,
        CoverError::InvalidPoint(_) => DcStatus::InvalidPoint,
        CoverError::InvalidDelta(_) | CoverError::DeltaOutOfRange { .. } => DcStatus::InvalidDelta,
        CoverError::NotACover { .. } => DcStatus::NotACover,
        CoverError::NotAForest | CoverError::Routing(_) => DcStatus::NotApplicable,
        CoverError::BudgetExhausted { .. } => DcStatus::BudgetExhausted,
        _ => DcStatus::Internal,
    }
}

/// Runs `f`, recording errors and turning panics into `Internal`.
fn guard(f: impl FnOnce() -> Result<(), DcStatus>) -> DcStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => DcStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => {
            set_error("internal panic".into());
            DcStatus::Internal
        }
    }
}

fn fail(e: CoverError) -> DcStatus {
    let s = status_of(&e);
    set_error(e.to_string());
    s
}

fn null(what: &str) -> DcStatus {
    set_error(format!("{what} is null"));
    DcStatus::NullPointer
}

unsafe fn as_ref<'a, T>(p: *const T, what: &str) -> Result<&'a T, DcStatus> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn as_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, DcStatus> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p).to_str().map_err(|_| {
        set_error(format!("{what} is not UTF-8"));
        DcStatus::Parse
    })
}

fn delta(num: i64, den: i64) -> Result<Rational, DcStatus> {
    if den == 0 || (num > 0) != (den > 0) || num == 0 {
        set_error(format!("covering range {num}/{den} must be a positive fraction"));
        return Err(DcStatus::InvalidDelta);
    }
    Ok(Rational::new(num, den))
}

fn budget(max_nodes: u64, max_millis: u64) -> Budget {
    let default = Budget::default();
    Budget {
        max_nodes: if max_nodes == 0 { default.max_nodes } else { max_nodes },
        max_time: if max_millis == 0 { default.max_time } else { Some(Duration::from_millis(max_millis)) },
    }
}

unsafe fn put<T>(out: *mut *mut T, value: T) -> Result<(), DcStatus> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    *out = Box::into_raw(Box::new(value));
    Ok(())
}

/// Builds a graph on `n` vertices from `m` edges given as `2m` zero-based
/// vertex ids.
///
/// # Safety
/// `edges` must point to `2 * m` readable values (or be null when `m == 0`);
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dc_graph_new(n: usize, edges: *const usize, m: usize, out: *mut *mut DcGraph) -> DcStatus {
    guard(|| {
        let flat: &[usize] = if m == 0 {
            &[]
        } else {
            if edges.is_null() {
                return Err(null("edges"));
            }
            std::slice::from_raw_parts(edges, 2 * m)
        };
        let pairs: Vec<(usize, usize)> = flat.chunks_exact(2).map(|c| (c[0], c[1])).collect();
        let g = Graph::new(n, &pairs).map_err(fail)?;
        put(out, DcGraph(g))
    })
}

/// Parses a graph in the `p n m` / `e u v` text format.
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dc_graph_parse(text: *const c_char, out: *mut *mut DcGraph) -> DcStatus {
    guard(|| {
        let g = parse_graph(as_str(text, "text")?).map_err(fail)?;
        put(out, DcGraph(g))
    })
}

/// # Safety
/// `g` must come from this library and not be freed twice; null is ignored.
#[no_mangle]
pub unsafe extern "C" fn dc_graph_free(g: *mut DcGraph) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// # Safety
/// `g` must be a live handle or null (returns 0).
#[no_mangle]
pub unsafe extern "C" fn dc_graph_vertex_count(g: *const DcGraph) -> usize {
    g.as_ref().map_or(0, |g| g.0.vertex_count())
}

/// # Safety
/// `g` must be a live handle or null (returns 0).
#[no_mangle]
pub unsafe extern "C" fn dc_graph_edge_count(g: *const DcGraph) -> usize {
    g.as_ref().map_or(0, |g| g.0.edge_count())
}

/// Minimum cover. Zero limits select the defaults (10^7 nodes, 60 s). When
/// the limits stop the search the best cover found is still returned and
/// `*optimal` is false.
///
/// # Safety
/// `g` must be a live handle; `out` and `optimal` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dc_min_cover(
    g: *const DcGraph,
    delta_num: i64,
    delta_den: i64,
    max_nodes: u64,
    max_millis: u64,
    out: *mut *mut DcCover,
    optimal: *mut bool,
) -> DcStatus {
    guard(|| {
        let g = as_ref(g, "graph")?;
        if optimal.is_null() {
            return Err(null("optimal"));
        }
        let d = delta(delta_num, delta_den)?;
        let res = min_cover_exact(&g.0, &d, &budget(max_nodes, max_millis)).map_err(fail)?;
        *optimal = res.optimal;
        put(out, DcCover(res.cover))
    })
}

/// Minimum cover of a forest; `NotApplicable` otherwise.
///
/// # Safety
/// `g` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dc_tree_cover(g: *const DcGraph, delta_num: i64, delta_den: i64, out: *mut *mut DcCover) -> DcStatus {
    guard(|| {
        let g = as_ref(g, "graph")?;
        let d = delta(delta_num, delta_den)?;
        let res = tree_cover(&g.0, &d).map_err(fail)?;
        put(out, DcCover(res.cover))
    })
}

/// Approximate cover. When `claimed_factor` is non-null it receives the
/// guaranteed factor as an `a/b` string, released with [`dc_string_free`].
///
/// # Safety
/// `g` must be a live handle; `out` must be writable; `claimed_factor` must
/// be writable or null.
#[no_mangle]
pub unsafe extern "C" fn dc_approx_cover(
    g: *const DcGraph,
    delta_num: i64,
    delta_den: i64,
    max_nodes: u64,
    max_millis: u64,
    out: *mut *mut DcCover,
    claimed_factor: *mut *mut c_char,
) -> DcStatus {
    guard(|| {
        let g = as_ref(g, "graph")?;
        let d = delta(delta_num, delta_den)?;
        let rep = approx_cover(&g.0, &d, &budget(max_nodes, max_millis)).map_err(fail)?;
        if !claimed_factor.is_null() {
            *claimed_factor = CString::new(rep.claimed_factor.to_string()).expect("no nul").into_raw();
        }
        put(out, DcCover(rep.cover))
    })
}

/// Sets `*is_cover` to whether `s` is a δ-cover of `g`.
///
/// # Safety
/// `g` and `s` must be live handles; `is_cover` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dc_verify(
    g: *const DcGraph,
    s: *const DcCover,
    delta_num: i64,
    delta_den: i64,
    is_cover: *mut bool,
) -> DcStatus {
    guard(|| {
        let g = as_ref(g, "graph")?;
        let s = as_ref(s, "cover")?;
        if is_cover.is_null() {
            return Err(null("is_cover"));
        }
        let d = delta(delta_num, delta_den)?;
        s.0.validate(&g.0).map_err(fail)?;
        *is_cover = is_delta_cover(&g.0, &s.0, &d).is_cover;
        Ok(())
    })
}

/// Parses a cover of `g` in the `v u` / `i u v a/b` text format.
///
/// # Safety
/// `g` must be a live handle; `text` NUL-terminated; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn dc_cover_parse(g: *const DcGraph, text: *const c_char, out: *mut *mut DcCover) -> DcStatus {
    guard(|| {
        let g = as_ref(g, "graph")?;
        let s = parse_cover(as_str(text, "text")?, &g.0).map_err(fail)?;
        put(out, DcCover(s))
    })
}

/// # Safety
/// `s` must be a live handle or null (returns 0).
#[no_mangle]
pub unsafe extern "C" fn dc_cover_len(s: *const DcCover) -> usize {
    s.as_ref().map_or(0, |s| s.0.len())
}

/// Cover in the canonical text format; release with [`dc_string_free`].
/// Null when `s` is null.
///
/// # Safety
/// `s` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn dc_cover_to_string(s: *const DcCover) -> *mut c_char {
    match s.as_ref() {
        Some(s) => CString::new(format_cover(&s.0)).expect("no nul").into_raw(),
        None => ptr::null_mut(),
    }
}

/// # Safety
/// `s` must come from this library and not be freed twice; null is ignored.
#[no_mangle]
pub unsafe extern "C" fn dc_cover_free(s: *mut DcCover) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// # Safety
/// `s` must come from this library and not be freed twice; null is ignored.
#[no_mangle]
pub unsafe extern "C" fn dc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message of the last failed call on this thread, or null. Owned by the
/// library and valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn dc_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}
