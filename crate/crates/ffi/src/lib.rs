//! C ABI for the superpolyomino toolkit.
//!
//! Instances and results are opaque handles owned by the caller and released
//! with their `_free` function. Every call returns an [`SpStatus`]; on
//! failure [`sp_last_error`] describes what went wrong on the calling thread.
//! Strings handed out by the library are released with [`sp_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Duration;

use superpoly::coloring::{self, ColoringError, TwoColorCodec};
use superpoly::dispatch::{self, DispatchError, Mode, Outcome, RunOptions};
use superpoly::geometry::is_superpolyomino;
use superpoly::setcover;
use superpoly::text::{self, InstanceFile, Provenance};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    InvalidArgument = 4,
    GraphTooSmall = 5,
    ProvenanceMismatch = 6,
    SolveFailed = 7,
    Panic = 8,
}

/// Values accepted by the `mode` argument of [`sp_solve`].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpMode {
    Exact = 0,
    Steiner = 1,
    Greedy = 2,
    Brute = 3,
    Deck = 4,
    Aligned = 5,
}

impl SpMode {
    fn from_raw(raw: u32) -> Option<Mode> {
        Some(match raw {
            0 => Mode::Exact,
            1 => Mode::Steiner,
            2 => Mode::Greedy,
            3 => Mode::Brute,
            4 => Mode::Deck,
            5 => Mode::Aligned,
            _ => return None,
        })
    }
}

/// A parsed instance together with its reduction provenance, if any.
pub struct SpInstance {
    file: InstanceFile,
}

/// The outcome of one [`sp_solve`] call.
pub struct SpResult {
    outcome: Outcome,
    layout_text: String,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

struct Fail(SpStatus, String);

impl Fail {
    fn new(status: SpStatus, msg: impl ToString) -> Fail {
        Fail(status, msg.to_string())
    }
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> SpStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            SpStatus::Ok
        }
        Ok(Err(Fail(status, msg))) => {
            set_error(&msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            SpStatus::Panic
        }
    }
}

unsafe fn input<'a>(s: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if s.is_null() {
        return Err(Fail::new(SpStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| Fail::new(SpStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

fn out_string(s: &str) -> Result<*mut c_char, Fail> {
    CString::new(s)
        .map(CString::into_raw)
        .map_err(|_| Fail::new(SpStatus::InvalidArgument, "string contains NUL"))
}

fn store<T>(out: *mut *mut T, value: T) -> Result<(), Fail> {
    if out.is_null() {
        return Err(Fail::new(SpStatus::NullPointer, "output pointer is null"));
    }
    unsafe { *out = Box::into_raw(Box::new(value)) };
    Ok(())
}

unsafe fn handle<'a, T>(h: *const T) -> Result<&'a T, Fail> {
    h.as_ref()
        .ok_or_else(|| Fail::new(SpStatus::NullPointer, "handle is null"))
}

fn parse_fail(e: impl ToString) -> Fail {
    Fail::new(SpStatus::Parse, e)
}

/// Message for the last failed call on this thread; empty after a success.
/// The pointer stays valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn sp_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Parses an instance file.
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sp_instance_from_text(text: *const c_char, out: *mut *mut SpInstance) -> SpStatus {
    guard(|| {
        let file = text::parse_instance(input(text, "text")?).map_err(parse_fail)?;
        store(out, SpInstance { file })
    })
}

/// Builds the coloring reduction of a graph given in edge-list text.
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sp_instance_from_graph_text(
    text: *const c_char,
    two_color: bool,
    out: *mut *mut SpInstance,
) -> SpStatus {
    guard(|| {
        let g = text::parse_graph(input(text, "text")?).map_err(parse_fail)?;
        let reduce = || -> Result<_, ColoringError> {
            let ci = coloring::build_instance(&g)?;
            if two_color {
                coloring::to_two_color_instance(&ci, &TwoColorCodec::default())
            } else {
                Ok(ci)
            }
        };
        let ci = reduce().map_err(|e| match e {
            ColoringError::GraphTooSmall(_) => Fail::new(SpStatus::GraphTooSmall, e),
            other => Fail::new(SpStatus::InvalidArgument, other),
        })?;
        let file = InstanceFile {
            instance: ci.instance().clone(),
            provenance: Some(Provenance::Coloring { graph: g, two_color }),
        };
        store(out, SpInstance { file })
    })
}

/// Builds the set-cover reduction of a set system given in text.
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sp_instance_from_setcover_text(text: *const c_char, out: *mut *mut SpInstance) -> SpStatus {
    guard(|| {
        let sc = text::parse_setcover(input(text, "text")?).map_err(parse_fail)?;
        let file = InstanceFile {
            instance: setcover::build_instance(&sc),
            provenance: Some(Provenance::SetCover(sc)),
        };
        store(out, SpInstance { file })
    })
}

/// # Safety
/// `inst` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sp_instance_free(inst: *mut SpInstance) {
    if !inst.is_null() {
        drop(Box::from_raw(inst));
    }
}

/// Returns 0 for a null handle.
///
/// # Safety
/// `inst` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn sp_instance_piece_count(inst: *const SpInstance) -> usize {
    inst.as_ref().map_or(0, |i| i.file.instance.len())
}

/// Returns 0 for a null handle.
///
/// # Safety
/// `inst` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn sp_instance_total_cells(inst: *const SpInstance) -> usize {
    inst.as_ref().map_or(0, |i| i.file.instance.total_cells())
}

/// Serializes the instance, provenance header included.
///
/// # Safety
/// `inst` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sp_instance_to_text(inst: *const SpInstance, out: *mut *mut c_char) -> SpStatus {
    guard(|| {
        let i = handle(inst)?;
        if out.is_null() {
            return Err(Fail::new(SpStatus::NullPointer, "output pointer is null"));
        }
        *out = out_string(&text::emit_instance(&i.file.instance, i.file.provenance.as_ref()))?;
        Ok(())
    })
}

/// Solves `inst` with one of the [`SpMode`] values. `timeout_ms == 0` means
/// no limit; `threads == 0` is treated as 1. A timed-out search still
/// succeeds and reports its incumbent, see [`sp_result_timed_out`].
///
/// # Safety
/// `inst` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sp_solve(
    inst: *const SpInstance,
    mode: u32,
    timeout_ms: u64,
    threads: usize,
    out: *mut *mut SpResult,
) -> SpStatus {
    guard(|| {
        let i = handle(inst)?;
        let mode = SpMode::from_raw(mode)
            .ok_or_else(|| Fail::new(SpStatus::InvalidArgument, format!("unknown mode {mode}")))?;
        let opts = RunOptions {
            time_limit: (timeout_ms > 0).then(|| Duration::from_millis(timeout_ms)),
            workers: threads.max(1),
            window: None,
        };
        let outcome = dispatch::run(&i.file, mode, &opts).map_err(|e| match e {
            DispatchError::Provenance(_) => Fail::new(SpStatus::ProvenanceMismatch, e),
            other => Fail::new(SpStatus::SolveFailed, other),
        })?;
        let layout_text = text::emit_layout(&i.file.instance, &outcome.result.layout);
        store(out, SpResult { outcome, layout_text })
    })
}

/// # Safety
/// `res` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn sp_result_size(res: *const SpResult) -> usize {
    res.as_ref().map_or(0, |r| r.outcome.result.size)
}

/// # Safety
/// `res` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn sp_result_optimal(res: *const SpResult) -> bool {
    res.as_ref().is_some_and(|r| r.outcome.result.optimal)
}

/// # Safety
/// `res` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn sp_result_timed_out(res: *const SpResult) -> bool {
    res.as_ref().is_some_and(|r| r.outcome.result.stats.timed_out)
}

/// # Safety
/// `res` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn sp_result_nodes(res: *const SpResult) -> u64 {
    res.as_ref().map_or(0, |r| r.outcome.result.stats.nodes)
}

/// The layout in the text format, one `place <name> <dx> <dy>` line per piece.
///
/// # Safety
/// `res` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sp_result_layout_text(res: *const SpResult, out: *mut *mut c_char) -> SpStatus {
    guard(|| {
        let r = handle(res)?;
        if out.is_null() {
            return Err(Fail::new(SpStatus::NullPointer, "output pointer is null"));
        }
        *out = out_string(&r.layout_text)?;
        Ok(())
    })
}

/// # Safety
/// `res` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sp_result_free(res: *mut SpResult) {
    if !res.is_null() {
        drop(Box::from_raw(res));
    }
}

/// # Safety
/// `s` must be null or a string returned by this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sp_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Counts the offsets at which `piece` embeds in `container`; both are
/// polyomino texts.
///
/// # Safety
/// Both strings must be NUL-terminated; `count` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sp_is_superpolyomino(
    container: *const c_char,
    piece: *const c_char,
    count: *mut usize,
) -> SpStatus {
    guard(|| {
        let c = text::parse_polyomino(input(container, "container")?).map_err(parse_fail)?;
        let p = text::parse_polyomino(input(piece, "piece")?).map_err(parse_fail)?;
        if count.is_null() {
            return Err(Fail::new(SpStatus::NullPointer, "count is null"));
        }
        *count = is_superpolyomino(&c, &p).len();
        Ok(())
    })
}
