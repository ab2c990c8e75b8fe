//! C ABI over `tropgal`.
//!
//! Every function returns a [`TgStatus`]; on failure the message is available
//! from [`tg_last_error_message`] on the same thread. Strings handed out are
//! owned by the caller and released with [`tg_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use tropgal::excision::ExcisionHistory;
use tropgal::galaxy::{build_galaxy, pairing_table, Galaxy};
use tropgal::intersect::{realization_number, stable_pairing};
use tropgal::multigraph::{laman_db, SimpleGraph};
use tropgal::{Error, LabelSet};

/// Opaque simple graph.
pub struct TgGraph(SimpleGraph);

/// Opaque galaxy.
pub struct TgGalaxy(Galaxy);

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TgStatus {
    Ok = 0,
    NullPointer,
    InvalidUtf8,
    InvalidGraph,
    InvalidMove,
    NotFound,
    Excision,
    Precondition,
    RankGap,
    NotACone,
    Codimension,
    NotFullRank,
    Genericity,
    NotLaman,
    Internal,
    Parse,
    Io,
    Json,
    Panic,
}

impl From<&Error> for TgStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::InvalidGraph(_) => TgStatus::InvalidGraph,
            Error::InvalidMove { .. } => TgStatus::InvalidMove,
            Error::NotFound(_) => TgStatus::NotFound,
            Error::Excision(_) => TgStatus::Excision,
            Error::Precondition(_) => TgStatus::Precondition,
            Error::RankGap { .. } => TgStatus::RankGap,
            Error::NotACone(_) => TgStatus::NotACone,
            Error::Dimension(_) => TgStatus::Codimension,
            Error::NotFullRank { .. } => TgStatus::NotFullRank,
            Error::Genericity { .. } => TgStatus::Genericity,
            Error::NotLaman => TgStatus::NotLaman,
            Error::Internal(_) => TgStatus::Internal,
            Error::Parse(_) => TgStatus::Parse,
            Error::Io(_) => TgStatus::Io,
            Error::Json(_) => TgStatus::Json,
        }
    }
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

struct Fail(TgStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(TgStatus::from(&e), e.to_string())
    }
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> TgStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => TgStatus::Ok,
        Ok(Err(Fail(s, msg))) => {
            set_error(msg);
            s
        }
        Err(_) => {
            set_error("panic inside tropgal".into());
            TgStatus::Panic
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(Fail(TgStatus::NullPointer, "null string argument".into()));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|e| Fail(TgStatus::InvalidUtf8, e.to_string()))
}

unsafe fn ref_arg<'a, T>(p: *const T) -> Result<&'a T, Fail> {
    p.as_ref()
        .ok_or_else(|| Fail(TgStatus::NullPointer, "null handle".into()))
}

unsafe fn write_out<T>(out: *mut T, v: T) -> Result<(), Fail> {
    if out.is_null() {
        return Err(Fail(TgStatus::NullPointer, "null output pointer".into()));
    }
    out.write(v);
    Ok(())
}

fn c_string(s: String) -> Result<*mut c_char, Fail> {
    CString::new(s)
        .map(CString::into_raw)
        .map_err(|e| Fail(TgStatus::Internal, e.to_string()))
}

fn history(g: &SimpleGraph, json: &str) -> Result<ExcisionHistory, Fail> {
    let v: Vec<Vec<usize>> = serde_json::from_str(json).map_err(Error::from)?;
    let sets = v
        .into_iter()
        .map(LabelSet::try_from_labels)
        .collect::<Result<Vec<_>, _>>()?;
    Ok(ExcisionHistory::apply(&g.to_multigraph(), &sets)?)
}

/// Message of the last failed call on this thread, or null. Valid until the
/// next failing call on this thread.
#[no_mangle]
pub extern "C" fn tg_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// # Safety
/// `s` must come from this library or be null.
#[no_mangle]
pub unsafe extern "C" fn tg_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses `{"n": .., "edges": [[u, v], ..]}`.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tg_graph_from_json(json: *const c_char, out: *mut *mut TgGraph) -> TgStatus {
    guard(|| {
        let g: SimpleGraph = serde_json::from_str(str_arg(json)?).map_err(Error::from)?;
        write_out(out, Box::into_raw(Box::new(TgGraph(g))))
    })
}

/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tg_graph_laman_db(n: usize, index: usize, out: *mut *mut TgGraph) -> TgStatus {
    guard(|| write_out(out, Box::into_raw(Box::new(TgGraph(laman_db(n, index)?)))))
}

/// # Safety
/// `g` must come from this library or be null.
#[no_mangle]
pub unsafe extern "C" fn tg_graph_free(g: *mut TgGraph) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// # Safety
/// `g` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tg_graph_to_json(g: *const TgGraph, out: *mut *mut c_char) -> TgStatus {
    guard(|| {
        let s = serde_json::to_string(&ref_arg(g)?.0).map_err(Error::from)?;
        write_out(out, c_string(s)?)
    })
}

/// # Safety
/// `g` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tg_graph_is_laman(g: *const TgGraph, out: *mut bool) -> TgStatus {
    guard(|| write_out(out, ref_arg(g)?.0.is_laman()))
}

/// # Safety
/// `g` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tg_realization_number(g: *const TgGraph, seed: u64, out: *mut u64) -> TgStatus {
    guard(|| write_out(out, realization_number(&ref_arg(g)?.0, seed)?))
}

/// Applies an excision history such as `[[1],[2,3]]` and returns the
/// resulting multigraph as JSON.
///
/// # Safety
/// `g` must be a live handle, `history_json` NUL-terminated, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn tg_excise(
    g: *const TgGraph,
    history_json: *const c_char,
    out: *mut *mut c_char,
) -> TgStatus {
    guard(|| {
        let h = history(&ref_arg(g)?.0, str_arg(history_json)?)?;
        let s = serde_json::to_string(h.result()).map_err(Error::from)?;
        write_out(out, c_string(s)?)
    })
}

/// Galactic pairing of two excision histories; writes the value and, when
/// `result_json` is non-null, the full certificate.
///
/// # Safety
/// `g` must be a live handle, histories NUL-terminated, `value` writable.
#[no_mangle]
pub unsafe extern "C" fn tg_pairing(
    g: *const TgGraph,
    history_a: *const c_char,
    history_b: *const c_char,
    seed: u64,
    value: *mut u64,
    result_json: *mut *mut c_char,
) -> TgStatus {
    guard(|| {
        let g = &ref_arg(g)?.0;
        let a = history(g, str_arg(history_a)?)?;
        let b = history(g, str_arg(history_b)?)?;
        let r = stable_pairing(a.result(), b.result(), seed)?;
        write_out(value, r.value)?;
        if !result_json.is_null() {
            let s = serde_json::to_string(&r).map_err(Error::from)?;
            result_json.write(c_string(s)?);
        }
        Ok(())
    })
}

/// Builds the galaxy; a negative `max_depth` means unbounded.
///
/// # Safety
/// `g` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tg_galaxy_build(
    g: *const TgGraph,
    max_depth: i64,
    out: *mut *mut TgGalaxy,
) -> TgStatus {
    guard(|| {
        let depth = usize::try_from(max_depth).ok();
        let gal = build_galaxy(&ref_arg(g)?.0, depth)?;
        write_out(out, Box::into_raw(Box::new(TgGalaxy(gal))))
    })
}

/// # Safety
/// `gal` must come from this library or be null.
#[no_mangle]
pub unsafe extern "C" fn tg_galaxy_free(gal: *mut TgGalaxy) {
    if !gal.is_null() {
        drop(Box::from_raw(gal));
    }
}

/// # Safety
/// `gal` must be a live handle; outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn tg_galaxy_counts(
    gal: *const TgGalaxy,
    nodes: *mut usize,
    edges: *mut usize,
) -> TgStatus {
    guard(|| {
        let gal = &ref_arg(gal)?.0;
        write_out(nodes, gal.len())?;
        write_out(edges, gal.edges().len())
    })
}

/// # Safety
/// `gal` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tg_galaxy_to_dot(gal: *const TgGalaxy, out: *mut *mut c_char) -> TgStatus {
    guard(|| write_out(out, c_string(ref_arg(gal)?.0.to_dot())?))
}

/// # Safety
/// `gal` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tg_galaxy_to_json(gal: *const TgGalaxy, out: *mut *mut c_char) -> TgStatus {
    guard(|| {
        let s = serde_json::to_string(&ref_arg(gal)?.0).map_err(Error::from)?;
        write_out(out, c_string(s)?)
    })
}

/// Pairing table as CSV; a null `base_key` selects the root.
///
/// # Safety
/// `gal` must be a live handle, `base_key` null or NUL-terminated, `out`
/// writable.
#[no_mangle]
pub unsafe extern "C" fn tg_galaxy_pairing_table(
    gal: *const TgGalaxy,
    base_key: *const c_char,
    use_shortcuts: bool,
    seed: u64,
    out: *mut *mut c_char,
) -> TgStatus {
    guard(|| {
        let gal = &ref_arg(gal)?.0;
        let key = if base_key.is_null() {
            gal.root_key().clone()
        } else {
            str_arg(base_key)?.parse()?
        };
        let cfg = tropgal::intersect::PairingConfig::with_seed(seed);
        let t = pairing_table(gal, &key, use_shortcuts, &cfg)?;
        write_out(out, c_string(t.to_csv())?)
    })
}
