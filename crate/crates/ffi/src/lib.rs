//! C interface to the qoresolve engine.
//!
//! Every entry point returns a [`QoStatus`]; on failure the message is kept
//! per thread and can be read with [`qo_last_error`]. Strings handed out by
//! the library must be released with [`qo_string_free`], resolutions with
//! [`qo_resolution_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use qoresolve::cli::{self, CliError, InputSource};
use qoresolve::driver::{self, format_trace, PathSelector, ResolutionTree, ResolveOptions};
use qoresolve::invariant::{compare_invariants, Invariant};
use qoresolve::oracle::{cross_validate, BinomialSurface};
use qoresolve::Error;

/// Result codes shared by every function.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QoStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullArgument = 1,
    /// Malformed or out-of-scope input.
    InvalidInput = 2,
    /// The step cap was reached before every branch resolved.
    StepCapExceeded = 3,
    /// The resolver disagreed with direct substitution.
    Divergence = 4,
    /// Any other failure, including a caught panic.
    Internal = 5,
}

/// Opaque resolution tree.
pub struct QoResolution {
    tree: ResolutionTree,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn clear_last_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

fn status_of(err: &CliError) -> QoStatus {
    match err.exit_code() {
        2 => QoStatus::InvalidInput,
        3 => QoStatus::StepCapExceeded,
        4 => QoStatus::Divergence,
        _ => QoStatus::Internal,
    }
}

/// Runs `body`, converting errors and panics into status codes.
fn guard(body: impl FnOnce() -> Result<(), (QoStatus, String)>) -> QoStatus {
    clear_last_error();
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => QoStatus::Ok,
        Ok(Err((status, message))) => {
            set_last_error(message);
            status
        }
        Err(_) => {
            set_last_error("internal panic".into());
            QoStatus::Internal
        }
    }
}

fn cli_err(e: CliError) -> (QoStatus, String) {
    (status_of(&e), e.to_string())
}

fn core_err(e: Error) -> (QoStatus, String) {
    cli_err(CliError::Resolve(e))
}

fn null(what: &str) -> (QoStatus, String) {
    (QoStatus::NullArgument, format!("{what} is null"))
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, (QoStatus, String)> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p).to_str().map_err(|_| (QoStatus::InvalidInput, format!("{what} is not UTF-8")))
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> Result<(), (QoStatus, String)> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    let c = CString::new(s).map_err(|_| (QoStatus::Internal, "output contains a nul byte".to_string()))?;
    *out = c.into_raw();
    Ok(())
}

fn options_for(input: &InputSource, step_cap: usize) -> ResolveOptions {
    let cap = if step_cap == 0 { cli::suggested_step_cap(input) } else { step_cap };
    ResolveOptions { step_cap: cap, ..ResolveOptions::default() }
}

unsafe fn resolve_into(
    input: InputSource,
    step_cap: usize,
    out: *mut *mut QoResolution,
) -> Result<(), (QoStatus, String)> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    let root = cli::initial_state(&input).map_err(cli_err)?;
    let tree = driver::resolve(&root, options_for(&input, step_cap)).map_err(core_err)?;
    *out = Box::into_raw(Box::new(QoResolution { tree }));
    Ok(())
}

/// Message for the last failed call on this thread, or null. The pointer
/// stays valid until the next library call on the same thread.
#[no_mangle]
pub extern "C" fn qo_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn qo_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn qo_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Resolves the binomial surface z^m + x^a y^b. A `step_cap` of 0 picks a
/// default scaled to the input.
///
/// # Safety
/// `out` must be a valid pointer to writable storage.
#[no_mangle]
pub unsafe extern "C" fn qo_resolve_binomial(
    m: u32,
    a: u32,
    b: u32,
    step_cap: usize,
    out: *mut *mut QoResolution,
) -> QoStatus {
    guard(|| {
        let s = BinomialSurface::new(m, a, b).map_err(|e| (QoStatus::InvalidInput, e.to_string()))?;
        resolve_into(InputSource::Binomial(s), step_cap, out)
    })
}

/// Resolves the surface with multiplicity `m` and pairs written as
/// `"l1,m1;l2,m2"` with rational entries such as `2/3`.
///
/// # Safety
/// `pairs` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qo_resolve_pairs(
    m: u32,
    pairs: *const c_char,
    step_cap: usize,
    out: *mut *mut QoResolution,
) -> QoStatus {
    guard(|| {
        let text = read_str(pairs, "pairs")?;
        let (input, _) = cli::pairs_input(m, cli::parse_pair_list(text).map_err(cli_err)?).map_err(cli_err)?;
        resolve_into(input, step_cap, out)
    })
}

/// Resolves the input described by a JSON document (`{"m":..,"pairs":..}`,
/// `{"binomial":..}` or `{"state":..}`), honoring its `step_cap` key.
///
/// # Safety
/// `document` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qo_resolve_document(document: *const c_char, out: *mut *mut QoResolution) -> QoStatus {
    guard(|| {
        let spec = cli::parse_input(read_str(document, "document")?).map_err(cli_err)?;
        resolve_into(spec.input, spec.step_cap, out)
    })
}

/// Frees a resolution. Null is ignored.
///
/// # Safety
/// `r` must come from a resolve call and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn qo_resolution_free(r: *mut QoResolution) {
    if !r.is_null() {
        drop(Box::from_raw(r));
    }
}

/// Number of distinct chart states in the tree, or 0 for null.
///
/// # Safety
/// `r` must be null or a live resolution.
#[no_mangle]
pub unsafe extern "C" fn qo_resolution_node_count(r: *const QoResolution) -> usize {
    r.as_ref().map_or(0, |r| r.tree.nodes.len())
}

/// Number of root-to-leaf chart sequences, or 0 for null.
///
/// # Safety
/// `r` must be null or a live resolution.
#[no_mangle]
pub unsafe extern "C" fn qo_resolution_path_count(r: *const QoResolution) -> u64 {
    r.as_ref().map_or(0, |r| r.tree.path_count())
}

/// Blow-ups on the longest branch.
///
/// # Safety
/// `r` must be a live resolution; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qo_resolution_longest_path(r: *const QoResolution, out: *mut usize) -> QoStatus {
    guard(|| {
        let r = r.as_ref().ok_or_else(|| null("resolution"))?;
        let out = out.as_mut().ok_or_else(|| null("output pointer"))?;
        *out = r.tree.longest_path().ok_or((QoStatus::Internal, "resolution graph has a cycle".to_string()))?;
        Ok(())
    })
}

/// Invariant of the start state, e.g. `(3,0;2,0;1,0;inf)`.
///
/// # Safety
/// `r` must be a live resolution; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qo_resolution_root_invariant(r: *const QoResolution, out: *mut *mut c_char) -> QoStatus {
    guard(|| {
        let r = r.as_ref().ok_or_else(|| null("resolution"))?;
        let root = r.tree.root().ok_or((QoStatus::Internal, "empty resolution".to_string()))?;
        write_string(out, root.invariant.to_string())
    })
}

/// Text trace of the branches chosen by `path`: `leftmost`, `all`, or a
/// chart list like `x,y,y`. Null means `leftmost`.
///
/// # Safety
/// `r` must be a live resolution; `path` null or nul-terminated; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn qo_resolution_trace(
    r: *const QoResolution,
    path: *const c_char,
    out: *mut *mut c_char,
) -> QoStatus {
    guard(|| {
        let r = r.as_ref().ok_or_else(|| null("resolution"))?;
        let selector = if path.is_null() {
            PathSelector::Leftmost
        } else {
            read_str(path, "path")?.parse().map_err(|e: String| (QoStatus::InvalidInput, e))?
        };
        write_string(out, format_trace(&r.tree, &selector))
    })
}

/// The whole tree as JSON.
///
/// # Safety
/// `r` must be a live resolution; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qo_resolution_json(r: *const QoResolution, out: *mut *mut c_char) -> QoStatus {
    guard(|| {
        let r = r.as_ref().ok_or_else(|| null("resolution"))?;
        write_string(out, cli::emit_json(&r.tree))
    })
}

/// The whole tree in Graphviz DOT syntax.
///
/// # Safety
/// `r` must be a live resolution; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qo_resolution_dot(r: *const QoResolution, out: *mut *mut c_char) -> QoStatus {
    guard(|| {
        let r = r.as_ref().ok_or_else(|| null("resolution"))?;
        write_string(out, cli::emit_dot(&r.tree))
    })
}

/// Checks every chart move for z^m + x^a y^b against direct substitution.
/// Returns `QO_STATUS_DIVERGENCE` on the first disagreement; `edges` (may be
/// null) receives the number of moves checked.
///
/// # Safety
/// `edges` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn qo_validate_binomial(m: u32, a: u32, b: u32, step_cap: usize, edges: *mut usize) -> QoStatus {
    guard(|| {
        let s = BinomialSurface::new(m, a, b).map_err(|e| (QoStatus::InvalidInput, e.to_string()))?;
        let report = cross_validate(&s, options_for(&InputSource::Binomial(s), step_cap)).map_err(core_err)?;
        if let Some(edges) = edges.as_mut() {
            *edges = report.checks.len();
        }
        report.into_result().map(|_| ()).map_err(core_err)
    })
}

/// Compares two invariants written like `(3,0;0)`; `out` receives -1, 0 or 1.
///
/// # Safety
/// `a` and `b` must be nul-terminated; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qo_compare_invariants(a: *const c_char, b: *const c_char, out: *mut i32) -> QoStatus {
    guard(|| {
        let parse = |p, what| -> Result<Invariant, (QoStatus, String)> {
            read_str(p, what)?.parse().map_err(|e: String| (QoStatus::InvalidInput, e))
        };
        let (a, b) = (parse(a, "a")?, parse(b, "b")?);
        let out = out.as_mut().ok_or_else(|| null("output pointer"))?;
        *out = compare_invariants(&a, &b) as i32;
        Ok(())
    })
}
