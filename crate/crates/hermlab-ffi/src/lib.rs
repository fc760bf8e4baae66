//! C ABI for the hermlab engine.
//!
//! The surface is a small set of functions over two owned object kinds:
//! opaque manifold handles (`HermlabManifold`) and NUL-terminated JSON
//! strings allocated by this library (free them with
//! [`hermlab_string_free`]). Every function returns a status code; output
//! parameters are written only on `Ok`. The generated header lives at
//! `include/hermlab.h`.

use hermlab::cli::{self, ManifoldInput, Suite};
use hermlab::search::SearchOptions;
use std::ffi::{c_char, c_int, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

/// Status codes returned by every entry point.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HermlabStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    /// Parse or validation failure; the error string has details.
    InvalidInput = 3,
    UnknownName = 4,
    /// The search terminated without reaching the residual tolerance.
    SearchDidNotConverge = 5,
    InternalError = 6,
}

/// Opaque handle to a parsed and validated manifold (coframe structure
/// constants plus Hermitian metric).
pub struct HermlabManifold {
    input: ManifoldInput,
}

fn string_out(s: String, out: *mut *mut c_char) -> HermlabStatus {
    match CString::new(s) {
        Ok(c) => {
            unsafe { *out = c.into_raw() };
            HermlabStatus::Ok
        }
        Err(_) => HermlabStatus::InternalError,
    }
}

fn set_error(err: *mut *mut c_char, message: &str) {
    if !err.is_null() {
        if let Ok(c) = CString::new(message) {
            unsafe { *err = c.into_raw() };
        }
    }
}

unsafe fn read_str<'a>(p: *const c_char) -> Result<&'a str, HermlabStatus> {
    if p.is_null() {
        return Err(HermlabStatus::NullArgument);
    }
    CStr::from_ptr(p).to_str().map_err(|_| HermlabStatus::InvalidUtf8)
}

fn guarded(f: impl FnOnce() -> HermlabStatus) -> HermlabStatus {
    catch_unwind(AssertUnwindSafe(f)).unwrap_or(HermlabStatus::InternalError)
}

fn effective_tol(tol: f64) -> f64 {
    if tol > 0.0 {
        tol
    } else {
        cli::default_tol()
    }
}

/// Library version as a static string; do not free.
#[no_mangle]
pub extern "C" fn hermlab_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Frees a string allocated by this library. Null is a no-op.
///
/// # Safety
/// `s` must be null or a pointer obtained from this library's string
/// outputs, passed at most once.
#[no_mangle]
pub unsafe extern "C" fn hermlab_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses a manifold spec from JSON text. On success writes a handle the
/// caller must release with [`hermlab_manifold_free`]; on `InvalidInput`
/// writes a diagnostic into `err` (if non-null, free with
/// [`hermlab_string_free`]).
///
/// # Safety
/// `json` must be null or a valid NUL-terminated string; `out` and `err`
/// must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn hermlab_manifold_parse_json(
    json: *const c_char,
    out: *mut *mut HermlabManifold,
    err: *mut *mut c_char,
) -> HermlabStatus {
    guarded(|| {
        if out.is_null() {
            return HermlabStatus::NullArgument;
        }
        let text = match read_str(json) {
            Ok(s) => s,
            Err(st) => return st,
        };
        match cli::parse_spec_str(text, std::path::Path::new("<ffi>"), cli::default_tol()) {
            Ok(input) => {
                *out = Box::into_raw(Box::new(HermlabManifold { input }));
                HermlabStatus::Ok
            }
            Err(e) => {
                set_error(err, &e.to_string());
                HermlabStatus::InvalidInput
            }
        }
    })
}

/// Builds a handle from a bundled catalog entry (see `hermlab catalog list`).
///
/// # Safety
/// `name` must be null or a valid NUL-terminated string; `out` must be
/// null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn hermlab_manifold_from_catalog(
    name: *const c_char,
    out: *mut *mut HermlabManifold,
) -> HermlabStatus {
    guarded(|| {
        if out.is_null() {
            return HermlabStatus::NullArgument;
        }
        let name = match read_str(name) {
            Ok(s) => s,
            Err(st) => return st,
        };
        match hermlab::catalog::get(name) {
            Ok(e) => {
                let input = ManifoldInput {
                    name: e.name.to_string(),
                    algebra: e.algebra,
                    metric: e.metric,
                };
                *out = Box::into_raw(Box::new(HermlabManifold { input }));
                HermlabStatus::Ok
            }
            Err(_) => HermlabStatus::UnknownName,
        }
    })
}

/// Releases a manifold handle. Null is a no-op.
///
/// # Safety
/// `m` must be null or a handle from this library, passed at most once.
#[no_mangle]
pub unsafe extern "C" fn hermlab_manifold_free(m: *mut HermlabManifold) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// Complex dimension of the coframe, or -1 for a null handle.
///
/// # Safety
/// `m` must be null or a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn hermlab_manifold_dim(m: *const HermlabManifold) -> c_int {
    if m.is_null() {
        return -1;
    }
    (*m).input.algebra.dim() as c_int
}

/// Serializes the manifold back to spec-file JSON.
///
/// # Safety
/// `m` must be null or a live handle; `out` null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn hermlab_manifold_export_json(
    m: *const HermlabManifold,
    out: *mut *mut c_char,
) -> HermlabStatus {
    guarded(|| {
        if m.is_null() || out.is_null() {
            return HermlabStatus::NullArgument;
        }
        let input = &(*m).input;
        string_out(cli::export_spec(&input.name, &input.algebra, &input.metric), out)
    })
}

/// Runs the full pipeline and writes the report as JSON. `tol <= 0` selects
/// the default tolerance.
///
/// # Safety
/// `m` must be null or a live handle; `out` null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn hermlab_inspect_json(
    m: *const HermlabManifold,
    tol: f64,
    out: *mut *mut c_char,
) -> HermlabStatus {
    guarded(|| {
        if m.is_null() || out.is_null() {
            return HermlabStatus::NullArgument;
        }
        let tol = effective_tol(tol);
        match cli::analyze(&(*m).input, tol, None) {
            Ok(report) => match serde_json::to_string_pretty(&report) {
                Ok(js) => string_out(js, out),
                Err(_) => HermlabStatus::InternalError,
            },
            Err(_) => HermlabStatus::InvalidInput,
        }
    })
}

/// Verifies one identity suite (`"all"`, `"structure"`, `"lemma2"`,
/// `"skl"`, or `"surface"`; null means `"all"`). Writes true into
/// `out_all_pass` iff every applicable check passes.
///
/// # Safety
/// `m` must be null or a live handle; `suite` null or a valid
/// NUL-terminated string; `out_all_pass` null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn hermlab_verify(
    m: *const HermlabManifold,
    suite: *const c_char,
    tol: f64,
    out_all_pass: *mut bool,
) -> HermlabStatus {
    guarded(|| {
        if m.is_null() || out_all_pass.is_null() {
            return HermlabStatus::NullArgument;
        }
        let suite = if suite.is_null() {
            Suite::All
        } else {
            match read_str(suite).map(Suite::parse) {
                Ok(Ok(s)) => s,
                Ok(Err(_)) => return HermlabStatus::InvalidInput,
                Err(st) => return st,
            }
        };
        let tol = effective_tol(tol);
        match cli::analyze(&(*m).input, tol, None) {
            Ok(report) => {
                let (code, _) = cli::verify_report(&report, suite);
                *out_all_pass = code == cli::EXIT_OK;
                HermlabStatus::Ok
            }
            Err(_) => HermlabStatus::InvalidInput,
        }
    })
}

/// Runs the Kaehler-like metric search from the handle's metric. Writes the
/// report JSON (with the embedded trace) and whether the search converged;
/// returns `SearchDidNotConverge` when it stalled or hit the iteration cap,
/// with the outputs still populated. `max_iter = 0`, `residual_tol <= 0`,
/// or `step_tol <= 0` select the defaults.
///
/// # Safety
/// `m` must be null or a live handle; `out_report` and `out_converged`
/// null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn hermlab_search_json(
    m: *const HermlabManifold,
    max_iter: usize,
    seed: u64,
    residual_tol: f64,
    step_tol: f64,
    out_report: *mut *mut c_char,
    out_converged: *mut bool,
) -> HermlabStatus {
    guarded(|| {
        if m.is_null() || out_report.is_null() || out_converged.is_null() {
            return HermlabStatus::NullArgument;
        }
        let defaults = SearchOptions::default();
        let opts = SearchOptions {
            max_iter: if max_iter == 0 { defaults.max_iter } else { max_iter },
            seed,
            residual_tol: if residual_tol > 0.0 { residual_tol } else { defaults.residual_tol },
            step_tol: if step_tol > 0.0 { step_tol } else { defaults.step_tol },
        };
        match cli::run_search(&(*m).input, &opts, cli::default_tol()) {
            Ok(outcome) => {
                let converged = cli::search_exit_code(outcome.trace.status) == cli::EXIT_OK;
                *out_converged = converged;
                match serde_json::to_string_pretty(&outcome.report) {
                    Ok(js) => {
                        let st = string_out(js, out_report);
                        if st != HermlabStatus::Ok {
                            return st;
                        }
                        if converged {
                            HermlabStatus::Ok
                        } else {
                            HermlabStatus::SearchDidNotConverge
                        }
                    }
                    Err(_) => HermlabStatus::InternalError,
                }
            }
            Err(_) => HermlabStatus::InvalidInput,
        }
    })
}
