//! C ABI for `braidosc`.
//!
//! Every function returns a status code; `BRAIDOSC_OK` is zero. On failure
//! `braidosc_last_error` returns a message for the calling thread. Strings
//! handed out by the library are released with `braidosc_string_free`, and
//! matrix handles with `braidosc_matrices_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use braidosc::braid::{build_matrix, Backend, BuildOptions, BuiltMatrices, Route};
use braidosc::config::Tolerances;
use braidosc::oscillator::{LabelSet, RepLabel};
use braidosc::verify::{self, Suite};
use braidosc::weightspace::counts;
use braidosc::Error;

pub const BRAIDOSC_OK: i32 = 0;
/// A required pointer argument was null.
pub const BRAIDOSC_ERR_NULL: i32 = 1;
/// Invalid parameters or an unsupported combination of options.
pub const BRAIDOSC_ERR_INVALID: i32 = 2;
/// A numeric solve or division failed.
pub const BRAIDOSC_ERR_NUMERIC: i32 = 3;
/// A mathematical invariant failed.
pub const BRAIDOSC_ERR_INVARIANT: i32 = 4;
/// Generator index or buffer length out of range.
pub const BRAIDOSC_ERR_RANGE: i32 = 5;
/// The operation needs the numeric backend.
pub const BRAIDOSC_ERR_BACKEND: i32 = 6;
/// A Rust panic was caught at the boundary.
pub const BRAIDOSC_ERR_PANIC: i32 = 7;
/// I/O or serialization failure.
pub const BRAIDOSC_ERR_IO: i32 = 8;

pub const BRAIDOSC_BACKEND_NUMERIC: u32 = 0;
pub const BRAIDOSC_BACKEND_EXACT: u32 = 1;

pub const BRAIDOSC_ROUTE_DIRECT: u32 = 0;
pub const BRAIDOSC_ROUTE_REWRITE: u32 = 1;
pub const BRAIDOSC_ROUTE_CLOSED_FORM: u32 = 2;

/// Opaque family of generator matrices.
pub struct BraidoscMatrices {
    inner: BuiltMatrices,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn code_of(e: &Error) -> i32 {
    match e {
        Error::Singular(_) | Error::DivisionByZero(_) => BRAIDOSC_ERR_NUMERIC,
        Error::RouteDisagreement(_) | Error::DimensionMismatch { .. } | Error::InexactDivision(_) => {
            BRAIDOSC_ERR_INVARIANT
        }
        Error::Io(_) | Error::Json(_) => BRAIDOSC_ERR_IO,
        _ => BRAIDOSC_ERR_INVALID,
    }
}

struct Failure(i32, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(code_of(&e), e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(BRAIDOSC_ERR_NULL, format!("{what} is null"))
}

/// Runs `f`, converting errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> i32 {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            BRAIDOSC_OK
        }
        Ok(Err(Failure(code, msg))) => {
            set_error(&msg);
            code
        }
        Err(_) => {
            set_error("panic inside braidosc");
            BRAIDOSC_ERR_PANIC
        }
    }
}

fn to_c_string(s: String, out: *mut *mut c_char) -> Result<(), Failure> {
    let c = CString::new(s).map_err(|_| Failure(BRAIDOSC_ERR_IO, "string contains a nul byte".into()))?;
    // SAFETY: `out` was checked non-null by the caller.
    unsafe { *out = c.into_raw() };
    Ok(())
}

/// Message for the last failed call on this thread; empty after a success.
/// The pointer stays valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn braidosc_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn braidosc_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn braidosc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Weight-space dimension per sector and lowest-weight dimension at level `total`.
///
/// # Safety
/// `weight_dim` and `lowest_dim` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn braidosc_counts(n: usize, total: u32, weight_dim: *mut u64, lowest_dim: *mut u64) -> i32 {
    guard(|| {
        if weight_dim.is_null() || lowest_dim.is_null() {
            return Err(null("output pointer"));
        }
        let c = counts(n, total)?;
        let low = *c.lowest.last().unwrap_or(&0);
        let fit =
            |v: u128| u64::try_from(v).map_err(|_| Failure(BRAIDOSC_ERR_RANGE, "dimension exceeds 64 bits".into()));
        *weight_dim = fit(c.weight_dim)?;
        *lowest_dim = fit(low)?;
        Ok(())
    })
}

/// Builds `sigma_1 .. sigma_{n-1}` at level `total` for slot labels
/// `(gammas[i], cs[i])`, `i < n`. `q` is ignored by the exact backend.
/// `inverse` and `raw` are booleans (nonzero is true).
///
/// # Safety
/// `gammas` and `cs` must point to `n` doubles; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn braidosc_matrices_build(
    n: usize,
    total: u32,
    gammas: *const f64,
    cs: *const f64,
    q: f64,
    backend: u32,
    route: u32,
    inverse: i32,
    raw: i32,
    out: *mut *mut BraidoscMatrices,
) -> i32 {
    guard(|| {
        if gammas.is_null() || cs.is_null() {
            return Err(null("label array"));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        let g = std::slice::from_raw_parts(gammas, n);
        let c = std::slice::from_raw_parts(cs, n);
        let slots = g.iter().zip(c).map(|(&g, &c)| RepLabel::new(g, c)).collect::<braidosc::Result<Vec<_>>>()?;
        let labels = LabelSet::new(&slots)?;
        let backend = match backend {
            BRAIDOSC_BACKEND_NUMERIC => Backend::Numeric { q },
            BRAIDOSC_BACKEND_EXACT => Backend::Exact,
            b => return Err(Failure(BRAIDOSC_ERR_INVALID, format!("unknown backend {b}"))),
        };
        let route = match route {
            BRAIDOSC_ROUTE_DIRECT => Route::Direct,
            BRAIDOSC_ROUTE_REWRITE => Route::Rewrite,
            BRAIDOSC_ROUTE_CLOSED_FORM => Route::ClosedForm,
            r => return Err(Failure(BRAIDOSC_ERR_INVALID, format!("unknown route {r}"))),
        };
        let opts = BuildOptions { route, inverse: inverse != 0, raw: raw != 0, ..Default::default() };
        let inner = build_matrix(&labels, total, backend, opts, &Tolerances::default())?;
        *out = Box::into_raw(Box::new(BraidoscMatrices { inner }));
        Ok(())
    })
}

/// Releases a handle. Null is ignored.
///
/// # Safety
/// `m` must come from `braidosc_matrices_build` and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn braidosc_matrices_free(m: *mut BraidoscMatrices) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// Basis dimension and number of generators.
///
/// # Safety
/// `m` must be a live handle; `dim` and `generators` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn braidosc_matrices_shape(
    m: *const BraidoscMatrices,
    dim: *mut usize,
    generators: *mut usize,
) -> i32 {
    guard(|| {
        let m = m.as_ref().ok_or_else(|| null("handle"))?;
        if dim.is_null() || generators.is_null() {
            return Err(null("output pointer"));
        }
        *dim = m.inner.dim();
        *generators = m.inner.generators();
        Ok(())
    })
}

/// Copies the row-major entries of generator `index` (1-based) into `buf`,
/// which holds `len >= dim * dim` doubles. Numeric backend only.
///
/// # Safety
/// `m` must be a live handle; `buf` must be valid for `len` writes.
#[no_mangle]
pub unsafe extern "C" fn braidosc_matrices_entries(
    m: *const BraidoscMatrices,
    index: usize,
    buf: *mut f64,
    len: usize,
) -> i32 {
    guard(|| {
        let m = m.as_ref().ok_or_else(|| null("handle"))?;
        if buf.is_null() {
            return Err(null("buffer"));
        }
        let BuiltMatrices::Numeric(fam) = &m.inner else {
            return Err(Failure(BRAIDOSC_ERR_BACKEND, "exact entries are available as JSON only".into()));
        };
        let g = fam.generator(index).map_err(|e| Failure(BRAIDOSC_ERR_RANGE, e.to_string()))?;
        let need = g.rows() * g.cols();
        if len < need {
            return Err(Failure(BRAIDOSC_ERR_RANGE, format!("buffer holds {len} entries, {need} needed")));
        }
        let out = std::slice::from_raw_parts_mut(buf, need);
        for i in 0..g.rows() {
            for j in 0..g.cols() {
                out[i * g.cols() + j] = *g.get(i, j);
            }
        }
        Ok(())
    })
}

/// Canonical JSON document of the family. Free with `braidosc_string_free`.
///
/// # Safety
/// `m` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn braidosc_matrices_to_json(m: *const BraidoscMatrices, out: *mut *mut c_char) -> i32 {
    guard(|| {
        let m = m.as_ref().ok_or_else(|| null("handle"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        let s = serde_json::to_string(&m.inner.to_json(None)).map_err(Error::from)?;
        to_c_string(s, out)
    })
}

/// Runs a verification suite (`"algebra"`, `"spaces"`, `"braid"` or
/// `"all"`). `passed` receives 1 or 0; `report`, if non-null, receives the
/// JSON report. A failing suite is not an error.
///
/// # Safety
/// `suite` must be a nul-terminated string; `passed` must be valid for
/// writes; `report` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn braidosc_verify(
    suite: *const c_char,
    seed: u64,
    passed: *mut i32,
    report: *mut *mut c_char,
) -> i32 {
    guard(|| {
        if suite.is_null() {
            return Err(null("suite"));
        }
        if passed.is_null() {
            return Err(null("passed"));
        }
        let name = CStr::from_ptr(suite)
            .to_str()
            .map_err(|_| Failure(BRAIDOSC_ERR_INVALID, "suite name is not UTF-8".into()))?;
        let suite: Suite = name.parse()?;
        let reports = verify::run(suite, seed, &Tolerances::default());
        let ok = reports.iter().all(|r| r.passed);
        *passed = i32::from(ok);
        if !report.is_null() {
            *report = ptr::null_mut();
            let doc = serde_json::json!({ "seed": seed, "passed": ok, "suites": reports });
            to_c_string(doc.to_string(), report)?;
        }
        Ok(())
    })
}
