//! C ABI for whittaker-lab.
//!
//! Every fallible call returns a [`WlStatus`]; on failure the message is
//! available from [`wl_last_error`] on the same thread. Strings handed out by
//! the library must be released with [`wl_string_free`], handles with their
//! matching `_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use whittaker_lab::cli::config::{RawConfig, RunConfig};
use whittaker_lab::error::Error;
use whittaker_lab::glmod::{GlModule, ModuleSpec};
use whittaker_lab::poly::Poly;
use whittaker_lab::weyl::WhittakerType;
use whittaker_lab::whittaker::TensorModule;
use whittaker_lab::witt::WittElement;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WlStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    InvalidConfig = 4,
    SingularType = 5,
    TruncationTooSmall = 6,
    InvalidModule = 7,
    DimensionMismatch = 8,
    /// The task ran but at least one of its checks failed.
    ChecksFailed = 9,
    Panic = 10,
    Other = 11,
}

/// Opaque handle to a finite-dimensional `gl_n`-module.
pub struct WlGlModule(GlModule);

/// Opaque handle to a tensor module `A_n^a ⊗ V`.
pub struct WlTensorModule(TensorModule);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

fn status_of(e: &Error) -> WlStatus {
    match e {
        Error::Parse { .. } => WlStatus::ParseError,
        Error::Config(_) | Error::Io(_) => WlStatus::InvalidConfig,
        Error::SingularType(_) => WlStatus::SingularType,
        Error::TruncationTooSmall { .. } => WlStatus::TruncationTooSmall,
        Error::InvalidModule(_) | Error::ExteriorOutOfRange { .. } => WlStatus::InvalidModule,
        Error::DimensionMismatch { .. } | Error::AxisOutOfRange { .. } => WlStatus::DimensionMismatch,
        _ => WlStatus::Other,
    }
}

struct Failure(WlStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(status_of(&e), e.to_string())
    }
}

/// Runs `f`, turning errors and panics into a status plus message.
fn guard(f: impl FnOnce() -> Result<WlStatus, Failure>) -> WlStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(status)) => status,
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            WlStatus::Panic
        }
    }
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure(WlStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure(WlStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

fn check_out<T>(p: *mut T, what: &str) -> Result<(), Failure> {
    if p.is_null() {
        Err(Failure(WlStatus::NullPointer, format!("{what} is null")))
    } else {
        Ok(())
    }
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).expect("nul bytes removed").into_raw()
}

/// Library version as a static string; do not free.
#[no_mangle]
pub extern "C" fn wl_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message of the last failed call on this thread, or null. Valid until the
/// next call into the library on this thread; do not free.
#[no_mangle]
pub extern "C" fn wl_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Releases a string returned by the library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn wl_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Builds a module from `trivial`, `natural`, `exterior:k` or a JSON description.
///
/// # Safety
/// `spec` must be a valid C string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn wl_gl_module_new(n: usize, spec: *const c_char, out: *mut *mut WlGlModule) -> WlStatus {
    guard(|| {
        check_out(out, "out")?;
        let spec: ModuleSpec = text(spec, "spec")?.parse()?;
        let module = spec.build(n)?;
        *out = Box::into_raw(Box::new(WlGlModule(module)));
        Ok(WlStatus::Ok)
    })
}

/// Dimension of the module, or 0 for a null handle.
///
/// # Safety
/// `module` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn wl_gl_module_dim(module: *const WlGlModule) -> usize {
    module.as_ref().map_or(0, |m| m.0.dim())
}

/// # Safety
/// `module` must be null or a live handle; it is invalid afterwards.
#[no_mangle]
pub unsafe extern "C" fn wl_gl_module_free(module: *mut WlGlModule) {
    if !module.is_null() {
        drop(Box::from_raw(module));
    }
}

/// Builds `A_n^a ⊗ V` with `a` given as `"1,1/2"`; `module` is copied.
///
/// # Safety
/// `a` must be a valid C string, `module` a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn wl_tensor_module_new(
    a: *const c_char,
    module: *const WlGlModule,
    out: *mut *mut WlTensorModule,
) -> WlStatus {
    guard(|| {
        check_out(out, "out")?;
        let a = WhittakerType::parse(text(a, "a")?)?;
        let v = module
            .as_ref()
            .ok_or_else(|| Failure(WlStatus::NullPointer, "module is null".into()))?;
        let t = TensorModule::new(a, v.0.clone())?;
        *out = Box::into_raw(Box::new(WlTensorModule(t)));
        Ok(WlStatus::Ok)
    })
}

/// # Safety
/// `module` must be null or a live handle; it is invalid afterwards.
#[no_mangle]
pub unsafe extern "C" fn wl_tensor_module_free(module: *mut WlTensorModule) {
    if !module.is_null() {
        drop(Box::from_raw(module));
    }
}

/// Dimension of the Whittaker vectors in the degree-`degree` truncation.
///
/// # Safety
/// `module` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn wl_tensor_module_whittaker_dim(
    module: *const WlTensorModule,
    degree: u32,
    out: *mut usize,
) -> WlStatus {
    guard(|| {
        check_out(out, "out")?;
        let m = module
            .as_ref()
            .ok_or_else(|| Failure(WlStatus::NullPointer, "module is null".into()))?;
        *out = m.0.whittaker_vectors(degree)?.dim();
        Ok(WlStatus::Ok)
    })
}

/// Decomposes `poly ⊗ v_component` (1-based) in the free basis and writes
/// the coefficients as a JSON array of `{h_exponent, basis_index, coeff}`.
///
/// # Safety
/// `module` must be a live handle, `poly` a valid C string and `out_json`
/// writable. Free the result with [`wl_string_free`].
#[no_mangle]
pub unsafe extern "C" fn wl_tensor_module_decompose(
    module: *const WlTensorModule,
    poly: *const c_char,
    component: usize,
    out_json: *mut *mut c_char,
) -> WlStatus {
    guard(|| {
        check_out(out_json, "out_json")?;
        let m = &module
            .as_ref()
            .ok_or_else(|| Failure(WlStatus::NullPointer, "module is null".into()))?
            .0;
        let f = Poly::parse(m.n(), text(poly, "poly")?)?;
        if component == 0 || component > m.dim() {
            return Err(Error::DimensionMismatch {
                expected: m.dim(),
                found: component,
            }
            .into());
        }
        let w = m.a_act(&f, &m.whittaker_generator(component - 1))?;
        let coeffs = m.whittaker_decompose(&w)?;
        let json = serde_json::to_string(&coeffs).expect("coefficients serialize");
        *out_json = into_c_string(json);
        Ok(WlStatus::Ok)
    })
}

/// Bracket of two vector fields written like `"t1^2*d1 + 3*d2"`.
///
/// # Safety
/// `x`, `y` must be valid C strings and `out` writable. Free the result
/// with [`wl_string_free`].
#[no_mangle]
pub unsafe extern "C" fn wl_witt_bracket(
    n: usize,
    x: *const c_char,
    y: *const c_char,
    out: *mut *mut c_char,
) -> WlStatus {
    guard(|| {
        check_out(out, "out")?;
        let x = WittElement::parse(n, text(x, "x")?)?;
        let y = WittElement::parse(n, text(y, "y")?)?;
        *out = into_c_string(x.bracket(&y)?.to_string());
        Ok(WlStatus::Ok)
    })
}

/// Runs a task from a JSON config (the same keys as the TOML config file)
/// and writes the JSON report. The report is written whenever the task
/// ran, including when it returns [`WlStatus::ChecksFailed`].
///
/// # Safety
/// `config_json` must be a valid C string and `out_report` writable. Free
/// the result with [`wl_string_free`].
#[no_mangle]
pub unsafe extern "C" fn wl_run_task(config_json: *const c_char, out_report: *mut *mut c_char) -> WlStatus {
    guard(|| {
        check_out(out_report, "out_report")?;
        let raw = RawConfig::from_json(text(config_json, "config_json")?)?;
        let config = RunConfig::resolve(raw)?;
        let report = whittaker_lab::cli::run(&config)?;
        *out_report = into_c_string(report.to_json());
        Ok(if report.passed { WlStatus::Ok } else { WlStatus::ChecksFailed })
    })
}
