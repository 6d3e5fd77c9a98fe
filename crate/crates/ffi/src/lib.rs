//! C ABI over `besselmoments`.
//!
//! Contexts are opaque handles created with [`bm_context_new`] and released
//! with [`bm_context_free`]. Every fallible call returns a [`BmStatus`]; on
//! failure [`bm_last_error`] describes the cause. Numbers cross the boundary
//! as decimal strings (plus an `f64` approximation for convenience). Strings
//! handed out by this library must be released with [`bm_string_free`] or,
//! inside a [`BmResult`], with [`bm_result_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use besselmoments::cli::parse_rational;
use besselmoments::exact;
use besselmoments::quadrature::{self, MomentSpec, PvFunction, PvQuery};
use besselmoments::sumrules::{self, Family, SumRuleSpec};
use besselmoments::{BoundedReal, Error, PrecisionContext};
use rug::Float;

/// Status codes returned by every fallible function.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BmStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidInput = 2,
    Divergent = 3,
    Domain = 4,
    Precision = 5,
    VerificationFailed = 6,
    Utf8 = 7,
    Panic = 8,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BmFamily {
    Z = 0,
    Y = 1,
}

/// Opaque precision context.
pub struct BmContext {
    inner: PrecisionContext,
}

/// One numeric result. `exact` is null when there is no reference value;
/// `pass` is -1 when the call is not a check, otherwise 0 or 1.
#[repr(C)]
pub struct BmResult {
    pub value: *mut c_char,
    pub error_bound: *mut c_char,
    pub exact: *mut c_char,
    pub approx: f64,
    pub pass: i32,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn clear_last_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

fn status_of(e: &Error) -> BmStatus {
    if e.is_precision_failure() {
        return BmStatus::Precision;
    }
    match e {
        Error::Divergent { .. } => BmStatus::Divergent,
        Error::Domain(_) | Error::SingularPoint { .. } => BmStatus::Domain,
        Error::Divisibility(_) | Error::ReductionMismatch(_) => BmStatus::VerificationFailed,
        _ => BmStatus::InvalidInput,
    }
}

/// Run `f`, translating errors and panics into a status and the last-error slot.
fn guard(f: impl FnOnce() -> Result<(), (BmStatus, String)>) -> BmStatus {
    clear_last_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => BmStatus::Ok,
        Ok(Err((status, msg))) => {
            set_last_error(msg);
            status
        }
        Err(_) => {
            set_last_error("internal panic".into());
            BmStatus::Panic
        }
    }
}

fn lib_err(e: Error) -> (BmStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(what: &str) -> (BmStatus, String) {
    (BmStatus::NullPointer, format!("{what} is null"))
}

unsafe fn context<'a>(ctx: *const BmContext) -> Result<&'a PrecisionContext, (BmStatus, String)> {
    ctx.as_ref().map(|c| &c.inner).ok_or_else(|| null("context"))
}

unsafe fn read_str<'a>(s: *const c_char, what: &str) -> Result<&'a str, (BmStatus, String)> {
    if s.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| (BmStatus::Utf8, format!("{what} is not valid UTF-8")))
}

fn c_string(s: String) -> *mut c_char {
    CString::new(s).map(CString::into_raw).unwrap_or(ptr::null_mut())
}

unsafe fn write_result(
    out: *mut BmResult,
    v: &BoundedReal,
    digits: u32,
    exact: Option<String>,
    pass: Option<bool>,
) {
    *out = BmResult {
        value: c_string(v.value_string(digits as usize)),
        error_bound: c_string(v.err_string()),
        exact: exact.map_or(ptr::null_mut(), c_string),
        approx: v.value().to_f64(),
        pass: pass.map_or(-1, i32::from),
    };
}

/// Create a context. `guard_digits == 0` selects the default guard.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn bm_context_new(target_digits: u32, guard_digits: u32, out: *mut *mut BmContext) -> BmStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let inner = if guard_digits == 0 {
            PrecisionContext::new(target_digits)
        } else {
            PrecisionContext::with_digits(target_digits, guard_digits)
        }
        .map_err(lib_err)?;
        *out = Box::into_raw(Box::new(BmContext { inner }));
        Ok(())
    })
}

/// Cap the quadrature refinement depth of `ctx`.
///
/// # Safety
/// `ctx` must be a live handle from [`bm_context_new`].
#[no_mangle]
pub unsafe extern "C" fn bm_context_set_max_level(ctx: *mut BmContext, max_level: u32) -> BmStatus {
    guard(|| {
        let c = ctx.as_mut().ok_or_else(|| null("context"))?;
        c.inner = c.inner.clone().with_max_level(max_level);
        Ok(())
    })
}

/// # Safety
/// `ctx` must be null or a handle from [`bm_context_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn bm_context_free(ctx: *mut BmContext) {
    if !ctx.is_null() {
        drop(Box::from_raw(ctx));
    }
}

/// `pi^pi_power * int_0^inf I0^a K0^b t^c dt`.
///
/// # Safety
/// `ctx` must be a live handle and `out` valid for writing.
#[no_mangle]
pub unsafe extern "C" fn bm_moment(
    ctx: *const BmContext,
    a: u32,
    b: u32,
    c: u32,
    pi_power: i32,
    out: *mut BmResult,
) -> BmStatus {
    guard(|| {
        let ctx = context(ctx)?;
        if out.is_null() {
            return Err(null("out"));
        }
        let spec = MomentSpec::new(a, b, c).with_pi_power(pi_power);
        let m = quadrature::moment(spec, ctx).map_err(lib_err)?;
        write_result(out, &m.value, ctx.target_digits(), None, None);
        Ok(())
    })
}

/// Evaluate a Z or Y sum rule; `fused != 0` integrates it as one integrand.
///
/// # Safety
/// `ctx` must be a live handle and `out` valid for writing.
#[no_mangle]
pub unsafe extern "C" fn bm_verify_sum_rule(
    ctx: *const BmContext,
    family: BmFamily,
    n: u32,
    k: u32,
    fused: i32,
    out: *mut BmResult,
) -> BmStatus {
    guard(|| {
        let ctx = context(ctx)?;
        if out.is_null() {
            return Err(null("out"));
        }
        let family = match family {
            BmFamily::Z => Family::Z,
            BmFamily::Y => Family::Y,
        };
        let spec = SumRuleSpec::new(family, n, k).map_err(lib_err)?;
        let report = if fused != 0 {
            sumrules::verify_sum_rule_fused(&spec, ctx)
        } else {
            sumrules::verify_sum_rule(&spec, ctx)
        }
        .map_err(lib_err)?;
        write_result(out, &report.value, ctx.target_digits(), Some("0".into()), Some(report.pass));
        Ok(())
    })
}

/// Crandall number `A(n)` by quadrature, checked against the exact value.
///
/// # Safety
/// `ctx` must be a live handle and `out` valid for writing.
#[no_mangle]
pub unsafe extern "C" fn bm_verify_crandall(ctx: *const BmContext, n: u32, out: *mut BmResult) -> BmStatus {
    guard(|| {
        let ctx = context(ctx)?;
        if out.is_null() {
            return Err(null("out"));
        }
        let exact_value = exact::crandall(n).map_err(lib_err)?;
        let v = sumrules::crandall_numeric(n, ctx).map_err(lib_err)?;
        let pass = v.contains(&Float::with_val(ctx.bits(), &exact_value));
        write_result(out, &v, ctx.target_digits(), Some(exact_value.to_string()), Some(pass));
        Ok(())
    })
}

/// Principal-value Hilbert transform of `function` (e.g. `"kappa_sq"`) at
/// `x` (decimal or `p/q`), with the closed-form image as reference.
///
/// # Safety
/// `ctx` must be a live handle, the strings NUL-terminated, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn bm_hilbert_pv(
    ctx: *const BmContext,
    function: *const c_char,
    x: *const c_char,
    out: *mut BmResult,
) -> BmStatus {
    guard(|| {
        let ctx = context(ctx)?;
        if out.is_null() {
            return Err(null("out"));
        }
        let f: PvFunction = read_str(function, "function")?.parse().map_err(lib_err)?;
        let q = parse_rational(read_str(x, "x")?).map_err(lib_err)?;
        let x = Float::with_val(ctx.bits(), &q);
        let v = quadrature::hilbert_pv(&PvQuery::new(f, x.clone()), ctx).map_err(lib_err)?;
        let image = quadrature::hilbert_image(f, &x, ctx).map_err(lib_err)?;
        let pass = v.clone().widen(image.err()).contains(image.value());
        let digits = ctx.target_digits();
        write_result(out, &v, digits, Some(image.value_string(digits as usize)), Some(pass));
        Ok(())
    })
}

/// Exact sequence member as a decimal integer or `p/q` string. `name` is one
/// of `domb`, `alpha`, `crandall`, `alpha_m`, `beta_m`, `br`; `m` is used by
/// the last three (it is `M` for `br`).
///
/// # Safety
/// `name` must be NUL-terminated and `out` valid for writing.
#[no_mangle]
pub unsafe extern "C" fn bm_sequence(name: *const c_char, m: u32, n: u32, out: *mut *mut c_char) -> BmStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let value = match read_str(name, "name")? {
            "domb" => exact::domb(n).to_string(),
            "alpha" => exact::alpha(n).map_err(lib_err)?.to_string(),
            "crandall" => exact::crandall(n).map_err(lib_err)?.to_string(),
            "alpha_m" => exact::alpha_m(m, n).map_err(lib_err)?.to_string(),
            "beta_m" => exact::beta_m(m, n).map_err(lib_err)?.to_string(),
            "br" => exact::broadhurst_roberts(m, n).map_err(lib_err)?.to_string(),
            other => return Err((BmStatus::InvalidInput, format!("unknown sequence '{other}'"))),
        };
        *out = c_string(value);
        Ok(())
    })
}

/// Message for the last failed call on this thread, or null. Valid until the
/// next call into this library on the same thread; do not free.
#[no_mangle]
pub extern "C" fn bm_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// # Safety
/// `s` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn bm_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Release the strings inside `r` and null them out.
///
/// # Safety
/// `r` must be null or point to a result filled by this library.
#[no_mangle]
pub unsafe extern "C" fn bm_result_free(r: *mut BmResult) {
    if let Some(r) = r.as_mut() {
        for p in [&mut r.value, &mut r.error_bound, &mut r.exact] {
            bm_string_free(*p);
            *p = ptr::null_mut();
        }
    }
}

/// Library version, static storage.
#[no_mangle]
pub extern "C" fn bm_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
