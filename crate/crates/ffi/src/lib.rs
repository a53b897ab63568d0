//! C ABI over `bianchi-core`.
//!
//! Every fallible entry point returns a [`BianchiStatus`] and writes its
//! result through an out-pointer. On failure the message is available from
//! [`bianchi_last_error_message`] on the same thread. Objects with state are
//! exposed as opaque handles with matching `_new`/`_free` pairs.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::fs::File;
use std::io::BufReader;
use std::panic::{catch_unwind, AssertUnwindSafe};

use bianchi_core::autoforms::{cuspform_eval, load_coefficients, CuspFormData};
use bianchi_core::eisenstein::{
    check_automorphy, eisenstein_eval, EisensteinEvaluator, GroupElement, HyperbolicPoint,
};
use bianchi_core::exponents::{
    aggregate_with, q1_closed, AggregateOptions, LPolicy, Q1Treatment, Regime, SpectralQuadruple,
};
use bianchi_core::quadfield::Field;
use bianchi_core::specfun::{bessel_k_scaled, log_gamma};
use bianchi_core::tripleprod::{t_integral_closed, TripleSpectrum};
use bianchi_core::zeta::ZetaContext;
use bianchi_core::{Complex64, Error};

/// Result of a call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BianchiStatus {
    Ok = 0,
    InvalidArgument = 1,
    UnsupportedField = 2,
    Pole = 3,
    OutOfWindow = 4,
    SingularPoint = 5,
    TruncationFailure = 6,
    Nonconvergence = 7,
    Parse = 8,
    InvalidData = 9,
    PolicyMismatch = 10,
    Io = 11,
    NullPointer = 12,
    Panic = 13,
}

impl From<&Error> for BianchiStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::UnsupportedField(_) => BianchiStatus::UnsupportedField,
            Error::InvalidArgument(_) | Error::InvalidGroupElement(_) => {
                BianchiStatus::InvalidArgument
            }
            Error::Pole(_) => BianchiStatus::Pole,
            Error::OutOfWindow(_) => BianchiStatus::OutOfWindow,
            Error::SingularPoint(_) => BianchiStatus::SingularPoint,
            Error::TruncationFailure { .. } => BianchiStatus::TruncationFailure,
            Error::Nonconvergence(_) => BianchiStatus::Nonconvergence,
            Error::Parse { .. } => BianchiStatus::Parse,
            Error::DuplicateIndex { .. }
            | Error::CoverageGap { .. }
            | Error::FieldMismatch(_)
            | Error::CoverageExceeded { .. } => BianchiStatus::InvalidData,
            Error::PolicyMismatch(_) => BianchiStatus::PolicyMismatch,
            Error::Io(_) => BianchiStatus::Io,
        }
    }
}

/// A complex number as two doubles.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct BianchiComplex {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for BianchiComplex {
    fn from(z: Complex64) -> Self {
        BianchiComplex { re: z.re, im: z.im }
    }
}

impl From<BianchiComplex> for Complex64 {
    fn from(z: BianchiComplex) -> Self {
        Complex64::new(z.re, z.im)
    }
}

/// Aggregated exponent bound at one `(t_f, t_g, t_k)`.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct BianchiBoundSummary {
    /// Log of the sum below the truncation threshold.
    pub aggregate_ln: f64,
    /// Log of the tail above the threshold.
    pub tail_ln: f64,
    pub threshold: f64,
    /// `Q1` at the dominant term.
    pub q1: f64,
    pub dominant_t_j: f64,
    /// 1 in the exponential-decay regime, 0 in the main regime.
    pub exponential_regime: i32,
}

/// Eisenstein series evaluator for one field.
pub struct BianchiEvaluator(EisensteinEvaluator);

/// Dedekind zeta function of one field.
pub struct BianchiZeta(ZetaContext);

/// Cusp form loaded from a coefficient file.
pub struct BianchiCuspForm(CuspFormData);

enum Failure {
    Core(Error),
    Null(&'static str),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn guard<F: FnOnce() -> Result<(), Failure>>(f: F) -> BianchiStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => BianchiStatus::Ok,
        Ok(Err(Failure::Core(e))) => {
            set_last_error(e.to_string());
            BianchiStatus::from(&e)
        }
        Ok(Err(Failure::Null(name))) => {
            set_last_error(format!("null pointer: {name}"));
            BianchiStatus::NullPointer
        }
        Err(_) => {
            set_last_error("internal panic".into());
            BianchiStatus::Panic
        }
    }
}

fn out<'a, T>(p: *mut T, name: &'static str) -> Result<&'a mut T, Failure> {
    // SAFETY: callers pass either null or a valid, writable, aligned pointer.
    unsafe { p.as_mut() }.ok_or(Failure::Null(name))
}

fn handle<'a, T>(p: *const T, name: &'static str) -> Result<&'a T, Failure> {
    // SAFETY: callers pass either null or a live handle from the matching `_new`.
    unsafe { p.as_ref() }.ok_or(Failure::Null(name))
}

fn boxed<T>(value: T, dst: *mut *mut T, name: &'static str) -> Result<(), Failure> {
    let slot = out(dst, name)?;
    *slot = Box::into_raw(Box::new(value));
    Ok(())
}

/// Message of the most recent failure on this thread, or an empty string.
/// The pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn bianchi_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn bianchi_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Creates an evaluator over `Q(√d)` with Fourier tail tolerance
/// `tail_tolerance`.
///
/// # Safety
/// `out_evaluator` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn bianchi_evaluator_new(
    d: i64,
    tail_tolerance: f64,
    out_evaluator: *mut *mut BianchiEvaluator,
) -> BianchiStatus {
    guard(|| {
        let ev = EisensteinEvaluator::for_field(Field::new(d)?, tail_tolerance)?;
        boxed(BianchiEvaluator(ev), out_evaluator, "out_evaluator")
    })
}

/// Releases an evaluator; null is ignored.
///
/// # Safety
/// `evaluator` must be null or a handle from [`bianchi_evaluator_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn bianchi_evaluator_free(evaluator: *mut BianchiEvaluator) {
    if !evaluator.is_null() {
        drop(Box::from_raw(evaluator));
    }
}

/// `E(P, it)` at `P = x + iy + rj`.
///
/// # Safety
/// `evaluator` must be a live handle and `out_value` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn bianchi_eisenstein_eval(
    evaluator: *const BianchiEvaluator,
    x: f64,
    y: f64,
    r: f64,
    t: f64,
    out_value: *mut BianchiComplex,
) -> BianchiStatus {
    guard(|| {
        let ev = handle(evaluator, "evaluator")?;
        let v = eisenstein_eval(&ev.0, &HyperbolicPoint::new(x, y, r)?, t)?;
        *out(out_value, "out_value")? = v.into();
        Ok(())
    })
}

/// Relative automorphy residual `|E(γP) − E(P)| / |E(P)|` for
/// `γ = Π_k T^{a_k + b_k ω} S`, with `letters` holding `2·n_letters`
/// integers `a_1, b_1, a_2, b_2, …`.
///
/// # Safety
/// `evaluator` must be a live handle, `letters` valid for `2·n_letters`
/// reads (or null when `n_letters` is 0) and `out_residual` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn bianchi_check_automorphy(
    evaluator: *const BianchiEvaluator,
    letters: *const i64,
    n_letters: usize,
    x: f64,
    y: f64,
    r: f64,
    t: f64,
    out_residual: *mut f64,
) -> BianchiStatus {
    guard(|| {
        let ev = handle(evaluator, "evaluator")?;
        let raw: &[i64] = if n_letters == 0 {
            &[]
        } else if letters.is_null() {
            return Err(Failure::Null("letters"));
        } else {
            std::slice::from_raw_parts(letters, 2 * n_letters)
        };
        let word: Vec<(i64, i64)> = raw.chunks_exact(2).map(|c| (c[0], c[1])).collect();
        let g = GroupElement::from_word(ev.0.field(), &word);
        let res = check_automorphy(&ev.0, &HyperbolicPoint::new(x, y, r)?, t, &g)?;
        *out(out_residual, "out_residual")? = res;
        Ok(())
    })
}

/// Creates a Dedekind zeta context for `Q(√d)` with relative precision target
/// `precision`.
///
/// # Safety
/// `out_zeta` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn bianchi_zeta_new(
    d: i64,
    precision: f64,
    out_zeta: *mut *mut BianchiZeta,
) -> BianchiStatus {
    guard(|| {
        let ctx = ZetaContext::new(Field::new(d)?, precision)?;
        boxed(BianchiZeta(ctx), out_zeta, "out_zeta")
    })
}

/// Releases a zeta context; null is ignored.
///
/// # Safety
/// `zeta` must be null or a handle from [`bianchi_zeta_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn bianchi_zeta_free(zeta: *mut BianchiZeta) {
    if !zeta.is_null() {
        drop(Box::from_raw(zeta));
    }
}

/// `ζ_K(s)`.
///
/// # Safety
/// `zeta` must be a live handle and `out_value` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn bianchi_dedekind_zeta(
    zeta: *const BianchiZeta,
    s: BianchiComplex,
    out_value: *mut BianchiComplex,
) -> BianchiStatus {
    guard(|| {
        let v = handle(zeta, "zeta")?.0.dedekind_zeta(s.into())?;
        *out(out_value, "out_value")? = v.into();
        Ok(())
    })
}

/// Scattering coefficient `φ(s)`.
///
/// # Safety
/// `zeta` must be a live handle and `out_value` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn bianchi_scattering_phi(
    zeta: *const BianchiZeta,
    s: BianchiComplex,
    out_value: *mut BianchiComplex,
) -> BianchiStatus {
    guard(|| {
        let v = handle(zeta, "zeta")?.0.scattering_phi(s.into())?;
        *out(out_value, "out_value")? = v.into();
        Ok(())
    })
}

/// Loads a cusp-form coefficient file.
///
/// # Safety
/// `path` must be null or a NUL-terminated UTF-8 string and `out_form`
/// null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn bianchi_cuspform_load(
    path: *const c_char,
    out_form: *mut *mut BianchiCuspForm,
) -> BianchiStatus {
    guard(|| {
        if path.is_null() {
            return Err(Failure::Null("path"));
        }
        let path = CStr::from_ptr(path)
            .to_str()
            .map_err(|e| Error::InvalidArgument(format!("path is not UTF-8: {e}")))?;
        let file = File::open(path).map_err(|e| Error::Io(format!("{path}: {e}")))?;
        let form = load_coefficients(BufReader::new(file))?;
        boxed(BianchiCuspForm(form), out_form, "out_form")
    })
}

/// Releases a cusp form; null is ignored.
///
/// # Safety
/// `form` must be null or a handle from [`bianchi_cuspform_load`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn bianchi_cuspform_free(form: *mut BianchiCuspForm) {
    if !form.is_null() {
        drop(Box::from_raw(form));
    }
}

/// Value of the cusp form at `P = x + iy + rj`. `out_tail_risk` may be null;
/// otherwise it receives 1 when the truncation may be unsafe.
///
/// # Safety
/// `form` must be a live handle, `out_value` valid for writes and
/// `out_tail_risk` null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn bianchi_cuspform_eval(
    form: *const BianchiCuspForm,
    x: f64,
    y: f64,
    r: f64,
    out_value: *mut BianchiComplex,
    out_tail_risk: *mut i32,
) -> BianchiStatus {
    guard(|| {
        let e = cuspform_eval(&handle(form, "form")?.0, &HyperbolicPoint::new(x, y, r)?)?;
        *out(out_value, "out_value")? = e.value.into();
        if let Some(flag) = out_tail_risk.as_mut() {
            *flag = e.tail_risk as i32;
        }
        Ok(())
    })
}

/// Spectral parameter `t` of a loaded cusp form.
///
/// # Safety
/// `form` must be a live handle and `out_t` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn bianchi_cuspform_spectral_parameter(
    form: *const BianchiCuspForm,
    out_t: *mut f64,
) -> BianchiStatus {
    guard(|| {
        *out(out_t, "out_t")? = handle(form, "form")?.0.t;
        Ok(())
    })
}

/// Principal-branch `ln Γ(z)`.
///
/// # Safety
/// `out_value` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn bianchi_log_gamma(
    z: BianchiComplex,
    out_value: *mut BianchiComplex,
) -> BianchiStatus {
    guard(|| {
        *out(out_value, "out_value")? = log_gamma(z.into())?.into();
        Ok(())
    })
}

/// `cosh(πt/2) K_{it}(u)`.
///
/// # Safety
/// `out_value` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn bianchi_bessel_k_scaled(
    t: f64,
    u: f64,
    out_value: *mut f64,
) -> BianchiStatus {
    guard(|| {
        *out(out_value, "out_value")? = bessel_k_scaled(t, u)?;
        Ok(())
    })
}

/// Gamma closed form of the archimedean triple-product integral.
///
/// # Safety
/// `out_value` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn bianchi_t_integral_closed(
    t1: f64,
    t2: f64,
    t3: f64,
    out_value: *mut BianchiComplex,
) -> BianchiStatus {
    guard(|| {
        let v = t_integral_closed(&TripleSpectrum::new(t1, t2, t3)?)?;
        *out(out_value, "out_value")? = v.into();
        Ok(())
    })
}

/// `Q1(t_j; t_f, t_g, t_k)`.
///
/// # Safety
/// `out_value` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn bianchi_q1(
    t_j: f64,
    t_f: f64,
    t_g: f64,
    t_k: f64,
    out_value: *mut f64,
) -> BianchiStatus {
    guard(|| {
        *out(out_value, "out_value")? = q1_closed(&SpectralQuadruple::new(t_j, t_f, t_g, t_k)?);
        Ok(())
    })
}

/// Aggregated bound under the GLH policy with exponent `delta`, spectral
/// density `t_j^{density_exponent}` and `Q1` kept exactly when `exact_q1` is
/// nonzero.
///
/// # Safety
/// `out_summary` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn bianchi_aggregate(
    t_f: f64,
    t_g: f64,
    t_k: f64,
    delta: f64,
    density_exponent: f64,
    exact_q1: i32,
    out_summary: *mut BianchiBoundSummary,
) -> BianchiStatus {
    guard(|| {
        let opts = AggregateOptions {
            density_exponent,
            q1_treatment: if exact_q1 != 0 {
                Q1Treatment::Exact
            } else {
                Q1Treatment::TrivialBound
            },
            ..Default::default()
        };
        let r = aggregate_with(t_f, t_g, t_k, &LPolicy::glh(delta)?, &opts)?;
        *out(out_summary, "out_summary")? = BianchiBoundSummary {
            aggregate_ln: r.aggregate,
            tail_ln: r.tail,
            threshold: r.threshold,
            q1: r.q1,
            dominant_t_j: r.dominant_t_j,
            exponential_regime: (r.regime == Regime::ExponentialDecay) as i32,
        };
        Ok(())
    })
}
