//! C ABI over `bsc_exponents`.
//!
//! Every fallible function returns a [`BscStatus`] and writes its result
//! through an out-pointer. On failure the out-pointer is left untouched and
//! [`bsc_last_error_message`] describes the error on the calling thread.
//! Bound curves and codes are opaque handles released with their `_free`
//! functions.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use bsc_exponents::bounds::{self, BoundCurve, EnvelopeContext, Region};
use bsc_exponents::combinatorics::{self, BinaryCode};
use bsc_exponents::rates::{self, CriticalRates};
use bsc_exponents::scalar::{self, ChannelParam};
use bsc_exponents::spectrum::{self, SpectrumArgs};
use bsc_exponents::Error;

/// Result codes shared by all functions.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BscStatus {
    Ok = 0,
    Domain = 1,
    Bracket = 2,
    NoConvergence = 3,
    Quadrature = 4,
    Integrality = 5,
    NotConstantWeight = 6,
    InvalidCode = 7,
    NullPointer = 8,
    OutOfRange = 9,
    Panic = 10,
}

impl From<&Error> for BscStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::Domain { .. } => BscStatus::Domain,
            Error::Bracket { .. } => BscStatus::Bracket,
            Error::NoConvergence { .. } => BscStatus::NoConvergence,
            Error::Quadrature { .. } => BscStatus::Quadrature,
            Error::Integrality(_) => BscStatus::Integrality,
            Error::NotConstantWeight { .. } => BscStatus::NotConstantWeight,
            Error::InvalidCode(_) => BscStatus::InvalidCode,
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

fn fail(status: BscStatus, msg: impl Into<String>) -> BscStatus {
    set_error(msg.into());
    status
}

/// Runs `f`, storing its value in `out`. Errors and panics become status codes.
fn guard<T, F>(out: *mut T, f: F) -> BscStatus
where
    F: FnOnce() -> Result<T, (BscStatus, String)>,
{
    if out.is_null() {
        return fail(BscStatus::NullPointer, "output pointer is null");
    }
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(v)) => {
            // SAFETY: checked non-null; the caller guarantees it is valid for writes.
            unsafe { out.write(v) };
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            BscStatus::Ok
        }
        Ok(Err((status, msg))) => fail(status, msg),
        Err(_) => fail(BscStatus::Panic, "internal panic"),
    }
}

fn lift<T>(r: bsc_exponents::Result<T>) -> Result<T, (BscStatus, String)> {
    r.map_err(|e| (BscStatus::from(&e), e.to_string()))
}

fn channel(p: f64) -> Result<ChannelParam, (BscStatus, String)> {
    lift(ChannelParam::new(p))
}

/// Message of the last failed call on this thread, or null. Valid until the
/// next call into this library from the same thread.
#[no_mangle]
pub extern "C" fn bsc_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn bsc_version() -> *const c_char {
    static VERSION: &CStr = match CStr::from_bytes_with_nul(concat!(env!("CARGO_PKG_VERSION"), "\0").as_bytes()) {
        Ok(v) => v,
        Err(_) => panic!("version string"),
    };
    VERSION.as_ptr()
}

/// Binary entropy in bits.
#[no_mangle]
pub extern "C" fn bsc_h2(x: f64, out: *mut f64) -> BscStatus {
    guard(out, || lift(scalar::h2(x)))
}

/// Inverse of the binary entropy on `[0, 1/2]`.
#[no_mangle]
pub extern "C" fn bsc_h2_inv(y: f64, out: *mut f64) -> BscStatus {
    guard(out, || lift(scalar::h2_inv(y)))
}

/// Binary KL divergence `D(x || y)` in bits.
#[no_mangle]
pub extern "C" fn bsc_kl_div(x: f64, y: f64, out: *mut f64) -> BscStatus {
    guard(out, || lift(scalar::kl_div(x, y)))
}

/// `G(alpha, tau)`.
#[no_mangle]
pub extern "C" fn bsc_g(alpha: f64, tau: f64, out: *mut f64) -> BscStatus {
    guard(out, || lift(scalar::g_func(alpha, tau)))
}

/// Gilbert-Varshamov radius `h2_inv(1 - rate)`.
#[no_mangle]
pub extern "C" fn bsc_delta_gv(rate: f64, out: *mut f64) -> BscStatus {
    guard(out, || lift(scalar::delta_gv(rate)))
}

/// `omega1(p) = 2 sqrt(pq) / (1 + 2 sqrt(pq))`.
#[no_mangle]
pub extern "C" fn bsc_omega1(p: f64, out: *mut f64) -> BscStatus {
    guard(out, || channel(p).map(scalar::omega1))
}

/// Rate-independent thresholds.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BscConstants {
    pub tau0: f64,
    pub r0: f64,
    pub p0: f64,
    pub p1: f64,
}

#[no_mangle]
pub extern "C" fn bsc_global_constants(out: *mut BscConstants) -> BscStatus {
    guard(out, || {
        lift(rates::global_constants()).map(|c| BscConstants {
            tau0: c.tau0,
            r0: c.r0,
            p0: c.p0,
            p1: c.p1,
        })
    })
}

/// Rate thresholds of one channel.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BscRates {
    pub p: f64,
    pub capacity: f64,
    pub r_crit: f64,
    pub r1: f64,
    pub r2: f64,
    pub r_min: f64,
}

impl From<CriticalRates> for BscRates {
    fn from(r: CriticalRates) -> Self {
        Self {
            p: r.p,
            capacity: r.capacity,
            r_crit: r.r_crit,
            r1: r.r1,
            r2: r.r2,
            r_min: r.r_min,
        }
    }
}

#[no_mangle]
pub extern "C" fn bsc_critical_rates(p: f64, out: *mut BscRates) -> BscStatus {
    guard(out, || lift(CriticalRates::compute(channel(p)?)).map(BscRates::from))
}

/// Optimizer of the linear-programming bound.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BscLpPoint {
    pub rate: f64,
    pub omega_r: f64,
    pub alpha_r: f64,
    pub tau_r: f64,
}

#[no_mangle]
pub extern "C" fn bsc_omega_lp(rate: f64, out: *mut BscLpPoint) -> BscStatus {
    guard(out, || {
        lift(rates::omega_lp(rate)).map(|pt| BscLpPoint {
            rate: pt.rate,
            omega_r: pt.omega_r,
            alpha_r: pt.alpha_r,
            tau_r: pt.tau_r,
        })
    })
}

/// Evaluation route for the spectrum exponent.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BscMuMethod {
    /// Closed form, with the `omega = 0` limit filled in.
    Auto = 0,
    Quadrature = 1,
    Closed = 2,
    /// Only for `alpha = 1/2`.
    Half = 3,
}

/// Spectrum exponent `mu(R, alpha, omega)`.
#[no_mangle]
pub extern "C" fn bsc_mu(rate: f64, alpha: f64, omega: f64, method: BscMuMethod, out: *mut f64) -> BscStatus {
    guard(out, || {
        let args = lift(SpectrumArgs::new(rate, alpha, omega))?;
        lift(match method {
            BscMuMethod::Auto => spectrum::mu(&args),
            BscMuMethod::Quadrature => spectrum::mu_integral(&args).map(|q| q.value),
            BscMuMethod::Closed => spectrum::mu_closed(&args),
            BscMuMethod::Half if args.alpha == 0.5 => spectrum::mu_half(args.rate, args.omega),
            BscMuMethod::Half => Err(Error::Domain {
                name: "alpha",
                value: alpha,
                constraint: "alpha = 1/2 for the half-weight form",
            }),
        })
    })
}

/// Sphere-packing exponent.
#[no_mangle]
pub extern "C" fn bsc_sphere_packing(rate: f64, p: f64, out: *mut f64) -> BscStatus {
    guard(out, || lift(bounds::sphere_packing_exponent(rate, channel(p)?)))
}

/// Lower envelope of the reliability function.
#[no_mangle]
pub extern "C" fn bsc_e_low(rate: f64, p: f64, out: *mut f64) -> BscStatus {
    guard(out, || lift(bounds::e_low(rate, channel(p)?)))
}

/// Upper envelope of the reliability function.
#[no_mangle]
pub extern "C" fn bsc_e_up(rate: f64, p: f64, out: *mut f64) -> BscStatus {
    guard(out, || {
        lift(EnvelopeContext::new(channel(p)?).and_then(|c| c.e_up(rate)))
    })
}

/// Active piece of the upper envelope.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BscRegion {
    BelowR2 = 0,
    StraightLine = 1,
    SpherePacking = 2,
}

impl From<Region> for BscRegion {
    fn from(r: Region) -> Self {
        match r {
            Region::BelowR2 => BscRegion::BelowR2,
            Region::StraightLine => BscRegion::StraightLine,
            Region::SpherePacking => BscRegion::SpherePacking,
        }
    }
}

/// One sampled rate of a bound curve.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BscBoundRow {
    pub rate: f64,
    pub e_low: f64,
    pub e_up: f64,
    pub region: BscRegion,
}

/// Opaque sampled pair of envelopes.
pub struct BscBoundCurve {
    inner: BoundCurve,
}

/// Samples both envelopes on `n_points` rates plus the seams. Free the
/// handle with [`bsc_bound_curve_free`].
#[no_mangle]
pub extern "C" fn bsc_bound_curve_new(p: f64, n_points: usize, out: *mut *mut BscBoundCurve) -> BscStatus {
    guard(out, || {
        let inner = lift(bounds::bound_curve(channel(p)?, n_points))?;
        Ok(Box::into_raw(Box::new(BscBoundCurve { inner })))
    })
}

/// Number of rows, 0 for a null handle.
///
/// # Safety
/// `curve` must be null or a live handle from [`bsc_bound_curve_new`].
#[no_mangle]
pub unsafe extern "C" fn bsc_bound_curve_len(curve: *const BscBoundCurve) -> usize {
    curve.as_ref().map_or(0, |c| c.inner.rows.len())
}

/// Copies row `index`.
///
/// # Safety
/// `curve` must be null or a live handle; `out` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn bsc_bound_curve_row(
    curve: *const BscBoundCurve,
    index: usize,
    out: *mut BscBoundRow,
) -> BscStatus {
    let Some(c) = curve.as_ref() else {
        return fail(BscStatus::NullPointer, "curve handle is null");
    };
    let Some(row) = c.inner.rows.get(index) else {
        return fail(
            BscStatus::OutOfRange,
            format!("row {index} out of range (len {})", c.inner.rows.len()),
        );
    };
    let row = BscBoundRow {
        rate: row.rate,
        e_low: row.e_low,
        e_up: row.e_up,
        region: row.region.into(),
    };
    guard(out, move || Ok(row))
}

/// Critical rates the curve was sampled with.
///
/// # Safety
/// `curve` must be null or a live handle; `out` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn bsc_bound_curve_rates(curve: *const BscBoundCurve, out: *mut BscRates) -> BscStatus {
    let Some(c) = curve.as_ref() else {
        return fail(BscStatus::NullPointer, "curve handle is null");
    };
    let rates = BscRates::from(c.inner.rates);
    guard(out, move || Ok(rates))
}

/// # Safety
/// `curve` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn bsc_bound_curve_free(curve: *mut BscBoundCurve) {
    if !curve.is_null() {
        drop(Box::from_raw(curve));
    }
}

/// Opaque binary code of length at most 64.
pub struct BscCode {
    inner: BinaryCode,
}

/// Builds a code from `m` words packed in the low `n` bits. Free the handle
/// with [`bsc_code_free`].
///
/// # Safety
/// `words` must point to `m` readable values.
#[no_mangle]
pub unsafe extern "C" fn bsc_code_new(n: usize, words: *const u64, m: usize, out: *mut *mut BscCode) -> BscStatus {
    if words.is_null() && m > 0 {
        return fail(BscStatus::NullPointer, "words pointer is null");
    }
    let list = if m == 0 {
        Vec::new()
    } else {
        std::slice::from_raw_parts(words, m).to_vec()
    };
    guard(out, move || {
        let inner = lift(BinaryCode::new(n, list))?;
        Ok(Box::into_raw(Box::new(BscCode { inner })))
    })
}

/// Number of codewords, 0 for a null handle.
///
/// # Safety
/// `code` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn bsc_code_len(code: *const BscCode) -> usize {
    code.as_ref().map_or(0, |c| c.inner.len())
}

/// Writes the `n + 1` ordered-pair counts by distance into `counts`;
/// `B_i = counts[i] / M`.
///
/// # Safety
/// `code` must be null or a live handle; `counts` must hold `len` values.
#[no_mangle]
pub unsafe extern "C" fn bsc_code_spectrum(code: *const BscCode, counts: *mut u64, len: usize) -> BscStatus {
    let Some(c) = code.as_ref() else {
        return fail(BscStatus::NullPointer, "code handle is null");
    };
    if counts.is_null() {
        return fail(BscStatus::NullPointer, "counts pointer is null");
    }
    let spec = combinatorics::spectrum(&c.inner);
    if len < spec.pair_counts.len() {
        return fail(
            BscStatus::OutOfRange,
            format!("counts buffer holds {len}, need {}", spec.pair_counts.len()),
        );
    }
    ptr::copy_nonoverlapping(spec.pair_counts.as_ptr(), counts, spec.pair_counts.len());
    BscStatus::Ok
}

/// Hypotheses and conclusion of the Johnson-type bound for one code.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BscLemma2Verdict {
    pub close_pairs: u64,
    pub spectrum_hypothesis: bool,
    pub radius_hypothesis: bool,
    pub conclusion: bool,
    pub plotkin_holds: bool,
}

/// # Safety
/// `code` must be null or a live handle; `out` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn bsc_lemma2_check(
    code: *const BscCode,
    omega: f64,
    delta: f64,
    a: f64,
    out: *mut BscLemma2Verdict,
) -> BscStatus {
    let Some(c) = code.as_ref() else {
        return fail(BscStatus::NullPointer, "code handle is null");
    };
    guard(out, || {
        lift(combinatorics::lemma2_check(&c.inner, omega, delta, a)).map(|v| BscLemma2Verdict {
            close_pairs: v.close_pairs,
            spectrum_hypothesis: v.spectrum_hypothesis,
            radius_hypothesis: v.radius_hypothesis,
            conclusion: v.conclusion,
            plotkin_holds: v.plotkin_holds,
        })
    })
}

/// # Safety
/// `code` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn bsc_code_free(code: *mut BscCode) {
    if !code.is_null() {
        drop(Box::from_raw(code));
    }
}
