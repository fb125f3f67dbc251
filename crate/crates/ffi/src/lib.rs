//! C interface to `taylorvar`.
//!
//! Every function returns a [`TvStatus`]; results go through out-pointers.
//! Objects are opaque handles created by `*_new`/`*_parse` and released by the
//! matching `*_free`. After a failure, [`tv_last_error`] copies a description
//! of the most recent error on the calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use taylorvar::dimension::{dimension_via_jacobian, taylor_dimension, SampleConfig};
use taylorvar::froberg::{compute_d0, exceptional_pairs, froberg_report, ExceptionalCensus};
use taylorvar::hessian::hessian_rank;
use taylorvar::pade::{build_pade_matrix, PadeMatrix, PadeParams};
use taylorvar::series::parse_poly;
use taylorvar::{Error, PrimeField, TruncatedPoly};

/// Status codes returned by every entry point.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TvStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    InvalidPrime = 3,
    Overflow = 4,
    Singular = 5,
    SamplesExhausted = 6,
    NotSquare = 7,
    Unsupported = 8,
    Parse = 9,
    OutOfRange = 10,
    Panic = 11,
}

impl From<&Error> for TvStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::InvalidPrime(_) => TvStatus::InvalidPrime,
            Error::Overflow(_) => TvStatus::Overflow,
            Error::Singular | Error::DivisionByZero => TvStatus::Singular,
            Error::SamplesExhausted(_) => TvStatus::SamplesExhausted,
            Error::NotSquare { .. } => TvStatus::NotSquare,
            Error::Unsupported(_) => TvStatus::Unsupported,
            Error::Parse(_) => TvStatus::Parse,
            _ => TvStatus::InvalidArgument,
        }
    }
}

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(msg: String) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

fn guard<F>(f: F) -> TvStatus
where
    F: FnOnce() -> Result<(), TvStatus>,
{
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => TvStatus::Ok,
        Ok(Err(status)) => status,
        Err(_) => {
            set_error("internal panic".into());
            TvStatus::Panic
        }
    }
}

fn fail(e: Error) -> TvStatus {
    let status = TvStatus::from(&e);
    set_error(e.to_string());
    status
}

fn null(what: &str) -> TvStatus {
    set_error(format!("{what} is null"));
    TvStatus::NullPointer
}

fn out_of_range(msg: String) -> TvStatus {
    set_error(msg);
    TvStatus::OutOfRange
}

fn to_i64(v: i128, what: &str) -> Result<i64, TvStatus> {
    i64::try_from(v).map_err(|_| {
        set_error(format!("{what} = {v} does not fit in 64 bits"));
        TvStatus::Overflow
    })
}

fn sample_config(prime: u64, seed: u64, trials: u32) -> Result<SampleConfig, TvStatus> {
    let field = PrimeField::new(prime).map_err(fail)?;
    Ok(SampleConfig::new(field, seed, trials.max(1) as usize))
}

/// Copies the last error message (NUL-terminated, truncated to fit) into
/// `buf` and returns the full message length in bytes.
///
/// # Safety
/// `buf` must be null or valid for writes of `len` bytes.
#[no_mangle]
pub unsafe extern "C" fn tv_last_error(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        if !buf.is_null() && len > 0 {
            let n = msg.len().min(len - 1);
            // SAFETY: caller guarantees `buf` holds `len` bytes and n < len.
            unsafe {
                ptr::copy_nonoverlapping(msg.as_ptr(), buf as *mut u8, n);
                *buf.add(n) = 0;
            }
        }
        msg.len()
    })
}

/// A truncated polynomial over a prime field.
pub struct TvSeries(TruncatedPoly);

/// Parses a polynomial such as `"1 + 2*x1 - x1*x2^2"` in `n` variables,
/// truncated at total degree `bound`.
///
/// # Safety
/// `text` must be a valid NUL-terminated string, `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tv_series_parse(prime: u64, n: u32, bound: u32, text: *const c_char, out: *mut *mut TvSeries) -> TvStatus {
    guard(|| {
        if text.is_null() {
            return Err(null("text"));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        // SAFETY: checked non-null; caller guarantees NUL termination.
        let s = unsafe { CStr::from_ptr(text) }.to_str().map_err(|_| fail(Error::Parse("text is not UTF-8".into())))?;
        let field = PrimeField::new(prime).map_err(fail)?;
        let poly = parse_poly(field, n as usize, bound, s).map_err(fail)?;
        // SAFETY: `out` checked non-null.
        unsafe { *out = Box::into_raw(Box::new(TvSeries(poly))) };
        Ok(())
    })
}

/// Coefficient of `x^exponent` (an array of `n` entries) as a residue.
///
/// # Safety
/// `series` must come from [`tv_series_parse`]; `exponent` must hold `n` values.
#[no_mangle]
pub unsafe extern "C" fn tv_series_coeff(series: *const TvSeries, exponent: *const u32, n: u32, out: *mut u64) -> TvStatus {
    guard(|| {
        // SAFETY: caller passes a live handle or null.
        let s = unsafe { series.as_ref() }.ok_or_else(|| null("series"))?;
        if exponent.is_null() {
            return Err(null("exponent"));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        if n as usize != s.0.n() {
            return Err(fail(Error::VariableMismatch { left: s.0.n(), right: n as usize }));
        }
        // SAFETY: caller guarantees `n` readable entries.
        let entries = unsafe { std::slice::from_raw_parts(exponent, n as usize) }.to_vec();
        let c = s.0.coeff(&taylorvar::Exponent::new(entries));
        // SAFETY: `out` checked non-null.
        unsafe { *out = c.value() };
        Ok(())
    })
}

/// # Safety
/// `series` must be null or a handle from [`tv_series_parse`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn tv_series_free(series: *mut TvSeries) {
    if !series.is_null() {
        // SAFETY: handle was produced by Box::into_raw.
        drop(unsafe { Box::from_raw(series) });
    }
}

/// A Padé matrix evaluated at a series.
pub struct TvPadeMatrix(PadeMatrix);

/// Builds `P_T` of type `(d, e)` for the series (its bound is `m`).
///
/// # Safety
/// `series` must be a live handle; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tv_pade_matrix_new(series: *const TvSeries, d: u32, e: u32, out: *mut *mut TvPadeMatrix) -> TvStatus {
    guard(|| {
        // SAFETY: caller passes a live handle or null.
        let s = unsafe { series.as_ref() }.ok_or_else(|| null("series"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let pm = build_pade_matrix(&s.0, d, e).map_err(fail)?;
        // SAFETY: `out` checked non-null.
        unsafe { *out = Box::into_raw(Box::new(TvPadeMatrix(pm))) };
        Ok(())
    })
}

/// # Safety
/// `matrix` must be a live handle; `rows` and `cols` valid pointers.
#[no_mangle]
pub unsafe extern "C" fn tv_pade_matrix_shape(matrix: *const TvPadeMatrix, rows: *mut usize, cols: *mut usize) -> TvStatus {
    guard(|| {
        // SAFETY: caller passes a live handle or null.
        let m = unsafe { matrix.as_ref() }.ok_or_else(|| null("matrix"))?;
        if rows.is_null() || cols.is_null() {
            return Err(null("rows/cols"));
        }
        // SAFETY: both checked non-null.
        unsafe {
            *rows = m.0.matrix.rows();
            *cols = m.0.matrix.cols();
        }
        Ok(())
    })
}

/// Entry at `(row, col)` as a residue in `0..p`.
///
/// # Safety
/// `matrix` must be a live handle; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tv_pade_matrix_get(matrix: *const TvPadeMatrix, row: usize, col: usize, out: *mut u64) -> TvStatus {
    guard(|| {
        // SAFETY: caller passes a live handle or null.
        let m = unsafe { matrix.as_ref() }.ok_or_else(|| null("matrix"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let (r, c) = (m.0.matrix.rows(), m.0.matrix.cols());
        if row >= r || col >= c {
            return Err(out_of_range(format!("entry ({row}, {col}) outside {r}x{c}")));
        }
        // SAFETY: `out` checked non-null.
        unsafe { *out = m.0.matrix.get(row, col).value() };
        Ok(())
    })
}

/// # Safety
/// `matrix` must be a live handle; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tv_pade_matrix_rank(matrix: *const TvPadeMatrix, out: *mut usize) -> TvStatus {
    guard(|| {
        // SAFETY: caller passes a live handle or null.
        let m = unsafe { matrix.as_ref() }.ok_or_else(|| null("matrix"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        // SAFETY: `out` checked non-null.
        unsafe { *out = m.0.rank() };
        Ok(())
    })
}

/// # Safety
/// `matrix` must be null or a handle from [`tv_pade_matrix_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn tv_pade_matrix_free(matrix: *mut TvPadeMatrix) {
    if !matrix.is_null() {
        // SAFETY: handle was produced by Box::into_raw.
        drop(unsafe { Box::from_raw(matrix) });
    }
}

/// Dimension data of one Taylor variety.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct TvDimension {
    pub expected: u64,
    pub actual: u64,
    pub ambient: u64,
    pub parameters: u64,
    pub defect: u64,
    pub fiber: u64,
}

/// Dimension from the rank of the reduced Padé matrix at random points.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tv_taylor_dimension(
    prime: u64,
    seed: u64,
    trials: u32,
    n: u32,
    d: u32,
    e: u32,
    m: u32,
    out: *mut TvDimension,
) -> TvStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let cfg = sample_config(prime, seed, trials)?;
        let r = taylor_dimension(PadeParams::new(n as usize, d, e, m), &cfg).map_err(fail)?;
        let dim = TvDimension {
            expected: r.expected_dim,
            actual: r.actual_dim,
            ambient: r.ambient_dim,
            parameters: r.parameter_count,
            defect: r.defect,
            fiber: r.fiber_dim,
        };
        // SAFETY: `out` checked non-null.
        unsafe { *out = dim };
        Ok(())
    })
}

/// Dimension from the Jacobian of the parametrization.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tv_jacobian_dimension(prime: u64, seed: u64, trials: u32, n: u32, d: u32, e: u32, m: u32, out: *mut u64) -> TvStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let cfg = sample_config(prime, seed, trials)?;
        let dim = dimension_via_jacobian(PadeParams::new(n as usize, d, e, m), &cfg).map_err(fail)?;
        // SAFETY: `out` checked non-null.
        unsafe { *out = dim };
        Ok(())
    })
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct TvFroberg {
    pub alpha: i64,
    pub beta: i64,
    pub w: i64,
    pub defective_predicted: bool,
}

/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tv_froberg(n: u32, d: u32, e: u32, out: *mut TvFroberg) -> TvStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let r = froberg_report(n as usize, d, e).map_err(fail)?;
        let v = TvFroberg {
            alpha: to_i64(r.alpha, "alpha")?,
            beta: to_i64(r.beta, "beta")?,
            w: to_i64(r.w, "W")?,
            defective_predicted: r.defective_predicted,
        };
        // SAFETY: `out` checked non-null.
        unsafe { *out = v };
        Ok(())
    })
}

/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tv_compute_d0(n: u32, out: *mut u32) -> TvStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let d0 = compute_d0(n as usize).map_err(fail)?;
        // SAFETY: `out` checked non-null.
        unsafe { *out = d0 };
        Ok(())
    })
}

/// The exceptional pairs for `n` variables.
pub struct TvCensus(ExceptionalCensus);

/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tv_census_new(n: u32, out: *mut *mut TvCensus) -> TvStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let c = exceptional_pairs(n as usize).map_err(fail)?;
        // SAFETY: `out` checked non-null.
        unsafe { *out = Box::into_raw(Box::new(TvCensus(c))) };
        Ok(())
    })
}

/// Number of pairs and the threshold `d0`.
///
/// # Safety
/// `census` must be a live handle; `count` and `d0` valid pointers.
#[no_mangle]
pub unsafe extern "C" fn tv_census_info(census: *const TvCensus, count: *mut usize, d0: *mut u32) -> TvStatus {
    guard(|| {
        // SAFETY: caller passes a live handle or null.
        let c = unsafe { census.as_ref() }.ok_or_else(|| null("census"))?;
        if count.is_null() || d0.is_null() {
            return Err(null("count/d0"));
        }
        // SAFETY: both checked non-null.
        unsafe {
            *count = c.0.pairs.len();
            *d0 = c.0.d0;
        }
        Ok(())
    })
}

/// Pair number `index` in lexicographic order.
///
/// # Safety
/// `census` must be a live handle; `d` and `e` valid pointers.
#[no_mangle]
pub unsafe extern "C" fn tv_census_pair(census: *const TvCensus, index: usize, d: *mut u32, e: *mut u32) -> TvStatus {
    guard(|| {
        // SAFETY: caller passes a live handle or null.
        let c = unsafe { census.as_ref() }.ok_or_else(|| null("census"))?;
        if d.is_null() || e.is_null() {
            return Err(null("d/e"));
        }
        let &(pd, pe) = c.0.pairs.get(index).ok_or_else(|| out_of_range(format!("pair {index} of {}", c.0.pairs.len())))?;
        // SAFETY: both checked non-null.
        unsafe {
            *d = pd;
            *e = pe;
        }
        Ok(())
    })
}

/// # Safety
/// `census` must be null or a handle from [`tv_census_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn tv_census_free(census: *mut TvCensus) {
    if !census.is_null() {
        // SAFETY: handle was produced by Box::into_raw.
        drop(unsafe { Box::from_raw(census) });
    }
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct TvHessian {
    pub vars: u64,
    pub rank: u64,
    pub corank: u64,
}

/// Generic Hessian rank of `det(P_T)` for a square Padé matrix.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tv_hessian_rank(prime: u64, seed: u64, trials: u32, n: u32, d: u32, e: u32, m: u32, out: *mut TvHessian) -> TvStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let cfg = sample_config(prime, seed, trials)?;
        let r = hessian_rank(PadeParams::new(n as usize, d, e, m), &cfg).map_err(fail)?;
        let h = TvHessian { vars: r.vars.len() as u64, rank: r.rank as u64, corank: r.corank as u64 };
        // SAFETY: `out` checked non-null.
        unsafe { *out = h };
        Ok(())
    })
}
